#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

#include "hinn/error.hpp"
#include "hinn/model.hpp"
#include "hinn/rng.hpp"

using namespace hinn;
using Catch::Matchers::WithinAbs;

namespace {

Matrix from_rows(std::size_t rows, std::size_t cols, std::vector<double> values) {
  Matrix m(rows, cols);
  m.data = std::move(values);
  return m;
}

// n=1, m=2, l=1, d=1 embedding model with all-ones weights except where noted:
// f1 = relu(o), e1 = relu(2·relu(o)), f2 = relu(o + e1) + 0.5.
HinnModel tiny_embed_model() {
  HinnModel model;
  model.n = 1;
  model.hp.m = 2;
  model.hp.l = 1;
  model.hp.d = 1;
  model.hp.mode = Mode::hinn;
  model.normalizer = identity_normalizer(1, NormMethod::maximization);
  model.option_names = {"o1"};

  Block b1;
  b1.w = {from_rows(1, 1, {1.0})};
  b1.b = {Vector{0.0}};
  b1.head_w = {1.0};
  b1.head_b = 0.0;
  b1.embed_w = from_rows(1, 1, {2.0});
  b1.embed_b = {0.0};

  Block b2;
  b2.w = {from_rows(2, 1, {1.0, 1.0})};
  b2.b = {Vector{0.0}};
  b2.head_w = {1.0};
  b2.head_b = 0.5;
  b2.embed_w = from_rows(1, 1, {1.0});  // allocated but never consumed
  b2.embed_b = {0.0};

  model.blocks = {b1, b2};
  return model;
}

}  // namespace

TEST_CASE("mode names round-trip, short command-line forms included") {
  for (Mode m : {Mode::hinn, Mode::mb_fnn, Mode::l2_hinn, Mode::plain_hinn, Mode::dropout_hinn,
                 Mode::deepperf_reduction}) {
    CHECK(mode_from_string(to_string(m)) == m);
  }
  CHECK(mode_from_string("mb-fnn") == Mode::mb_fnn);
  CHECK(mode_from_string("l2") == Mode::l2_hinn);
  CHECK(mode_from_string("plain") == Mode::plain_hinn);
  CHECK(mode_from_string("dropout") == Mode::dropout_hinn);
  CHECK(mode_from_string("deepperf") == Mode::deepperf_reduction);
  CHECK_THROWS_AS(mode_from_string("transformer"), ConfigError);
}

TEST_CASE("hyperparameter validation rejects out-of-range settings") {
  Hyperparams hp;
  hp.validate();  // defaults are fine

  Hyperparams bad = hp;
  bad.m = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = hp;
  bad.l = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = hp;
  bad.lambda = -0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = hp;
  bad.lr0 = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = hp;
  bad.mode = Mode::deepperf_reduction;
  bad.m = 2;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.m = 1;
  bad.validate();
  bad = hp;
  bad.mode = Mode::dropout_hinn;
  bad.dropout_rate = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.dropout_rate = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.dropout_rate = 0.5;
  bad.validate();
}

TEST_CASE("block input widths grow with depth only in embedding modes") {
  const std::size_t n = 2;
  std::vector<std::size_t> widths;
  for (std::size_t j = 1; j <= 3; ++j) widths.push_back(block_input_width(Mode::hinn, n, j));
  CHECK(widths == std::vector<std::size_t>{2, 4, 6});
  CHECK(block_input_width(Mode::mb_fnn, n, 3) == 2);
  CHECK(block_input_width(Mode::deepperf_reduction, n, 1) == 2);
  CHECK(block_input_width(Mode::l2_hinn, 5, 4) == 20);
}

TEST_CASE("new_model allocates the documented shapes") {
  Hyperparams hp;
  hp.m = 3;
  hp.l = 2;
  hp.d = 4;
  Rng rng(1);
  const HinnModel model = new_model(5, hp, rng);
  REQUIRE(model.blocks.size() == 3);
  for (std::size_t j = 0; j < 3; ++j) {
    const Block& blk = model.blocks[j];
    REQUIRE(blk.w.size() == 2);
    CHECK(blk.w[0].rows == (j + 1) * 5);
    CHECK(blk.w[0].cols == 4);
    CHECK(blk.w[1].rows == 4);
    CHECK(blk.w[1].cols == 4);
    CHECK(blk.head_w.size() == 4);
    CHECK(blk.head_b == 0.0);
    REQUIRE(blk.has_embed());
    CHECK(blk.embed_w.rows == 4);
    CHECK(blk.embed_w.cols == 5);
    for (const Vector& b : blk.b) {
      for (double v : b) CHECK(v == 0.0);
    }
  }

  Hyperparams fnn = hp;
  fnn.mode = Mode::mb_fnn;
  Rng rng2(1);
  const HinnModel ablation = new_model(5, fnn, rng2);
  for (const Block& blk : ablation.blocks) {
    CHECK(blk.w[0].rows == 5);
    CHECK_FALSE(blk.has_embed());
  }
}

TEST_CASE("new_model is bit-identical for equal seeds") {
  Hyperparams hp;
  hp.m = 2;
  hp.l = 2;
  hp.d = 8;
  Rng a(77), b(77), c(78);
  const HinnModel ma = new_model(3, hp, a);
  const HinnModel mb = new_model(3, hp, b);
  const HinnModel mc = new_model(3, hp, c);
  CHECK(ma.blocks[1].w[0].data == mb.blocks[1].w[0].data);
  CHECK(ma.blocks[1].head_w == mb.blocks[1].head_w);
  CHECK(ma.blocks[0].embed_w.data == mb.blocks[0].embed_w.data);
  CHECK(ma.blocks[0].w[0].data != mc.blocks[0].w[0].data);
}

TEST_CASE("parameter count formula matches the allocated tensors") {
  // spot values for the published architecture size
  CHECK(param_count(16, 128, 2, 1) == 20881);
  CHECK(param_count(16, 128, 2, 2) == 22929);

  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Hyperparams hp;
    hp.m = 1 + static_cast<int>(rng.next_u64() % 4);
    hp.l = 1 + static_cast<int>(rng.next_u64() % 3);
    hp.d = 1 + static_cast<int>(rng.next_u64() % 32);
    const std::size_t n = 1 + rng.next_u64() % 6;
    const HinnModel model = new_model(n, hp, rng);
    std::size_t expected = 0;
    for (std::size_t j = 1; j <= static_cast<std::size_t>(hp.m); ++j) {
      expected += param_count(n, static_cast<std::size_t>(hp.d),
                              static_cast<std::size_t>(hp.l), j);
    }
    CHECK(model_param_count(model) == expected);
  }
}

TEST_CASE("forward of a hand-built identity block") {
  HinnModel model;
  model.n = 2;
  model.hp.m = 1;
  model.hp.l = 1;
  model.hp.d = 2;
  model.hp.mode = Mode::plain_hinn;
  model.normalizer = identity_normalizer(2, NormMethod::maximization);
  Block blk;
  blk.w = {from_rows(2, 2, {1.0, 0.0, 0.0, 1.0})};
  blk.b = {Vector{0.0, 0.0}};
  blk.head_w = {1.0, 1.0};
  blk.head_b = 0.0;
  blk.embed_w = from_rows(2, 2, {0.0, 0.0, 0.0, 0.0});
  blk.embed_b = {0.0, 0.0};
  model.blocks = {blk};

  const ForwardTrace t = forward(model, {2.0, 3.0});
  CHECK(t.prediction == 5.0);
  REQUIRE(t.partials.size() == 1);
  CHECK(t.partials[0] == 5.0);

  // negative inputs are clamped by the hidden ReLU
  CHECK(forward(model, {-2.0, 3.0}).prediction == 3.0);
}

TEST_CASE("two-block embedding wiring matches the hand computation") {
  const HinnModel model = tiny_embed_model();

  const ForwardTrace t = forward(model, {3.0});
  CHECK_THAT(t.partials[0], WithinAbs(3.0, 0.0));   // relu(3)
  CHECK_THAT(t.partials[1], WithinAbs(9.5, 0.0));   // relu(3 + relu(2*3)) + 0.5
  CHECK_THAT(t.prediction, WithinAbs(12.5, 0.0));

  const ForwardTrace dead = forward(model, {-1.0});
  CHECK_THAT(dead.partials[0], WithinAbs(0.0, 0.0));
  CHECK_THAT(dead.partials[1], WithinAbs(0.5, 0.0));  // relu(-1 + 0) clamps, head bias remains
  CHECK_THAT(dead.prediction, WithinAbs(0.5, 0.0));

  // the trace records the concatenated second-block input
  REQUIRE(t.block_inputs.size() == 2);
  CHECK(t.block_inputs[1] == Vector{3.0, 6.0});
}

TEST_CASE("ablation without embeddings feeds raw options to every block") {
  HinnModel model = tiny_embed_model();
  model.hp.mode = Mode::mb_fnn;
  for (Block& blk : model.blocks) {
    blk.embed_w = Matrix();
    blk.embed_b.clear();
  }
  model.blocks[1].w[0] = from_rows(1, 1, {1.0});  // block 2 reads only the option now

  const ForwardTrace t = forward(model, {3.0});
  CHECK_THAT(t.partials[0], WithinAbs(3.0, 0.0));
  CHECK_THAT(t.partials[1], WithinAbs(3.5, 0.0));
  CHECK(t.block_inputs[1] == Vector{3.0});
}

TEST_CASE("prediction equals the ascending sum of partials exactly") {
  Rng rng(9);
  for (Mode mode : {Mode::hinn, Mode::mb_fnn, Mode::l2_hinn, Mode::plain_hinn,
                    Mode::deepperf_reduction}) {
    Hyperparams hp;
    hp.mode = mode;
    hp.m = mode == Mode::deepperf_reduction ? 1 : 3;
    hp.l = 2;
    hp.d = 6;
    const std::size_t n = 4;
    const HinnModel model = new_model(n, hp, rng);
    Matrix x(50, n);
    for (double& v : x.data) v = rng.uniform(-1.0, 1.0);
    const BatchTrace trace = forward_batch(model, x);
    for (std::size_t r = 0; r < x.rows; ++r) {
      double sum = 0.0;
      for (std::size_t j = 0; j < model.blocks.size(); ++j) sum += trace.partials(r, j);
      REQUIRE(trace.prediction[r] == sum);
    }
  }
}

TEST_CASE("predict_batch agrees with row-by-row forward bit for bit") {
  Rng rng(10);
  Hyperparams hp;
  hp.m = 2;
  hp.l = 2;
  hp.d = 5;
  const HinnModel model = new_model(3, hp, rng);
  Matrix x(7, 3);
  for (double& v : x.data) v = rng.uniform(-1.0, 1.0);
  const Vector batch = predict_batch(model, x);
  for (std::size_t r = 0; r < x.rows; ++r) {
    const Vector row{x(r, 0), x(r, 1), x(r, 2)};
    REQUIRE(batch[r] == forward(model, row).prediction);
  }
}

TEST_CASE("dropout masks only during training and rescales by 1/(1-p)") {
  Hyperparams hp;
  hp.mode = Mode::dropout_hinn;
  hp.dropout_rate = 0.5;
  hp.m = 2;
  hp.l = 2;
  hp.d = 16;
  Rng init(4);
  const HinnModel model = new_model(3, hp, init);
  Matrix x(4, 3);
  Rng data(5);
  for (double& v : x.data) v = data.uniform(0.1, 1.0);

  // inference ignores dropout entirely
  const BatchTrace quiet = forward_batch(model, x);
  const BatchTrace quiet2 = forward_batch(model, x);
  CHECK(quiet.prediction == quiet2.prediction);

  FwdOptions opts;
  opts.training = true;
  CHECK_THROWS_AS(forward_batch(model, x, opts), ConfigError);  // no rng provided

  Rng drop_a(100);
  Rng drop_b(101);
  opts.rng = &drop_a;
  opts.keep_activations = true;
  const BatchTrace noisy_a = forward_batch(model, x, opts);
  opts.rng = &drop_b;
  const BatchTrace noisy_b = forward_batch(model, x, opts);
  CHECK(noisy_a.prediction != noisy_b.prediction);
  CHECK(noisy_a.prediction != quiet.prediction);

  // recorded scales are exactly 0 or 1/(1-p)
  REQUIRE(noisy_a.drop_scale.size() == 2);
  bool saw_zero = false, saw_keep = false;
  for (const auto& per_block : noisy_a.drop_scale) {
    REQUIRE(per_block.size() == 2);  // one mask per hidden layer
    for (const Matrix& mask : per_block) {
      for (double v : mask.data) {
        REQUIRE((v == 0.0 || v == 2.0));
        saw_zero = saw_zero || v == 0.0;
        saw_keep = saw_keep || v == 2.0;
      }
    }
  }
  CHECK(saw_zero);
  CHECK(saw_keep);

  // same dropout stream reproduces the same noisy pass
  Rng drop_a_again(100);
  opts.rng = &drop_a_again;
  const BatchTrace replay = forward_batch(model, x, opts);
  CHECK(replay.prediction == noisy_a.prediction);
}

TEST_CASE("forward rejects mismatched input width") {
  Rng rng(11);
  Hyperparams hp;
  hp.d = 4;
  const HinnModel model = new_model(3, hp, rng);
  CHECK_THROWS_AS(forward(model, {1.0, 2.0}), ShapeError);
  Matrix wide(2, 5);
  CHECK_THROWS_AS(forward_batch(model, wide), ShapeError);
}
