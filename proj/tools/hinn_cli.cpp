#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hinn/checkpoint.hpp"
#include "hinn/dataset.hpp"
#include "hinn/evaluation.hpp"
#include "hinn/explain.hpp"
#include "hinn/model.hpp"
#include "hinn/rng.hpp"
#include "hinn/stats.hpp"
#include "hinn/tuning.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Everything a run needs, resolved from defaults, then the optional JSON
// config file, then command-line flags (strongest last). The struct is
// shared by all subcommands; each validates the fields it actually uses.
struct JobConfig {
  std::string data;
  std::string perf_col;
  std::string model_path;
  std::string out;
  std::string mode = "hinn";
  std::uint64_t seed = 1;
  int jobs = 1;
  std::size_t sample_size = 0;
  std::size_t reps = 30;
  std::size_t steps = 300;

  // search-space overrides
  std::vector<int> m_values{2, 3, 4, 5};
  std::vector<int> l_values{2, 3, 4};
  int d = 128;
  std::vector<double> lambda_values{0.001, 0.01, 0.1, 1.0, 10.0};
  std::vector<std::string> normalizations{"maximization", "gaussian"};
  std::vector<double> dropout_rates{0.1, 0.25, 0.5, 0.75, 0.9};
  double lr0 = 0.001;
  int epochs = 2000;
};

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hinn::DataError("cannot write '" + path.string() + "'");
  out << content;
  out.flush();
  if (!out) throw hinn::DataError("write to '" + path.string() + "' failed");
}

void write_json_file(const fs::path& path, const json& j) { write_text(path, j.dump(1) + "\n"); }

std::string sanitize_csv(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) s += sep;
    s += parts[i];
  }
  return s;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw hinn::ConfigError(msg);
}

hinn::SearchSpace build_space(const JobConfig& c) {
  hinn::SearchSpace s;
  s.m_values = c.m_values;
  s.l_values = c.l_values;
  s.d = c.d;
  s.lambda_values = c.lambda_values;
  s.normalizations.clear();
  for (const std::string& n : c.normalizations) {
    s.normalizations.push_back(hinn::norm_method_from_string(n));
  }
  s.dropout_rates = c.dropout_rates;
  s.lr0 = c.lr0;
  s.epochs = c.epochs;
  return s;
}

json space_json(const JobConfig& c) {
  return json{{"m_values", c.m_values},
              {"l_values", c.l_values},
              {"d", c.d},
              {"lambda_values", c.lambda_values},
              {"normalizations", c.normalizations},
              {"dropout_rates", c.dropout_rates},
              {"lr0", c.lr0},
              {"epochs", c.epochs}};
}

json hyperparams_json(const hinn::Hyperparams& hp) {
  return json{{"m", hp.m},
              {"l", hp.l},
              {"d", hp.d},
              {"lambda", hp.lambda},
              {"lr0", hp.lr0},
              {"epochs", hp.epochs},
              {"normalization", hinn::to_string(hp.normalization)},
              {"mode", hinn::to_string(hp.mode)},
              {"dropout_rate", hp.dropout_rate}};
}

// The config file mirrors the flags (same spellings, no dashes prefix).
// Flags parsed afterwards override whatever it sets. `jobs` is accepted here
// too, but like the flag it never reaches any output artifact: parallelism
// must not look like part of the experiment.
void apply_config_file(const std::string& path, JobConfig& c) {
  std::ifstream in(path);
  if (!in) throw hinn::ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw hinn::ConfigError("config file '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw hinn::ConfigError("config file '" + path + "' must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "data") c.data = value.get<std::string>();
      else if (key == "perf-col") c.perf_col = value.get<std::string>();
      else if (key == "model") c.model_path = value.get<std::string>();
      else if (key == "out") c.out = value.get<std::string>();
      else if (key == "mode") c.mode = value.get<std::string>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "jobs") c.jobs = value.get<int>();
      else if (key == "sample-size") c.sample_size = value.get<std::size_t>();
      else if (key == "reps") c.reps = value.get<std::size_t>();
      else if (key == "steps") c.steps = value.get<std::size_t>();
      else if (key == "m-values") c.m_values = value.get<std::vector<int>>();
      else if (key == "l-values") c.l_values = value.get<std::vector<int>>();
      else if (key == "lambda-values") c.lambda_values = value.get<std::vector<double>>();
      else if (key == "dropout-rates") c.dropout_rates = value.get<std::vector<double>>();
      else if (key == "normalizations") c.normalizations = value.get<std::vector<std::string>>();
      else if (key == "d") c.d = value.get<int>();
      else if (key == "epochs") c.epochs = value.get<int>();
      else if (key == "lr0") c.lr0 = value.get<double>();
      else throw hinn::ConfigError("config file '" + path + "': unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw hinn::ConfigError("config file '" + path + "': " + e.what());
  }
}

// Name-mapped option matrix from a CSV that may also carry the (ignored)
// performance column. Returns the raw header and row text so predict can
// echo its input byte-for-byte.
struct OptionCsv {
  std::string header_raw;
  std::vector<std::string> rows_raw;
  hinn::Matrix x;  // columns in model option order
};

OptionCsv read_option_csv(const std::string& path, const hinn::HinnModel& model,
                          const std::string& ignore_col) {
  std::ifstream in(path);
  if (!in) throw hinn::DataError("cannot open dataset file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw hinn::DataError("dataset file '" + path + "' is empty");

  const auto strip_cr = [](std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
  };

  OptionCsv csv;
  csv.header_raw = strip_cr(line);
  const std::vector<std::string> header = hinn::detail::split_line(line);
  for (std::size_t i = 0; i < header.size(); ++i) {
    for (std::size_t k = i + 1; k < header.size(); ++k) {
      if (header[i] == header[k]) {
        throw hinn::DataError("duplicate column '" + header[i] + "' in '" + path + "'");
      }
    }
  }

  std::vector<std::size_t> col_of(model.n);
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < model.n; ++i) {
    bool found = false;
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (header[k] == model.option_names[i]) {
        col_of[i] = k;
        found = true;
        break;
      }
    }
    if (!found) missing.push_back(model.option_names[i]);
  }
  std::vector<std::string> unknown;
  for (const std::string& name : header) {
    if (name == ignore_col) continue;
    bool is_option = false;
    for (const std::string& opt : model.option_names) {
      if (name == opt) {
        is_option = true;
        break;
      }
    }
    if (!is_option) unknown.push_back(name);
  }
  if (!missing.empty() || !unknown.empty()) {
    std::string msg = "input columns do not match the checkpoint options";
    if (!missing.empty()) msg += "; missing: " + join(missing, ", ");
    if (!unknown.empty()) msg += "; unknown: " + join(unknown, ", ");
    throw hinn::DataError(msg);
  }

  std::vector<std::vector<double>> values;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    const std::string raw = strip_cr(line);
    if (hinn::detail::trim(raw).empty()) continue;
    const std::vector<std::string> cells = hinn::detail::split_line(line);
    if (cells.size() != header.size()) {
      throw hinn::DataError("row " + std::to_string(row) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
    }
    std::vector<double> v(model.n);
    for (std::size_t i = 0; i < model.n; ++i) {
      v[i] = hinn::detail::parse_cell(cells[col_of[i]], row, model.option_names[i]);
    }
    csv.rows_raw.push_back(raw);
    values.push_back(std::move(v));
    ++row;
  }

  csv.x = hinn::Matrix(values.size(), model.n);
  for (std::size_t r = 0; r < values.size(); ++r) {
    for (std::size_t i = 0; i < model.n; ++i) csv.x(r, i) = values[r][i];
  }
  return csv;
}

std::vector<double> read_mre_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hinn::DataError("cannot open per-run file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw hinn::DataError("per-run file '" + path + "' is empty");
  const std::vector<std::string> header = hinn::detail::split_line(line);
  std::size_t col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "mre") col = i;
  }
  if (col == header.size()) {
    throw hinn::DataError("per-run file '" + path + "' has no 'mre' column (columns: " +
                          join(header, ", ") + ")");
  }
  std::vector<double> values;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    if (hinn::detail::trim(line).empty()) continue;
    const std::vector<std::string> cells = hinn::detail::split_line(line);
    if (cells.size() != header.size()) {
      throw hinn::DataError("per-run file '" + path + "': row " + std::to_string(row) +
                            " has " + std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
    }
    values.push_back(hinn::detail::parse_cell(cells[col], row, "mre"));
    ++row;
  }
  return values;
}

int cmd_train(const JobConfig& c) {
  require(!c.data.empty(), "train: --data is required");
  require(!c.perf_col.empty(), "train: --perf-col is required");
  require(c.sample_size > 0, "train: --sample-size is required and must be positive");
  require(!c.out.empty(), "train: --out is required");

  const hinn::Dataset ds = hinn::load_csv(c.data, c.perf_col);
  const hinn::SplitSample sample = hinn::split(ds, c.sample_size, hinn::hash2(c.seed, 1));
  const hinn::SearchSpace space = build_space(c);
  const hinn::Mode mode = hinn::mode_from_string(c.mode);
  const hinn::GridSearchResult gsr =
      hinn::grid_search(sample, space, mode, hinn::hash2(c.seed, 2), c.jobs);

  fs::create_directories(c.out);
  const fs::path out(c.out);
  hinn::save_model(gsr.best, (out / "model.json").string());

  std::string trials = "trial,m,l,d,lambda,dropout_rate,normalization,val_mre,status,error\n";
  for (std::size_t i = 0; i < gsr.trials.size(); ++i) {
    const hinn::Trial& t = gsr.trials[i];
    trials += std::to_string(i) + ",";
    trials += std::to_string(t.hp.m) + "," + std::to_string(t.hp.l) + "," +
              std::to_string(t.hp.d) + ",";
    trials += fmt17(t.hp.lambda) + "," + fmt17(t.hp.dropout_rate) + ",";
    trials += hinn::to_string(t.hp.normalization) + ",";
    trials += (t.failed ? "" : fmt17(t.val_mre));
    trials += std::string(",") + (t.failed ? "failed" : "ok") + "," + sanitize_csv(t.error) + "\n";
  }
  write_text(out / "trials.csv", trials);

  const hinn::Trial& best = gsr.trials[gsr.best_index];
  write_json_file(out / "train_report.json",
                  json{{"best_index", gsr.best_index},
                       {"val_mre", best.val_mre},
                       {"hyperparams", hyperparams_json(gsr.best_hp)},
                       {"epochs_run", best.report.epochs_run},
                       {"final_train_mse", best.report.final_train_mse},
                       {"loss_trajectory", best.report.loss_trajectory}});

  write_json_file(out / "config.json", json{{"command", "train"},
                                            {"data", c.data},
                                            {"perf_col", c.perf_col},
                                            {"mode", c.mode},
                                            {"seed", c.seed},
                                            {"sample_size", c.sample_size},
                                            {"search_space", space_json(c)}});
  return 0;
}

int cmd_predict(const JobConfig& c) {
  require(!c.model_path.empty(), "predict: --model is required");
  require(!c.data.empty(), "predict: --data is required");
  require(!c.out.empty(), "predict: --out is required");

  const hinn::HinnModel model = hinn::load_model(c.model_path);
  const OptionCsv csv = read_option_csv(c.data, model, c.perf_col);
  const hinn::Vector pred =
      model.normalizer.invert_y(hinn::predict_batch(model, model.normalizer.apply_x(csv.x)));

  std::string text = csv.header_raw + ",predicted_perf\n";
  for (std::size_t r = 0; r < csv.rows_raw.size(); ++r) {
    text += csv.rows_raw[r] + "," + fmt17(pred[r]) + "\n";
  }
  fs::create_directories(c.out);
  const fs::path out(c.out);
  write_text(out / "predictions.csv", text);
  write_json_file(out / "config.json", json{{"command", "predict"},
                                            {"model", c.model_path},
                                            {"data", c.data},
                                            {"perf_col", c.perf_col}});
  return 0;
}

int cmd_evaluate(const JobConfig& c) {
  require(!c.data.empty(), "evaluate: --data is required");
  require(!c.perf_col.empty(), "evaluate: --perf-col is required");
  require(c.sample_size > 0, "evaluate: --sample-size is required and must be positive");
  require(!c.out.empty(), "evaluate: --out is required");

  const hinn::Dataset ds = hinn::load_csv(c.data, c.perf_col);
  const hinn::SearchSpace space = build_space(c);
  const hinn::Mode mode = hinn::mode_from_string(c.mode);
  const hinn::EvalSummary s =
      hinn::run_experiments(ds, space, mode, c.sample_size, c.reps, c.seed, c.jobs);

  fs::create_directories(c.out);
  const fs::path out(c.out);
  const std::string system = fs::path(c.data).stem().string();

  write_json_file(out / "summary.json", json{{"system", system},
                                             {"data", c.data},
                                             {"perf_col", c.perf_col},
                                             {"mode", c.mode},
                                             {"seed", c.seed},
                                             {"sample_size", s.sample_size},
                                             {"repetitions", s.repetitions},
                                             {"mean_mre", s.mean},
                                             {"ci_margin", s.ci_margin},
                                             {"per_run_mre", s.per_run_mre}});

  std::string per_run = "rep,mre\n";
  for (std::size_t r = 0; r < s.per_run_mre.size(); ++r) {
    per_run += std::to_string(r) + "," + fmt17(s.per_run_mre[r]) + "\n";
  }
  write_text(out / "per_run.csv", per_run);

  write_text(out / "summary_row.csv",
             "system,sample_size,mean_mre,ci_margin\n" + system + "," +
                 std::to_string(s.sample_size) + "," + fmt4(s.mean) + "," + fmt4(s.ci_margin) +
                 "\n");

  write_json_file(out / "config.json", json{{"command", "evaluate"},
                                            {"data", c.data},
                                            {"perf_col", c.perf_col},
                                            {"mode", c.mode},
                                            {"seed", c.seed},
                                            {"sample_size", c.sample_size},
                                            {"reps", c.reps},
                                            {"search_space", space_json(c)}});
  return 0;
}

int cmd_compare(const JobConfig& c, const std::string& path_a, const std::string& path_b) {
  const std::vector<double> a = read_mre_column(path_a);
  const std::vector<double> b = read_mre_column(path_b);
  const hinn::RankSumResult r = hinn::rank_sum_test(a, b);
  const double mean_a = hinn::mean(a);
  const double mean_b = hinn::mean(b);
  const std::string winner = r.significant ? (mean_a < mean_b ? path_a : path_b) : "Same";

  std::cout << "statistic: " << fmt17(r.statistic) << "\n";
  std::cout << "z: " << fmt17(r.z) << "\n";
  std::cout << "p_value: " << fmt17(r.p_value) << "\n";
  std::cout << "method: " << r.method << "\n";
  std::cout << "winner: " << winner << "\n";

  if (!c.out.empty()) {
    fs::create_directories(c.out);
    const fs::path out(c.out);
    write_json_file(out / "comparison.json", json{{"a", path_a},
                                                  {"b", path_b},
                                                  {"mean_a", mean_a},
                                                  {"mean_b", mean_b},
                                                  {"statistic", r.statistic},
                                                  {"z", r.z},
                                                  {"p_value", r.p_value},
                                                  {"method", r.method},
                                                  {"significant", r.significant},
                                                  {"winner", winner}});
    write_json_file(out / "config.json",
                    json{{"command", "compare"}, {"a", path_a}, {"b", path_b}});
  }
  return 0;
}

int cmd_explain(const JobConfig& c) {
  require(!c.model_path.empty(), "explain: --model is required");
  require(!c.data.empty(), "explain: --data is required");
  require(!c.out.empty(), "explain: --out is required");
  require(c.steps >= 1, "explain: --steps must be >= 1");

  const hinn::HinnModel model = hinn::load_model(c.model_path);
  const OptionCsv csv = read_option_csv(c.data, model, c.perf_col);
  require(csv.x.rows > 0, "explain: no data rows in '" + c.data + "'");

  hinn::Dataset test;
  for (const std::string& name : model.option_names) {
    test.options.push_back(hinn::OptionSpec{name, hinn::OptionKind::numeric});
  }
  test.x = csv.x;
  test.y.assign(csv.x.rows, 0.0);  // unused: attributions depend on the model only

  const hinn::AttributionReport rep = hinn::attribution_report(model, test, c.steps);

  fs::create_directories(c.out);
  const fs::path out(c.out);

  json sig = json::object();
  for (std::size_t i = 0; i < model.n; ++i) {
    std::vector<double> row(rep.significance.cols);
    for (std::size_t j = 0; j < rep.significance.cols; ++j) row[j] = rep.significance(i, j);
    sig[model.option_names[i]] = row;
  }
  json rj{{"contributions", rep.contributions},
          {"significance", sig},
          {"steps", rep.steps},
          {"completeness_gap", rep.completeness_gap},
          {"excluded_rows", rep.excluded_rows}};
  if (model.normalizer.method == hinn::NormMethod::gaussian) {
    rj["note"] = "gaussian normalization: the additive y offset is attributed to block 1";
  }
  write_json_file(out / "report.json", rj);

  std::string contributions = "block,contribution\n";
  for (std::size_t j = 0; j < rep.contributions.size(); ++j) {
    contributions += std::to_string(j + 1) + "," + fmt17(rep.contributions[j]) + "\n";
  }
  write_text(out / "contributions.csv", contributions);

  std::string wide = "option";
  for (std::size_t j = 0; j < rep.significance.cols; ++j) {
    wide += ",block_" + std::to_string(j + 1);
  }
  wide += "\n";
  std::string long_fmt = "option,block,score\n";
  for (std::size_t i = 0; i < model.n; ++i) {
    wide += model.option_names[i];
    for (std::size_t j = 0; j < rep.significance.cols; ++j) {
      wide += "," + fmt17(rep.significance(i, j));
      long_fmt += model.option_names[i] + "," + std::to_string(j + 1) + "," +
                  fmt17(rep.significance(i, j)) + "\n";
    }
    wide += "\n";
  }
  write_text(out / "significance.csv", wide);
  write_text(out / "significance_long.csv", long_fmt);

  write_json_file(out / "config.json", json{{"command", "explain"},
                                            {"model", c.model_path},
                                            {"data", c.data},
                                            {"perf_col", c.perf_col},
                                            {"steps", c.steps}});
  return 0;
}

void add_space_options(CLI::App* cmd, JobConfig& c) {
  cmd->add_option("--m-values", c.m_values, "block counts to search")->delimiter(',');
  cmd->add_option("--l-values", c.l_values, "hidden-layer counts to search")->delimiter(',');
  cmd->add_option("--lambda-values", c.lambda_values, "penalty strengths to search")
      ->delimiter(',');
  cmd->add_option("--dropout-rates", c.dropout_rates, "dropout rates to search (dropout mode)")
      ->delimiter(',');
  cmd->add_option("--normalizations", c.normalizations,
                  "normalization methods to search (maximization, gaussian)")
      ->delimiter(',');
  cmd->add_option("--d", c.d, "neurons per hidden layer");
  cmd->add_option("--epochs", c.epochs, "training epochs per trial");
  cmd->add_option("--lr0", c.lr0, "initial learning rate");
}

}  // namespace

int main(int argc, char** argv) {
  JobConfig c;
  try {
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc) {
        apply_config_file(argv[i + 1], c);
        break;
      }
      if (arg.rfind("--config=", 0) == 0) {
        apply_config_file(arg.substr(9), c);
        break;
      }
    }

    CLI::App app{"train, evaluate and explain hierarchical-interaction performance models"};
    app.require_subcommand(1);
    std::string config_path;  // consumed by the pre-scan above
    std::string compare_a;
    std::string compare_b;

    CLI::App* train = app.add_subcommand("train", "grid-search and train one checkpoint");
    train->add_option("--data", c.data, "measurements CSV");
    train->add_option("--perf-col", c.perf_col, "performance column name");
    train->add_option("--sample-size", c.sample_size, "rows used for train+validation");
    train->add_option("--seed", c.seed, "master seed");
    train->add_option("--out", c.out, "output directory");
    train->add_option("--jobs", c.jobs, "parallel trials");
    train->add_option("--mode", c.mode, "hinn, mb-fnn, l2, plain, dropout or deepperf");
    add_space_options(train, c);
    train->add_option("--config", config_path, "JSON config mirroring the flags");

    CLI::App* predict = app.add_subcommand("predict", "predict performance with a checkpoint");
    predict->add_option("--model", c.model_path, "checkpoint JSON");
    predict->add_option("--data", c.data, "configurations CSV");
    predict->add_option("--perf-col", c.perf_col, "column to ignore if present");
    predict->add_option("--out", c.out, "output directory");
    predict->add_option("--config", config_path, "JSON config mirroring the flags");

    CLI::App* evaluate =
        app.add_subcommand("evaluate", "repeated sample/search/test experiments");
    evaluate->add_option("--data", c.data, "measurements CSV");
    evaluate->add_option("--perf-col", c.perf_col, "performance column name");
    evaluate->add_option("--sample-size", c.sample_size, "rows used for train+validation");
    evaluate->add_option("--reps", c.reps, "repetitions");
    evaluate->add_option("--seed", c.seed, "master seed");
    evaluate->add_option("--out", c.out, "output directory");
    evaluate->add_option("--jobs", c.jobs, "parallel repetitions");
    evaluate->add_option("--mode", c.mode, "hinn, mb-fnn, l2, plain, dropout or deepperf");
    add_space_options(evaluate, c);
    evaluate->add_option("--config", config_path, "JSON config mirroring the flags");

    CLI::App* compare = app.add_subcommand("compare", "rank-sum test between two per-run files");
    compare->add_option("a", compare_a, "first per_run.csv")->required();
    compare->add_option("b", compare_b, "second per_run.csv")->required();
    compare->add_option("--out", c.out, "optional output directory");
    compare->add_option("--config", config_path, "JSON config mirroring the flags");

    CLI::App* explain = app.add_subcommand("explain", "attribution report for a checkpoint");
    explain->add_option("--model", c.model_path, "checkpoint JSON");
    explain->add_option("--data", c.data, "configurations CSV");
    explain->add_option("--perf-col", c.perf_col, "column to ignore if present");
    explain->add_option("--steps", c.steps, "integration steps");
    explain->add_option("--out", c.out, "output directory");
    explain->add_option("--config", config_path, "JSON config mirroring the flags");

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) return app.exit(e);
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }

    if (train->parsed()) return cmd_train(c);
    if (predict->parsed()) return cmd_predict(c);
    if (evaluate->parsed()) return cmd_evaluate(c);
    if (compare->parsed()) return cmd_compare(c, compare_a, compare_b);
    if (explain->parsed()) return cmd_explain(c);
    std::cerr << "error: no subcommand given\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
