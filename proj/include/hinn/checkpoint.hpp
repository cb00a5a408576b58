#pragma once

#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "hinn/error.hpp"
#include "hinn/model.hpp"

namespace hinn {

using json = nlohmann::ordered_json;

namespace detail {

inline json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

inline Matrix matrix_from_json(const json& j, const std::string& what) {
  Matrix m;
  try {
    m.rows = j.at("rows").get<std::size_t>();
    m.cols = j.at("cols").get<std::size_t>();
    m.data = j.at("data").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw CheckpointError("checkpoint: malformed " + what + ": " + e.what());
  }
  if (m.data.size() != m.rows * m.cols) {
    throw CheckpointError("checkpoint: " + what + " has " + std::to_string(m.data.size()) +
                          " values for shape " + shape_str(m));
  }
  return m;
}

}  // namespace detail

inline json model_to_json(const HinnModel& model) {
  json j;
  j["format"] = "hinn-checkpoint-v1";
  j["n"] = model.n;
  j["option_names"] = model.option_names;
  j["hyperparams"] = json{{"m", model.hp.m},
                          {"l", model.hp.l},
                          {"d", model.hp.d},
                          {"lambda", model.hp.lambda},
                          {"lr0", model.hp.lr0},
                          {"epochs", model.hp.epochs},
                          {"normalization", to_string(model.hp.normalization)},
                          {"mode", to_string(model.hp.mode)},
                          {"dropout_rate", model.hp.dropout_rate}};
  j["normalizer"] = json{{"method", to_string(model.normalizer.method)},
                         {"x_offset", model.normalizer.x_offset},
                         {"x_scale", model.normalizer.x_scale},
                         {"y_offset", model.normalizer.y_offset},
                         {"y_scale", model.normalizer.y_scale}};
  j["blocks"] = json::array();
  for (const Block& blk : model.blocks) {
    json jb;
    jb["hidden"] = json::array();
    for (std::size_t k = 0; k < blk.w.size(); ++k) {
      jb["hidden"].push_back(json{{"w", detail::matrix_to_json(blk.w[k])}, {"b", blk.b[k]}});
    }
    jb["head_w"] = blk.head_w;
    jb["head_b"] = blk.head_b;
    if (blk.has_embed()) {
      jb["embed"] = json{{"w", detail::matrix_to_json(blk.embed_w)}, {"b", blk.embed_b}};
    } else {
      jb["embed"] = nullptr;
    }
    j["blocks"].push_back(std::move(jb));
  }
  return j;
}

inline HinnModel model_from_json(const json& j) {
  HinnModel model;
  try {
    if (j.at("format").get<std::string>() != "hinn-checkpoint-v1") {
      throw CheckpointError("checkpoint: unknown format '" +
                            j.at("format").get<std::string>() + "'");
    }
    model.n = j.at("n").get<std::size_t>();
    model.option_names = j.at("option_names").get<std::vector<std::string>>();

    const json& hp = j.at("hyperparams");
    model.hp.m = hp.at("m").get<int>();
    model.hp.l = hp.at("l").get<int>();
    model.hp.d = hp.at("d").get<int>();
    model.hp.lambda = hp.at("lambda").get<double>();
    model.hp.lr0 = hp.at("lr0").get<double>();
    model.hp.epochs = hp.at("epochs").get<int>();
    model.hp.normalization = norm_method_from_string(hp.at("normalization").get<std::string>());
    model.hp.mode = mode_from_string(hp.at("mode").get<std::string>());
    model.hp.dropout_rate = hp.at("dropout_rate").get<double>();

    const json& nz = j.at("normalizer");
    model.normalizer.method = norm_method_from_string(nz.at("method").get<std::string>());
    model.normalizer.x_offset = nz.at("x_offset").get<std::vector<double>>();
    model.normalizer.x_scale = nz.at("x_scale").get<std::vector<double>>();
    model.normalizer.y_offset = nz.at("y_offset").get<double>();
    model.normalizer.y_scale = nz.at("y_scale").get<double>();

    for (const json& jb : j.at("blocks")) {
      Block blk;
      for (const json& jl : jb.at("hidden")) {
        blk.w.push_back(detail::matrix_from_json(jl.at("w"), "hidden layer weights"));
        blk.b.push_back(jl.at("b").get<std::vector<double>>());
      }
      blk.head_w = jb.at("head_w").get<std::vector<double>>();
      blk.head_b = jb.at("head_b").get<double>();
      if (!jb.at("embed").is_null()) {
        blk.embed_w = detail::matrix_from_json(jb.at("embed").at("w"), "embedding weights");
        blk.embed_b = jb.at("embed").at("b").get<std::vector<double>>();
      }
      model.blocks.push_back(std::move(blk));
    }
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("checkpoint: ") + e.what());
  }

  // Structural validation: shapes must be exactly what the hyperparameters
  // promise, so a loaded model can never fail later with a shape error.
  model.hp.validate();
  if (model.blocks.size() != static_cast<std::size_t>(model.hp.m)) {
    throw CheckpointError("checkpoint: " + std::to_string(model.blocks.size()) +
                          " blocks but hyperparams say m = " + std::to_string(model.hp.m));
  }
  if (model.normalizer.x_scale.size() != model.n ||
      model.normalizer.x_offset.size() != model.n) {
    throw CheckpointError("checkpoint: normalizer column count does not match n");
  }
  if (!model.option_names.empty() && model.option_names.size() != model.n) {
    throw CheckpointError("checkpoint: option_names length does not match n");
  }
  const auto d = static_cast<std::size_t>(model.hp.d);
  for (std::size_t j = 0; j < model.blocks.size(); ++j) {
    const Block& blk = model.blocks[j];
    const std::size_t in = block_input_width(model.hp.mode, model.n, j + 1);
    if (blk.w.size() != static_cast<std::size_t>(model.hp.l) || blk.b.size() != blk.w.size()) {
      throw CheckpointError("checkpoint: block " + std::to_string(j + 1) +
                            " layer count does not match l");
    }
    for (std::size_t k = 0; k < blk.w.size(); ++k) {
      const std::size_t expect_rows = k == 0 ? in : d;
      if (blk.w[k].rows != expect_rows || blk.w[k].cols != d || blk.b[k].size() != d) {
        throw CheckpointError("checkpoint: block " + std::to_string(j + 1) + " layer " +
                              std::to_string(k + 1) + " has shape " + shape_str(blk.w[k]) +
                              ", expected " + std::to_string(expect_rows) + "x" +
                              std::to_string(d));
      }
    }
    if (blk.head_w.size() != d) {
      throw CheckpointError("checkpoint: block " + std::to_string(j + 1) + " head width " +
                            std::to_string(blk.head_w.size()) + ", expected " +
                            std::to_string(d));
    }
    const bool expect_embed = uses_embedding(model.hp.mode);
    if (expect_embed != blk.has_embed()) {
      throw CheckpointError("checkpoint: block " + std::to_string(j + 1) +
                            (expect_embed ? " is missing its embedding head"
                                          : " has an embedding head its mode forbids"));
    }
    if (blk.has_embed() &&
        (blk.embed_w.rows != d || blk.embed_w.cols != model.n ||
         blk.embed_b.size() != model.n)) {
      throw CheckpointError("checkpoint: block " + std::to_string(j + 1) +
                            " embedding head has shape " + shape_str(blk.embed_w) +
                            ", expected " + std::to_string(d) + "x" + std::to_string(model.n));
    }
  }
  return model;
}

inline void save_model(const HinnModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CheckpointError("checkpoint: cannot write '" + path + "'");
  out << model_to_json(model).dump(1) << "\n";
  if (!out) throw CheckpointError("checkpoint: failed writing '" + path + "'");
}

inline HinnModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("checkpoint: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw CheckpointError("checkpoint: '" + path + "' is not valid JSON: " + e.what());
  }
  return model_from_json(j);
}

}  // namespace hinn
