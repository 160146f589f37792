// SPDX-License-Identifier: Apache-2.0
#include "scampsim/bnn_model.hpp"

#include <fstream>
#include <random>

#include "scampsim/error.hpp"

namespace scampsim {
namespace {

[[noreturn]] void bad_weights(const std::string& msg) { throw Error(ErrorKind::weights, msg); }

bool is_pm1(std::int8_t w) { return w == 1 || w == -1; }

std::int8_t read_pm1(const nlohmann::json& v, const std::string& field) {
  if (!v.is_number_integer()) bad_weights(field + ": weight is not an integer");
  const auto w = v.get<std::int64_t>();
  if (w != 1 && w != -1) bad_weights(field + ": weight " + std::to_string(w) + " is not -1 or +1");
  return static_cast<std::int8_t>(w);
}

const nlohmann::json& require(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) bad_weights(std::string("missing field '") + key + "'");
  return doc.at(key);
}

void expect_array(const nlohmann::json& v, std::size_t n, const std::string& field) {
  if (!v.is_array()) bad_weights(field + ": expected an array");
  if (v.size() != n) {
    bad_weights(field + ": count mismatch, expected " + std::to_string(n) + ", got " +
                std::to_string(v.size()));
  }
}

}  // namespace

void BnnModel::validate() const {
  try {
    geometry.validate();
  } catch (const Error& e) {
    bad_weights(std::string("geometry: ") + e.what());
  }
  if (geometry.block_size % 2 != 0) bad_weights("block_size must be even for 2x2 pooling");
  if (k < 1 || k > geometry.block_size) bad_weights("k out of range");
  if (class_names.empty()) bad_weights("classes: at least one class required");
  if (kernels.size() != static_cast<std::size_t>(num_blocks())) {
    bad_weights("kernels: count mismatch, expected " + std::to_string(num_blocks()) + ", got " +
                std::to_string(kernels.size()));
  }
  for (std::size_t b = 0; b < kernels.size(); ++b) {
    if (kernels[b].size() != static_cast<std::size_t>(k * k)) {
      bad_weights("kernels[" + std::to_string(b) + "]: expected " + std::to_string(k * k) +
                  " taps");
    }
    for (auto w : kernels[b]) {
      if (!is_pm1(w)) bad_weights("kernels[" + std::to_string(b) + "]: weight is not -1 or +1");
    }
  }
  if (fc.size() != class_names.size()) {
    bad_weights("fc: count mismatch, expected " + std::to_string(class_names.size()) +
                " classes, got " + std::to_string(fc.size()));
  }
  for (std::size_t c = 0; c < fc.size(); ++c) {
    if (fc[c].size() != features_per_class()) {
      bad_weights("fc[" + std::to_string(c) + "]: count mismatch, expected " +
                  std::to_string(features_per_class()) + ", got " + std::to_string(fc[c].size()));
    }
    for (auto w : fc[c]) {
      if (!is_pm1(w)) bad_weights("fc[" + std::to_string(c) + "]: weight is not -1 or +1");
    }
  }
}

BnnModel make_random_model(std::uint64_t seed, PlaneGeometry geometry, int k,
                           std::vector<std::string> class_names) {
  BnnModel m;
  m.geometry = geometry;
  m.k = k;
  m.class_names = std::move(class_names);
  std::mt19937_64 rng(seed);
  auto draw = [&rng]() -> std::int8_t { return (rng() >> 63) ? 1 : -1; };
  m.kernels.assign(static_cast<std::size_t>(geometry.num_blocks()),
                   std::vector<std::int8_t>(static_cast<std::size_t>(k * k)));
  for (auto& kern : m.kernels) {
    for (auto& w : kern) w = draw();
  }
  m.fc.assign(m.class_names.size(), std::vector<std::int8_t>(m.features_per_class()));
  for (auto& row : m.fc) {
    for (auto& w : row) w = draw();
  }
  m.validate();
  return m;
}

BnnModel default_model() { return make_random_model(0); }

int argmax(std::span<const std::int64_t> scores) {
  if (scores.empty()) throw Error(ErrorKind::config, "argmax of an empty score list");
  int best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  return best;
}

ClassScores reference_infer(const BnnModel& model, const BitImage& input, InferenceTrace* trace) {
  const int bs = model.geometry.block_size;
  const int k = model.k;
  const int nb = model.num_blocks();
  const int ps = model.pooled_side();
  if (input.height != bs || input.width != bs) {
    throw Error(ErrorKind::geometry, "reference input must be " + std::to_string(bs) + "x" +
                                         std::to_string(bs));
  }
  if (!input.is_binary()) throw Error(ErrorKind::format, "reference input is not binary");

  FeatureTensor conv(nb, bs);
  FeatureTensor pooled(nb, ps);
  const int valid = bs - k + 1;
  for (int b = 0; b < nb; ++b) {
    const auto& kern = model.kernels[static_cast<std::size_t>(b)];
    for (int r = 0; r < valid; ++r) {
      for (int c = 0; c < valid; ++c) {
        std::int64_t acc = 0;
        for (int dy = 0; dy < k; ++dy) {
          const std::uint8_t* row = input.bits.data() + static_cast<std::size_t>(r + dy) * bs + c;
          const std::int8_t* w = kern.data() + dy * k;
          for (int dx = 0; dx < k; ++dx) acc += w[dx] * row[dx];
        }
        conv.at(b, r, c) = acc;
      }
    }
  }
  FeatureTensor relu = conv;
  for (auto& v : relu.values) v = v < 0 ? 0 : v;
  for (int b = 0; b < nb; ++b) {
    for (int i = 0; i < ps; ++i) {
      for (int j = 0; j < ps; ++j) {
        std::int64_t m = relu.at(b, 2 * i, 2 * j);
        m = std::max(m, relu.at(b, 2 * i, 2 * j + 1));
        m = std::max(m, relu.at(b, 2 * i + 1, 2 * j));
        m = std::max(m, relu.at(b, 2 * i + 1, 2 * j + 1));
        pooled.at(b, i, j) = m;
      }
    }
  }
  ClassScores out;
  out.scores.resize(static_cast<std::size_t>(model.num_classes()));
  for (int c = 0; c < model.num_classes(); ++c) {
    const auto& w = model.fc[static_cast<std::size_t>(c)];
    std::int64_t s = 0;
    for (std::size_t e = 0; e < w.size(); ++e) s += w[e] * pooled.values[e];
    out.scores[static_cast<std::size_t>(c)] = s;
  }
  out.predicted = argmax(out.scores);
  if (trace) {
    trace->conv = std::move(conv);
    trace->relu = std::move(relu);
    trace->pooled = std::move(pooled);
  }
  return out;
}

nlohmann::json save_weights(const BnnModel& model) {
  model.validate();
  nlohmann::json doc;
  doc["version"] = BnnModel::kWeightsVersion;
  doc["k"] = model.k;
  doc["block_size"] = model.geometry.block_size;
  doc["block_grid"] = model.geometry.block_grid;
  doc["classes"] = model.class_names;
  nlohmann::json kernels = nlohmann::json::array();
  for (const auto& kern : model.kernels) {
    nlohmann::json rows = nlohmann::json::array();
    for (int dy = 0; dy < model.k; ++dy) {
      nlohmann::json row = nlohmann::json::array();
      for (int dx = 0; dx < model.k; ++dx) row.push_back(static_cast<int>(kern[dy * model.k + dx]));
      rows.push_back(std::move(row));
    }
    kernels.push_back(std::move(rows));
  }
  doc["kernels"] = std::move(kernels);
  const int ps = model.pooled_side();
  nlohmann::json fc = nlohmann::json::array();
  for (int c = 0; c < model.num_classes(); ++c) {
    nlohmann::json blocks = nlohmann::json::array();
    for (int b = 0; b < model.num_blocks(); ++b) {
      nlohmann::json plane = nlohmann::json::array();
      for (int i = 0; i < ps; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < ps; ++j) row.push_back(static_cast<int>(model.fc_weight(c, b, i, j)));
        plane.push_back(std::move(row));
      }
      blocks.push_back(std::move(plane));
    }
    fc.push_back(std::move(blocks));
  }
  doc["fc"] = std::move(fc);
  return doc;
}

BnnModel load_weights(const nlohmann::json& doc) {
  if (!doc.is_object()) bad_weights("weights document must be a JSON object");
  const auto& version = require(doc, "version");
  if (!version.is_number_integer() || version.get<int>() != BnnModel::kWeightsVersion) {
    bad_weights("version: unsupported weights format version " + version.dump());
  }
  BnnModel m;
  auto get_int = [&](const char* key) {
    const auto& v = require(doc, key);
    if (!v.is_number_integer()) bad_weights(std::string(key) + ": expected an integer");
    return v.get<int>();
  };
  m.k = get_int("k");
  const int block_size = get_int("block_size");
  const int block_grid = get_int("block_grid");
  if (block_size <= 0 || block_grid <= 0) bad_weights("geometry: block_size and block_grid must be positive");
  m.geometry = PlaneGeometry::tiled(block_grid, block_size);
  if (m.k < 1 || m.k > block_size) bad_weights("k: out of range");
  if (block_size % 2 != 0) bad_weights("block_size: must be even");

  const auto& classes = require(doc, "classes");
  if (!classes.is_array() || classes.empty()) bad_weights("classes: expected a nonempty array");
  m.class_names.clear();
  for (const auto& c : classes) {
    if (!c.is_string()) bad_weights("classes: names must be strings");
    m.class_names.push_back(c.get<std::string>());
  }

  const auto& kernels = require(doc, "kernels");
  expect_array(kernels, static_cast<std::size_t>(m.num_blocks()), "kernels");
  for (std::size_t b = 0; b < kernels.size(); ++b) {
    const std::string field = "kernels[" + std::to_string(b) + "]";
    expect_array(kernels[b], static_cast<std::size_t>(m.k), field);
    std::vector<std::int8_t> kern;
    for (std::size_t dy = 0; dy < kernels[b].size(); ++dy) {
      expect_array(kernels[b][dy], static_cast<std::size_t>(m.k), field);
      for (const auto& w : kernels[b][dy]) kern.push_back(read_pm1(w, field));
    }
    m.kernels.push_back(std::move(kern));
  }

  const auto& fc = require(doc, "fc");
  const auto ps = static_cast<std::size_t>(m.pooled_side());
  expect_array(fc, m.class_names.size(), "fc");
  for (std::size_t c = 0; c < fc.size(); ++c) {
    const std::string field = "fc[" + std::to_string(c) + "]";
    expect_array(fc[c], static_cast<std::size_t>(m.num_blocks()), field);
    std::vector<std::int8_t> row;
    row.reserve(m.features_per_class());
    for (const auto& plane : fc[c]) {
      expect_array(plane, ps, field);
      for (const auto& line : plane) {
        expect_array(line, ps, field);
        for (const auto& w : line) row.push_back(read_pm1(w, field));
      }
    }
    m.fc.push_back(std::move(row));
  }
  m.validate();
  return m;
}

BnnModel load_weights_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open weights " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::weights, path.string() + ": " + e.what());
  }
  return load_weights(doc);
}

}  // namespace scampsim
