// SPDX-License-Identifier: Apache-2.0
#include "scampsim/gesture_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "scampsim/atomic_file.hpp"
#include "scampsim/error.hpp"
#include "scampsim/lowering.hpp"
#include "scampsim/pnm.hpp"

namespace scampsim {
namespace {

constexpr double kCenter = kSampleSide / 2.0;

// Signed-free geometric predicates in prototype coordinates (origin at the
// image centre, y down).

bool in_ellipse(double x, double y, double cx, double cy, double rx, double ry) {
  const double u = (x - cx) / rx;
  const double v = (y - cy) / ry;
  return u * u + v * v <= 1.0;
}

bool in_convex_quad(double x, double y, const double (&px)[4], const double (&py)[4]) {
  bool pos = false;
  bool neg = false;
  for (int i = 0; i < 4; ++i) {
    const int j = (i + 1) % 4;
    const double cross = (px[j] - px[i]) * (y - py[i]) - (py[j] - py[i]) * (x - px[i]);
    pos = pos || cross > 0;
    neg = neg || cross < 0;
  }
  return !(pos && neg);
}

/// Rectangle of the given length and half-width starting at (x0,y0) and
/// pointing along angle (radians from the -y axis, clockwise).
bool in_prong(double x, double y, double x0, double y0, double angle, double length,
              double half_width) {
  const double ux = std::sin(angle);
  const double uy = -std::cos(angle);
  const double dx = x - x0;
  const double dy = y - y0;
  const double along = dx * ux + dy * uy;
  const double across = -dx * uy + dy * ux;
  return along >= 0 && along <= length && std::abs(across) <= half_width;
}

bool prototype_contains(int label, double x, double y) {
  switch (label) {
    case 0:  // rock: a filled fist-sized blob
      return in_ellipse(x, y, 0.0, 0.0, 14.0, 12.0);
    case 1: {  // paper: a large flat quadrilateral
      static constexpr double px[4] = {-17.0, 17.0, 19.0, -19.0};
      static constexpr double py[4] = {-19.0, -19.0, 17.0, 17.0};
      return in_convex_quad(x, y, px, py);
    }
    case 2: {  // scissors: two spread prongs over a small knuckle
      constexpr double spread = 16.0 * std::numbers::pi / 180.0;
      return in_ellipse(x, y, 0.0, 12.0, 8.5, 8.0) ||
             in_prong(x, y, -2.0, 14.0, -spread, 36.0, 4.0) ||
             in_prong(x, y, 2.0, 14.0, spread, 36.0, 4.0);
    }
    default:
      throw Error(ErrorKind::dataset, "unknown gesture label " + std::to_string(label));
  }
}

std::uint64_t sample_seed(std::uint64_t seed, int split, int label, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(split), static_cast<std::uint32_t>(label),
                    static_cast<std::uint32_t>(index)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

BitImage add_boundary_noise(const BitImage& clean, double p, std::mt19937_64& rng) {
  if (p <= 0.0) return clean;
  BitImage out = clean;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int h = clean.height;
  const int w = clean.width;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const auto v = clean.at(r, c);
      const bool boundary = (r > 0 && clean.at(r - 1, c) != v) ||
                            (r + 1 < h && clean.at(r + 1, c) != v) ||
                            (c > 0 && clean.at(r, c - 1) != v) ||
                            (c + 1 < w && clean.at(r, c + 1) != v);
      // Draw for every pixel so the stream position does not depend on shape.
      const double draw = u(rng);
      if (boundary && draw < p) out.at(r, c) = v ^ 1;
    }
  }
  return out;
}

GestureSample synth_sample(std::uint64_t seed, int split, int label, int index,
                           const JitterParams& j) {
  const std::uint64_t s = sample_seed(seed, split, label, index);
  std::mt19937_64 rng(s);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double rot = u(rng) * j.rotation_deg;
  const double tx = u(rng) * j.translation_px;
  const double ty = u(rng) * j.translation_px;
  const double scale = 1.0 + u(rng) * j.scale_frac;
  BitImage img = render_gesture(label, rot, tx, ty, scale);
  img = add_boundary_noise(img, j.boundary_noise, rng);
  return {std::move(img), label, {SampleProvenance::Kind::synthetic, s, {}}};
}

int class_index(const std::vector<std::string>& names, const std::string& name) {
  auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

void ingest_split(const std::filesystem::path& dir, const std::vector<std::string>& class_names,
                  std::vector<GestureSample>& out, std::vector<std::string>& problems) {
  std::vector<std::filesystem::path> class_dirs;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_directory()) class_dirs.push_back(entry.path());
  }
  std::sort(class_dirs.begin(), class_dirs.end());
  if (class_dirs.empty()) {
    problems.push_back(dir.string() + ": no classes found");
    return;
  }
  for (const auto& cdir : class_dirs) {
    const int label = class_index(class_names, cdir.filename().string());
    if (label < 0) {
      problems.push_back(cdir.string() + ": unknown class directory");
      continue;
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(cdir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      try {
        GrayImage img = pnm::read_pgm(f);
        out.push_back({host_prep(img, kSampleSide), label,
                       {SampleProvenance::Kind::file, 0, f.string()}});
      } catch (const Error& e) {
        problems.push_back(e.what());
      }
    }
  }
}

std::string split_name(int split) { return split == 0 ? "train" : "test"; }

}  // namespace

nlohmann::json JitterParams::to_json() const {
  return {{"rotation_deg", rotation_deg},
          {"translation_px", translation_px},
          {"scale_frac", scale_frac},
          {"boundary_noise", boundary_noise}};
}

JitterParams JitterParams::from_json(const nlohmann::json& doc) {
  JitterParams j;
  j.rotation_deg = doc.value("rotation_deg", j.rotation_deg);
  j.translation_px = doc.value("translation_px", j.translation_px);
  j.scale_frac = doc.value("scale_frac", j.scale_frac);
  j.boundary_noise = doc.value("boundary_noise", j.boundary_noise);
  return j;
}

std::vector<std::size_t> DatasetSplit::class_counts(const std::vector<GestureSample>& samples) const {
  std::vector<std::size_t> counts(class_names.size(), 0);
  for (const auto& s : samples) ++counts[static_cast<std::size_t>(s.label)];
  return counts;
}

BitImage render_gesture(int label, double rotation_deg, double tx, double ty, double scale) {
  BitImage img(kSampleSide, kSampleSide);
  const double theta = rotation_deg * std::numbers::pi / 180.0;
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  for (int r = 0; r < kSampleSide; ++r) {
    for (int c = 0; c < kSampleSide; ++c) {
      // Inverse map of the pixel centre into prototype coordinates.
      const double x = c + 0.5 - kCenter - tx;
      const double y = r + 0.5 - kCenter - ty;
      const double px = (cs * x + sn * y) / scale;
      const double py = (-sn * x + cs * y) / scale;
      img.at(r, c) = prototype_contains(label, px, py) ? 1 : 0;
    }
  }
  return img;
}

DatasetSplit generate(std::uint64_t seed, int n_train_per_class, int n_test_per_class,
                      const JitterParams& jitter) {
  if (n_train_per_class < 1 || n_test_per_class < 0) {
    throw Error(ErrorKind::dataset, "need at least 1 training and 0 test samples per class");
  }
  DatasetSplit data;
  data.seed = seed;
  data.jitter = jitter;
  const int classes = static_cast<int>(data.class_names.size());
  for (int i = 0; i < n_train_per_class; ++i) {
    for (int label = 0; label < classes; ++label) {
      data.train.push_back(synth_sample(seed, 0, label, i, jitter));
    }
  }
  for (int i = 0; i < n_test_per_class; ++i) {
    for (int label = 0; label < classes; ++label) {
      data.test.push_back(synth_sample(seed, 1, label, i, jitter));
    }
  }
  return data;
}

DatasetSplit ingest(const std::filesystem::path& root, const std::vector<std::string>& class_names) {
  if (!std::filesystem::is_directory(root)) {
    throw Error(ErrorKind::dataset, root.string() + ": not a directory");
  }
  DatasetSplit data;
  data.class_names = class_names;
  data.jitter = JitterParams::none();
  std::vector<std::string> problems;
  const bool has_train = std::filesystem::is_directory(root / "train");
  const bool has_test = std::filesystem::is_directory(root / "test");
  if (has_train || has_test) {
    if (has_train) ingest_split(root / "train", class_names, data.train, problems);
    if (has_test) ingest_split(root / "test", class_names, data.test, problems);
  } else {
    ingest_split(root, class_names, data.test, problems);
  }
  if (!problems.empty()) {
    std::string report = std::to_string(problems.size()) + " ingestion problem(s): ";
    for (std::size_t i = 0; i < problems.size(); ++i) {
      if (i) report += "; ";
      report += problems[i];
    }
    throw Error(ErrorKind::dataset, report);
  }
  return data;
}

GrayImage to_gray(const BitImage& img) {
  GrayImage g(img.height, img.width);
  for (std::size_t i = 0; i < img.bits.size(); ++i) g.pixels[i] = img.bits[i] ? 255 : 0;
  return g;
}

nlohmann::json manifest_json(const DatasetSplit& data) {
  nlohmann::json doc;
  doc["version"] = 1;
  doc["seed"] = data.seed;
  doc["jitter"] = data.jitter.to_json();
  doc["classes"] = data.class_names;
  nlohmann::json samples = nlohmann::json::array();
  for (int split = 0; split < 2; ++split) {
    const auto& list = split == 0 ? data.train : data.test;
    std::vector<int> next(data.class_names.size(), 0);
    for (const auto& s : list) {
      char name[32];
      std::snprintf(name, sizeof(name), "%05d.pgm", next[static_cast<std::size_t>(s.label)]++);
      const std::string file =
          split_name(split) + "/" + data.class_names[static_cast<std::size_t>(s.label)] + "/" + name;
      nlohmann::json entry = {{"file", file}, {"label", s.label}, {"split", split_name(split)}};
      if (s.provenance.kind == SampleProvenance::Kind::synthetic) {
        entry["sample_seed"] = s.provenance.seed;
      } else {
        entry["source"] = s.provenance.path;
      }
      samples.push_back(std::move(entry));
    }
  }
  doc["samples"] = std::move(samples);
  return doc;
}

std::vector<std::pair<std::string, std::string>> dataset_files(const DatasetSplit& data) {
  const nlohmann::json manifest = manifest_json(data);
  std::vector<std::pair<std::string, std::string>> files;
  std::size_t i = 0;
  for (int split = 0; split < 2; ++split) {
    for (const auto& s : split == 0 ? data.train : data.test) {
      files.emplace_back(manifest["samples"][i++]["file"].get<std::string>(),
                         pnm::encode_pgm(to_gray(s.image)));
    }
  }
  files.emplace_back("manifest.json", manifest.dump(2) + "\n");
  return files;
}

void export_dataset(const DatasetSplit& data, const std::filesystem::path& dir) {
  for (const auto& [rel, bytes] : dataset_files(data)) write_file_atomic(dir / rel, bytes);
}

DatasetSplit load_dataset(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw Error(ErrorKind::dataset, (dir / "manifest.json").string() + ": cannot open");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::dataset, std::string("manifest: ") + e.what());
  }
  DatasetSplit data;
  try {
    data.seed = doc.at("seed").get<std::uint64_t>();
    data.jitter = JitterParams::from_json(doc.at("jitter"));
    data.class_names = doc.at("classes").get<std::vector<std::string>>();
    for (const auto& e : doc.at("samples")) {
      const auto file = e.at("file").get<std::string>();
      const int label = e.at("label").get<int>();
      if (label < 0 || label >= static_cast<int>(data.class_names.size())) {
        throw Error(ErrorKind::dataset, file + ": label out of range");
      }
      GestureSample s;
      s.label = label;
      s.image = host_prep(pnm::read_pgm(dir / file), kSampleSide);
      if (e.contains("sample_seed")) {
        s.provenance = {SampleProvenance::Kind::synthetic, e["sample_seed"].get<std::uint64_t>(), {}};
      } else {
        s.provenance = {SampleProvenance::Kind::file, 0, e.value("source", file)};
      }
      (e.at("split").get<std::string>() == "train" ? data.train : data.test).push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::dataset, std::string("manifest: ") + e.what());
  }
  return data;
}

}  // namespace scampsim
