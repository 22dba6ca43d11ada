#include "rahgd/problems/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "rahgd/core/errors.hpp"

namespace rahgd {

void Dataset::validate() const {
  if (num_samples == 0 || num_features == 0 || num_classes == 0) {
    throw ConfigError("dataset: sample, feature and class counts must be positive");
  }
  if (features.size() != num_samples * num_features) throw ConfigError("dataset: feature matrix has the wrong size");
  if (labels.size() != num_samples) throw ConfigError("dataset: label count does not match samples");
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes) {
      throw ConfigError("dataset: label " + std::to_string(y) + " is not a valid class index");
    }
  }
  for (double v : features) {
    if (!std::isfinite(v)) throw ConfigError("dataset: non-finite feature value");
  }
}

kernels::SampleView Dataset::view() const {
  return kernels::SampleView{features, labels, num_samples, num_features, num_classes};
}

double Dataset::max_feature_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < num_samples; ++i) {
    double sq = 0.0;
    for (std::size_t k = 0; k < num_features; ++k) {
      const double v = features[i * num_features + k];
      sq += v * v;
    }
    best = std::max(best, std::sqrt(sq));
  }
  return best;
}

namespace {

int other_class(std::size_t cls, std::size_t c, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> other(0, c - 2);
  const std::size_t draw = other(rng);
  return static_cast<int>(draw >= cls ? draw + 1 : draw);
}

void check_synth_args(std::size_t n, std::size_t d, std::size_t c, double corruption) {
  if (n == 0 || d == 0 || c == 0) throw ConfigError("synth_dataset: n, d, c must be >= 1");
  if (!(corruption >= 0.0 && corruption <= 1.0)) throw ConfigError("synth_dataset: corruption must lie in [0, 1]");
}

}  // namespace

Dataset synth_dataset(std::size_t n, std::size_t d, std::size_t c, double corruption, std::uint64_t seed) {
  check_synth_args(n, d, c, corruption);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_class(0, c - 1);
  std::bernoulli_distribution corrupt(corruption);

  const std::size_t dims = d - 1;
  const double scale = dims > 0 ? 1.0 / std::sqrt(static_cast<double>(dims)) : 1.0;
  std::vector<double> centers(c * dims);
  for (double& m : centers) m = 2.0 * normal(rng);

  Dataset ds;
  ds.num_samples = n;
  ds.num_features = d;
  ds.num_classes = c;
  ds.features.resize(n * d);
  ds.labels.resize(n);
  ds.clean_labels.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t cls = pick_class(rng);
    double* row = ds.features.data() + i * d;
    for (std::size_t k = 0; k < dims; ++k) row[k] = scale * (centers[cls * dims + k] + normal(rng));
    row[d - 1] = 1.0;
    ds.clean_labels[i] = static_cast<int>(cls);
    ds.labels[i] = static_cast<int>(cls);
    if (c > 1 && corrupt(rng)) ds.labels[i] = other_class(cls, c, rng);
  }
  return ds;
}

TrainValSplit synth_train_val(std::size_t n_train, std::size_t n_val, std::size_t d, std::size_t c,
                              double corruption, std::uint64_t seed) {
  check_synth_args(n_train, d, c, corruption);
  check_synth_args(n_val, d, c, 0.0);
  const Dataset all = synth_dataset(n_train + n_val, d, c, 0.0, seed);

  auto slice = [&](std::size_t lo, std::size_t n) {
    Dataset ds;
    ds.num_samples = n;
    ds.num_features = d;
    ds.num_classes = c;
    ds.features.assign(all.features.begin() + static_cast<std::ptrdiff_t>(lo * d),
                       all.features.begin() + static_cast<std::ptrdiff_t>((lo + n) * d));
    ds.labels.assign(all.labels.begin() + static_cast<std::ptrdiff_t>(lo),
                     all.labels.begin() + static_cast<std::ptrdiff_t>(lo + n));
    ds.clean_labels = ds.labels;
    return ds;
  };
  TrainValSplit out{slice(0, n_train), slice(n_train, n_val)};

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::bernoulli_distribution corrupt(corruption);
  for (std::size_t i = 0; i < n_train; ++i) {
    if (c > 1 && corrupt(rng)) {
      out.train.labels[i] = other_class(static_cast<std::size_t>(out.train.clean_labels[i]), c, rng);
    }
  }
  return out;
}

namespace {

constexpr const char* kHeaderTag = "# rahgd-dataset v1";

std::size_t header_field(const std::string& header, const std::string& key) {
  const std::string needle = key + "=";
  const auto pos = header.find(needle);
  if (pos == std::string::npos) throw ConfigError("dataset header: missing field '" + key + "'");
  try {
    return static_cast<std::size_t>(std::stoull(header.substr(pos + needle.size())));
  } catch (const std::exception&) {
    throw ConfigError("dataset header: bad value for '" + key + "'");
  }
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset file " + path.string());

  std::string line;
  if (!std::getline(in, line) || line.rfind(kHeaderTag, 0) != 0) {
    throw ConfigError(path.string() + ":1: expected header '" + kHeaderTag + " samples=N features=D classes=C'");
  }
  Dataset ds;
  ds.num_samples = header_field(line, "samples");
  ds.num_features = header_field(line, "features");
  ds.num_classes = header_field(line, "classes");
  ds.features.reserve(ds.num_samples * ds.num_features);
  ds.labels.reserve(ds.num_samples);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::vector<double> values;
    double v = 0.0;
    while (fields >> v) values.push_back(v);
    if (!fields.eof()) throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": non-numeric field");
    if (values.empty()) continue;
    if (values.size() != ds.num_features + 1) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(ds.num_features + 1) + " fields, got " + std::to_string(values.size()));
    }
    const double label = values.back();
    if (label != std::floor(label)) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": label must be an integer");
    }
    ds.features.insert(ds.features.end(), values.begin(), values.end() - 1);
    ds.labels.push_back(static_cast<int>(label));
  }
  if (ds.labels.size() != ds.num_samples) {
    throw ConfigError(path.string() + ": header declares " + std::to_string(ds.num_samples) + " samples, found " +
                      std::to_string(ds.labels.size()));
  }
  ds.validate();
  return ds;
}

void save_dataset(const std::filesystem::path& path, const Dataset& ds) {
  ds.validate();
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write dataset file " + path.string());
  out << kHeaderTag << " samples=" << ds.num_samples << " features=" << ds.num_features
      << " classes=" << ds.num_classes << "\n";
  char buf[32];
  for (std::size_t i = 0; i < ds.num_samples; ++i) {
    for (std::size_t k = 0; k < ds.num_features; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", ds.features[i * ds.num_features + k]);
      out << buf << ", ";
    }
    out << ds.labels[i] << "\n";
  }
}

}  // namespace rahgd
