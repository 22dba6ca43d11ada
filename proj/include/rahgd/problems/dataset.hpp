#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "rahgd/kernels/softmax_ce.hpp"

namespace rahgd {

/// Labelled samples, features row-major with the bias coordinate last.
/// Labels are class indices (the one-hot encoding is implicit).
struct Dataset {
  std::size_t num_samples = 0;
  std::size_t num_features = 0;
  std::size_t num_classes = 0;
  std::vector<double> features;
  std::vector<int> labels;
  std::vector<int> clean_labels;  ///< generating cluster per sample; empty when loaded from file

  void validate() const;
  kernels::SampleView view() const;
  /// Largest Euclidean feature-vector norm.
  double max_feature_norm() const;
};

/// Gaussian class clusters in d - 1 coordinates plus a constant bias
/// coordinate; each label is replaced, with probability `corruption`, by a
/// class drawn uniformly from the other classes.
Dataset synth_dataset(std::size_t n, std::size_t d, std::size_t c, double corruption, std::uint64_t seed);

/// Train and validation sets drawn from the same clusters; only the training
/// labels are corrupted.
struct TrainValSplit {
  Dataset train;
  Dataset val;
};
TrainValSplit synth_train_val(std::size_t n_train, std::size_t n_val, std::size_t d, std::size_t c,
                              double corruption, std::uint64_t seed);

/// Text format, one sample per line, features then label index:
///   # rahgd-dataset v1 samples=<n> features=<d> classes=<c>
///   0.12, -0.5, 1, 2
/// Whitespace and commas both separate fields. Lines starting with '#'
/// after the header are comments.
Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const std::filesystem::path& path, const Dataset& ds);

}  // namespace rahgd
