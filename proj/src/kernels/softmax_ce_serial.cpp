#include <algorithm>
#include <cmath>
#include <vector>

#include "rahgd/kernels/softmax_ce.hpp"

namespace rahgd::kernels {

namespace detail {

double softmax_row(std::span<const double> w, const double* x, std::size_t d, std::size_t c,
                   double* logits, double* probs) {
  double max_logit = -INFINITY;
  for (std::size_t j = 0; j < c; ++j) {
    const double* row = w.data() + j * d;
    double z = 0.0;
    for (std::size_t k = 0; k < d; ++k) z += row[k] * x[k];
    logits[j] = z;
    max_logit = std::max(max_logit, z);
  }
  double total = 0.0;
  for (std::size_t j = 0; j < c; ++j) {
    probs[j] = std::exp(logits[j] - max_logit);
    total += probs[j];
  }
  for (std::size_t j = 0; j < c; ++j) probs[j] /= total;
  return max_logit + std::log(total);
}

std::size_t block_size_for(std::size_t n) {
  constexpr std::size_t kMinBlock = 64;
  constexpr std::size_t kMaxBlocks = 256;
  return std::max(kMinBlock, (n + kMaxBlocks - 1) / kMaxBlocks);
}

}  // namespace detail

namespace serial {

double ce_value_grad(const SampleView& s, std::span<const double> weights,
                     std::span<const double> w, std::span<double> grad) {
  const std::size_t d = s.num_features;
  const std::size_t c = s.num_classes;
  std::vector<double> logits(c), probs(c);
  std::fill(grad.begin(), grad.end(), 0.0);
  double value = 0.0;
  for (std::size_t i = 0; i < s.num_samples; ++i) {
    const double* x = s.features.data() + i * d;
    const double lse = detail::softmax_row(w, x, d, c, logits.data(), probs.data());
    const int label = s.labels[i];
    value += weights[i] * (lse - logits[label]);
    for (std::size_t j = 0; j < c; ++j) {
      const double coeff = weights[i] * (probs[j] - (static_cast<int>(j) == label ? 1.0 : 0.0));
      double* g = grad.data() + j * d;
      for (std::size_t k = 0; k < d; ++k) g[k] += coeff * x[k];
    }
  }
  return value;
}

double ce_value(const SampleView& s, std::span<const double> weights, std::span<const double> w) {
  const std::size_t d = s.num_features;
  const std::size_t c = s.num_classes;
  std::vector<double> logits(c), probs(c);
  double value = 0.0;
  for (std::size_t i = 0; i < s.num_samples; ++i) {
    const double* x = s.features.data() + i * d;
    const double lse = detail::softmax_row(w, x, d, c, logits.data(), probs.data());
    value += weights[i] * (lse - logits[s.labels[i]]);
  }
  return value;
}

void ce_hvp(const SampleView& s, std::span<const double> weights, std::span<const double> w,
            std::span<const double> v, std::span<double> out) {
  const std::size_t d = s.num_features;
  const std::size_t c = s.num_classes;
  std::vector<double> logits(c), probs(c), vx(c);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < s.num_samples; ++i) {
    const double* x = s.features.data() + i * d;
    detail::softmax_row(w, x, d, c, logits.data(), probs.data());
    double pv = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      const double* row = v.data() + j * d;
      double z = 0.0;
      for (std::size_t k = 0; k < d; ++k) z += row[k] * x[k];
      vx[j] = z;
      pv += probs[j] * z;
    }
    for (std::size_t j = 0; j < c; ++j) {
      const double coeff = weights[i] * probs[j] * (vx[j] - pv);
      double* o = out.data() + j * d;
      for (std::size_t k = 0; k < d; ++k) o[k] += coeff * x[k];
    }
  }
}

void ce_sample_grad_dots(const SampleView& s, std::span<const double> w, std::span<const double> v,
                         std::span<double> out) {
  const std::size_t d = s.num_features;
  const std::size_t c = s.num_classes;
  std::vector<double> logits(c), probs(c);
  for (std::size_t i = 0; i < s.num_samples; ++i) {
    const double* x = s.features.data() + i * d;
    detail::softmax_row(w, x, d, c, logits.data(), probs.data());
    double acc = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      const double* row = v.data() + j * d;
      double z = 0.0;
      for (std::size_t k = 0; k < d; ++k) z += row[k] * x[k];
      acc += (probs[j] - (static_cast<int>(j) == s.labels[i] ? 1.0 : 0.0)) * z;
    }
    out[i] = acc;
  }
}

void ce_sample_values(const SampleView& s, std::span<const double> w, std::span<double> out) {
  const std::size_t d = s.num_features;
  const std::size_t c = s.num_classes;
  std::vector<double> logits(c), probs(c);
  for (std::size_t i = 0; i < s.num_samples; ++i) {
    const double* x = s.features.data() + i * d;
    const double lse = detail::softmax_row(w, x, d, c, logits.data(), probs.data());
    out[i] = lse - logits[s.labels[i]];
  }
}

}  // namespace serial
}  // namespace rahgd::kernels
