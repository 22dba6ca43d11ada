#pragma once

#include <cstddef>
#include <span>

// Weighted multinomial-logistic (softmax cross-entropy) data term
//   D(W) = sum_i w_i CE_i(W),  CE_i(W) = logsumexp(W x_i) - (W x_i)_{y_i}
// with W a c x d row-major matrix. These are the data-parallel inner loops of
// the hypercleaning and hyperparameter-optimisation problems.
//
// rahgd::kernels::*          OpenMP implementation (fixed sample blocks,
//                            ordered reduction: results do not depend on the
//                            thread count)
// rahgd::kernels::serial::*  straightforward reference loop, kept for tests
//                            and benchmarks

namespace rahgd::kernels {

struct SampleView {
  std::span<const double> features;  ///< num_samples x num_features, row-major
  std::span<const int> labels;       ///< class index per sample
  std::size_t num_samples = 0;
  std::size_t num_features = 0;
  std::size_t num_classes = 0;
};

/// Returns D(W) and writes grad D(W) into `grad` (size c*d, overwritten).
double ce_value_grad(const SampleView& s, std::span<const double> weights,
                     std::span<const double> w, std::span<double> grad);

/// D(W) only.
double ce_value(const SampleView& s, std::span<const double> weights, std::span<const double> w);

/// out = (d2 D / dW2) v.
void ce_hvp(const SampleView& s, std::span<const double> weights, std::span<const double> w,
            std::span<const double> v, std::span<double> out);

/// out_i = <grad CE_i(W), v> for every sample (size num_samples).
void ce_sample_grad_dots(const SampleView& s, std::span<const double> w, std::span<const double> v,
                         std::span<double> out);

/// out_i = CE_i(W).
void ce_sample_values(const SampleView& s, std::span<const double> w, std::span<double> out);

namespace serial {

double ce_value_grad(const SampleView& s, std::span<const double> weights,
                     std::span<const double> w, std::span<double> grad);
double ce_value(const SampleView& s, std::span<const double> weights, std::span<const double> w);
void ce_hvp(const SampleView& s, std::span<const double> weights, std::span<const double> w,
            std::span<const double> v, std::span<double> out);
void ce_sample_grad_dots(const SampleView& s, std::span<const double> w, std::span<const double> v,
                         std::span<double> out);
void ce_sample_values(const SampleView& s, std::span<const double> w, std::span<double> out);

}  // namespace serial

namespace detail {

/// Softmax probabilities of W x into `probs` (size c); returns logsumexp(W x).
double softmax_row(std::span<const double> w, const double* x, std::size_t d, std::size_t c,
                   double* logits, double* probs);

/// Samples per reduction block for n samples. Depends only on n.
std::size_t block_size_for(std::size_t n);

}  // namespace detail

}  // namespace rahgd::kernels
