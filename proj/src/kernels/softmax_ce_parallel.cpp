#include <algorithm>
#include <vector>

#include "rahgd/kernels/softmax_ce.hpp"

namespace rahgd::kernels {
namespace {

struct Blocks {
  std::size_t size;
  std::size_t count;
};

Blocks blocks_for(std::size_t n) {
  const std::size_t size = detail::block_size_for(n);
  return {size, (n + size - 1) / size};
}

// Sums per-block partials in block order so the result is independent of
// how blocks were scheduled across threads.
void reduce_ordered(const std::vector<double>& partials, std::size_t count, std::span<double> out) {
  const std::size_t width = out.size();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t b = 0; b < count; ++b) {
    const double* p = partials.data() + b * width;
    for (std::size_t k = 0; k < width; ++k) out[k] += p[k];
  }
}

}  // namespace

double ce_value_grad(const SampleView& s, std::span<const double> weights,
                     std::span<const double> w, std::span<double> grad) {
  const std::size_t d = s.num_features;
  const std::size_t c = s.num_classes;
  const Blocks blk = blocks_for(s.num_samples);
  std::vector<double> partial_grad(blk.count * grad.size(), 0.0);
  std::vector<double> partial_value(blk.count, 0.0);

#pragma omp parallel
  {
    std::vector<double> logits(c), probs(c);
#pragma omp for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blk.count); ++b) {
      const std::size_t lo = static_cast<std::size_t>(b) * blk.size;
      const std::size_t hi = std::min(s.num_samples, lo + blk.size);
      double* g_out = partial_grad.data() + static_cast<std::size_t>(b) * grad.size();
      double value = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        const double* x = s.features.data() + i * d;
        const double lse = detail::softmax_row(w, x, d, c, logits.data(), probs.data());
        const int label = s.labels[i];
        value += weights[i] * (lse - logits[label]);
        for (std::size_t j = 0; j < c; ++j) {
          const double coeff = weights[i] * (probs[j] - (static_cast<int>(j) == label ? 1.0 : 0.0));
          double* g = g_out + j * d;
          for (std::size_t k = 0; k < d; ++k) g[k] += coeff * x[k];
        }
      }
      partial_value[static_cast<std::size_t>(b)] = value;
    }
  }

  reduce_ordered(partial_grad, blk.count, grad);
  double value = 0.0;
  for (double v : partial_value) value += v;
  return value;
}

double ce_value(const SampleView& s, std::span<const double> weights, std::span<const double> w) {
  const std::size_t d = s.num_features;
  const std::size_t c = s.num_classes;
  const Blocks blk = blocks_for(s.num_samples);
  std::vector<double> partial_value(blk.count, 0.0);

#pragma omp parallel
  {
    std::vector<double> logits(c), probs(c);
#pragma omp for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blk.count); ++b) {
      const std::size_t lo = static_cast<std::size_t>(b) * blk.size;
      const std::size_t hi = std::min(s.num_samples, lo + blk.size);
      double value = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        const double* x = s.features.data() + i * d;
        const double lse = detail::softmax_row(w, x, d, c, logits.data(), probs.data());
        value += weights[i] * (lse - logits[s.labels[i]]);
      }
      partial_value[static_cast<std::size_t>(b)] = value;
    }
  }

  double value = 0.0;
  for (double v : partial_value) value += v;
  return value;
}

void ce_hvp(const SampleView& s, std::span<const double> weights, std::span<const double> w,
            std::span<const double> v, std::span<double> out) {
  const std::size_t d = s.num_features;
  const std::size_t c = s.num_classes;
  const Blocks blk = blocks_for(s.num_samples);
  std::vector<double> partial(blk.count * out.size(), 0.0);

#pragma omp parallel
  {
    std::vector<double> logits(c), probs(c), vx(c);
#pragma omp for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blk.count); ++b) {
      const std::size_t lo = static_cast<std::size_t>(b) * blk.size;
      const std::size_t hi = std::min(s.num_samples, lo + blk.size);
      double* o_out = partial.data() + static_cast<std::size_t>(b) * out.size();
      for (std::size_t i = lo; i < hi; ++i) {
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
          double* o = o_out + j * d;
          for (std::size_t k = 0; k < d; ++k) o[k] += coeff * x[k];
        }
      }
    }
  }

  reduce_ordered(partial, blk.count, out);
}

void ce_sample_grad_dots(const SampleView& s, std::span<const double> w, std::span<const double> v,
                         std::span<double> out) {
  const std::size_t d = s.num_features;
  const std::size_t c = s.num_classes;

#pragma omp parallel
  {
    std::vector<double> logits(c), probs(c);
#pragma omp for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(s.num_samples); ++ii) {
      const std::size_t i = static_cast<std::size_t>(ii);
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
}

void ce_sample_values(const SampleView& s, std::span<const double> w, std::span<double> out) {
  const std::size_t d = s.num_features;
  const std::size_t c = s.num_classes;

#pragma omp parallel
  {
    std::vector<double> logits(c), probs(c);
#pragma omp for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(s.num_samples); ++ii) {
      const std::size_t i = static_cast<std::size_t>(ii);
      const double* x = s.features.data() + i * d;
      const double lse = detail::softmax_row(w, x, d, c, logits.data(), probs.data());
      out[i] = lse - logits[s.labels[i]];
    }
  }
}

}  // namespace rahgd::kernels
