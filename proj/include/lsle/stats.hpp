#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lsle {

// Pairwise (cascade) summation: the result is independent of how work was
// split across threads, since it only depends on the ordered input.
double pairwise_sum(std::span<const double> values);

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t count = 0;
};

// Sample mean and standard error of the mean (unbiased variance).
MeanStderr mean_stderr(std::span<const double> values);

double sample_variance(std::span<const double> values);

}  // namespace lsle
