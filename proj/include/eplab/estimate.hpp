#pragma once

#include <span>
#include <vector>

#include "eplab/numeric.hpp"

namespace eplab {

/// Quenched Monte Carlo estimate over replicas at one or more sizes.
///
/// With three or more sizes and `extrapolated`, replica r's combined value is
/// sum_i w_i values[i][r] with the size-extrapolation weights, so value and
/// stderr come from one per-replica sample. Otherwise the combined values are
/// those of the largest size.
struct FreeEnergyEstimate {
  std::vector<int> sizes;
  int replicas = 0;
  std::vector<std::vector<double>> values;  // [size][replica]
  std::vector<SampleStats> per_size;
  std::vector<double> combined;             // per replica
  double value = 0.0;
  double stderr_ = 0.0;
  double drift = 0.0;  // mean(last size) - mean(previous size)
  bool extrapolated = false;

  static FreeEnergyEstimate from_values(std::span<const int> sizes, std::vector<std::vector<double>> values,
                                        bool extrapolate);
  /// A noiseless value, for synthetic inputs.
  static FreeEnergyEstimate exact(double v);
};

}  // namespace eplab
