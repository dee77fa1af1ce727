#include "eplab/estimate.hpp"

#include "eplab/error.hpp"

namespace eplab {

FreeEnergyEstimate FreeEnergyEstimate::from_values(std::span<const int> sizes,
                                                   std::vector<std::vector<double>> values, bool extrapolate) {
  require(!sizes.empty() && values.size() == sizes.size(), "estimate: one value row per size");
  FreeEnergyEstimate e;
  e.sizes.assign(sizes.begin(), sizes.end());
  e.values = std::move(values);
  e.replicas = static_cast<int>(e.values.front().size());
  for (const auto& row : e.values) {
    require(static_cast<int>(row.size()) == e.replicas, "estimate: ragged replica rows");
    e.per_size.push_back(sample_stats(row));
  }
  e.extrapolated = extrapolate && sizes.size() >= 3;
  if (e.extrapolated) {
    const auto w = extrapolation_weights(sizes);
    e.combined.assign(static_cast<std::size_t>(e.replicas), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::size_t r = 0; r < e.combined.size(); ++r) e.combined[r] += w[i] * e.values[i][r];
  } else {
    e.combined = e.values.back();
  }
  const auto s = sample_stats(e.combined);
  e.value = s.mean;
  e.stderr_ = s.stderr_;
  if (e.per_size.size() > 1) e.drift = e.per_size.back().mean - e.per_size[e.per_size.size() - 2].mean;
  return e;
}

FreeEnergyEstimate FreeEnergyEstimate::exact(double v) {
  const int sizes[1] = {0};
  return from_values(sizes, {{v}}, false);
}

}  // namespace eplab
