#pragma once

// Layered transfer-matrix engine for directed paths with unit steps
// {right, up, down} and no immediate up/down reversal. One layer per step;
// the state inside a layer is (x, height, last move).

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace eplab {

enum class Move : std::uint8_t { Right = 0, Up = 1, Down = 2 };

using Path = std::vector<Move>;

/// How a step is assigned to the region below (or on) the interface at
/// height 0 versus strictly above it.
enum class StepRule {
  /// Lower iff both endpoints have height <= 0. Vertical 0 -> 1 is upper,
  /// vertical 0 -> -1 is lower, horizontal steps at height 0 are lower.
  BothEndpoints,
  /// Lower iff at least one endpoint has height <= 0 (so 0 -> 1 is lower).
  AnyEndpoint,
};

/// True when the step from height `from` to height `to` counts as lying on
/// or below the interface.
bool step_is_lower(int from, int to, StepRule rule);

/// Multiplicative weight of one step, by region.
struct StepWeights {
  double lower = 1.0;
  double upper = 1.0;
};

/// Static bounds of the lattice box: x in [0, x_max], height in [h_min, h_max].
struct WalkBox {
  int x_max = 0;
  int h_min = 0;
  int h_max = 0;
};

/// States the pass must keep reachable: x in [x_min, x_max] at height h.
/// States that cannot reach any target within the remaining steps are pruned.
struct WalkTarget {
  int x_min = 0;
  int x_max = 0;
  int h = 0;
};

/// Read access to one finished layer of a weighted pass.
class LayerView {
 public:
  LayerView(const double* data, const WalkBox& box, int stride, double log_scale)
      : data_(data), box_(box), stride_(stride), log_scale_(log_scale) {}

  /// log of the total weight of paths ending at (x, h) with the given last move.
  double log_weight(int x, int h, Move last) const;
  /// log of the total weight of paths ending at (x, h), any last move.
  double log_weight(int x, int h) const;

 private:
  const double* data_;
  WalkBox box_;
  int stride_;
  double log_scale_;
};

/// Weighted forward pass in log-safe form (per-layer renormalised doubles).
///
/// Step i (1-based) of a path is multiplied by weights[i-1].lower or .upper
/// according to the step rule, and right steps are additionally multiplied by
/// `right_factor`. The observer, if given, is called after every layer.
class WalkDP {
 public:
  WalkDP(WalkBox box, StepRule rule);

  void run(int n_steps, std::span<const StepWeights> weights, double right_factor,
           WalkTarget target, bool keep_layers,
           const std::function<void(int, const LayerView&)>& observer = {});

  /// View of layer i; requires keep_layers, or i == n_steps of the last run.
  LayerView layer(int i) const;

  /// Draw one path ending at (x, h) after n_steps from the stored layers with
  /// probability proportional to its weight. `uniform` must return values in [0,1).
  Path sample_backward(int x, int h, const std::function<double()>& uniform) const;

  const WalkBox& box() const { return box_; }
  StepRule rule() const { return rule_; }

 private:
  std::size_t index(int x, Move m, int h) const;

  WalkBox box_;
  StepRule rule_;
  int height_span_;  // h_max - h_min + 1, plus two zero pads
  std::size_t layer_size_;
  int n_steps_ = 0;
  double right_factor_ = 1.0;
  std::vector<StepWeights> weights_;
  std::vector<double> current_;
  double current_log_scale_ = 0.0;
  std::vector<std::vector<double>> layers_;
  std::vector<double> log_scales_;
};

/// Exact path count to (x, h) after n steps with unit weights, or nullopt when
/// the count is not representable below 2^63 (or n is too large to run exactly).
std::optional<std::uint64_t> exact_walk_count(WalkBox box, int n_steps, int x, int h);

}  // namespace eplab
