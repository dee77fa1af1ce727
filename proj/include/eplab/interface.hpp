#pragma once

// Single linear interface: a copolymer near one flat AB interface at height 0,
// A-solvent above and B-solvent on or below.

#include <map>
#include <span>
#include <vector>

#include "eplab/disorder.hpp"
#include "eplab/numeric.hpp"
#include "eplab/walk_dp.hpp"

namespace eplab {

enum class Convention { Unshifted, Shifted };

const char* convention_name(Convention c);

struct InteractionParams {
  double alpha = 0.0;
  double beta = 0.0;
  Convention convention = Convention::Shifted;

  bool in_cone() const { return alpha >= (beta < 0 ? -beta : beta); }
  InteractionParams with(Convention c) const { return {alpha, beta, c}; }
};

/// Per-step weights for monomers w[0..n): lower steps reward B by e^beta
/// (and, shifted, penalise A by e^-alpha); upper steps reward A by e^alpha
/// in the unshifted convention only.
std::vector<StepWeights> interface_step_weights(const MonomerSequence& w, int n, const InteractionParams& p);

/// ln Z over muL-step paths (0,0) -> (L,0).
double interface_log_partition(const MonomerSequence& w, int L, double mu, const InteractionParams& p,
                               StepRule rule = StepRule::BothEndpoints);

/// ln Z for every step count k = 0..max_steps from one pass (-inf where the
/// ensemble is empty).
std::vector<double> interface_log_partitions(const MonomerSequence& w, int L, int max_steps,
                                             const InteractionParams& p, StepRule rule = StepRule::BothEndpoints);

/// Monomer sequence of replica r at size L; shared by every parameter point
/// so that estimates at different (alpha, beta, mu) use common disorder.
MonomerSequence replica_monomers(const SeedSpec& seed, int L, int replica, std::size_t n);

struct InterfaceFreeEnergyEstimate {
  InteractionParams params;
  double mu = 1.0;
  std::vector<int> sizes;
  int replicas = 0;
  std::vector<std::vector<double>> values;  // [size][replica], (1/muL) ln Z
  std::vector<SampleStats> stats;           // per size
  double mean = 0.0;                        // largest size
  double stderr_ = 0.0;
  double drift = 0.0;                       // mean(last) - mean(previous), 0 for one size
  bool scatter_shrinks = true;              // replica stddev nonincreasing along the sizes
  SeedSpec seed;
};

InterfaceFreeEnergyEstimate phi_estimate(const InteractionParams& p, double mu, std::span<const int> sizes,
                                         int replicas, const SeedSpec& seed, int threads = 1);

/// Quenched phi on the full mu range at one size: every admissible mu = k/L
/// in [1, mu_max], common replicas across mu.
struct PhiCurveSpec {
  int L = 48;
  double mu_max = 20.0;
  int replicas = 32;
};

class PhiCurve {
 public:
  PhiCurve() = default;
  static PhiCurve compute(const InteractionParams& p, const PhiCurveSpec& spec, const SeedSpec& seed,
                          int threads = 1);

  const InteractionParams& params() const { return params_; }
  const PhiCurveSpec& spec() const { return spec_; }
  const std::vector<double>& mu() const { return mu_; }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& stderr_() const { return stderr_v_; }
  /// values[replica][i] at mu()[i].
  const std::vector<std::vector<double>>& values() const { return values_; }
  /// Interpolated mean phi (spline of mu * phi).
  double operator()(double mu) const;
  double derivative(double mu) const;
  /// Index of the grid point nearest to mu.
  std::size_t nearest(double mu) const;
  double mu_max() const { return mu_.empty() ? 1.0 : mu_.back(); }
  bool empty() const { return mu_.empty(); }

 private:
  InteractionParams params_;
  PhiCurveSpec spec_;
  std::vector<double> mu_, mean_, stderr_v_;
  std::vector<std::vector<double>> values_;
  CubicSpline mu_phi_;
};

struct TailCheck {
  std::vector<double> mu;
  std::vector<InterfaceFreeEnergyEstimate> estimates;
  bool decreasing = true;  // each estimate < previous + 3 sigma
};

TailCheck phi_tail_check(const InteractionParams& p, std::span<const double> mu_list, std::span<const int> sizes,
                         int replicas, const SeedSpec& seed, int threads = 1);

/// Exact sample from the polymer measure of the interface model.
Path sample_interface_path(const MonomerSequence& w, int L, double mu, const InteractionParams& p,
                           const SeedSpec& seed, StepRule rule = StepRule::BothEndpoints);

/// Heights after each step of a path starting at height 0.
std::vector<int> path_heights(const Path& path);

struct Excursion {
  int length = 0;
  bool positive = false;  // strictly above the interface
};

/// Maximal runs of steps that are all upper (positive) or all lower.
std::vector<Excursion> path_excursions(const Path& path, StepRule rule = StepRule::BothEndpoints);

struct ExcursionStats {
  std::vector<std::vector<Excursion>> per_path;
  std::vector<int> positive_counts;       // l_{muL} per path
  std::map<int, long> histogram;          // positive excursion length -> count
  std::vector<int> ladder;
  std::vector<double> fraction_at_least;  // mean over paths
  std::vector<double> fraction_stderr;
  bool probative = true;                  // caller established localization
  bool monotone = true;
};

ExcursionStats excursion_tightness(const InteractionParams& p, double mu, int L, int paths,
                                   std::span<const int> ladder, const SeedSpec& seed, bool localized,
                                   int threads = 1);

}  // namespace eplab
