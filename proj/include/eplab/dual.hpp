#pragma once

// The dual interface model: L-step paths returning to the interface at any
// horizontal position, with fugacity e^{-lambda} per horizontal step.

#include <span>
#include <vector>

#include "eplab/estimate.hpp"
#include "eplab/interface.hpp"
#include "eplab/lattice_paths.hpp"

namespace eplab {

/// ln U_L: sum over L-step paths (0,0) -> (x,0), 1 <= x <= L, of
/// exp(-lambda x) times the interface weight (convention taken from p).
double dual_log_partition(const MonomerSequence& w, int L, double lambda, const InteractionParams& p,
                          StepRule rule = StepRule::BothEndpoints);

/// log weight of each end position x = 0..L (index x), same ensemble.
std::vector<double> dual_end_log_weights(const MonomerSequence& w, int L, double lambda,
                                         const InteractionParams& p, StepRule rule = StepRule::BothEndpoints);

/// Quenched (1/L) ln U_L over replicas; extrapolated in L when `extrapolate`
/// and at least three sizes are given.
FreeEnergyEstimate u_estimate(const InteractionParams& p, double lambda, std::span<const int> sizes, int replicas,
                              const SeedSpec& seed, int threads = 1, bool extrapolate = true);

/// (1/L) ln sum_paths e^{-lambda h}, extrapolated when three or more sizes are
/// given, else the largest-size value.
EntropyEstimate tilde_kappa(double lambda, std::span<const int> sizes);

struct LegendreResult {
  double value = 0.0;
  double argument = 0.0;    // maximising rho (forward) or minimising lambda (inverse)
  bool boundary = false;    // optimum at an end of the grid
  bool envelope = false;    // input failed the concavity / convexity check
  double grid_bound = 0.0;  // bound on the error from grid discretisation
};

/// sup over the grid of -lambda rho + phi(1/rho); phi_of_inv_rho[i] = phi(1/rho[i]),
/// rho strictly increasing in (0, 1].
LegendreResult legendre_forward(std::span<const double> rho, std::span<const double> phi_of_inv_rho, double lambda,
                                double concavity_tolerance = 1e-9);

/// inf over the grid of lambda / mu + u(lambda); lambda strictly increasing, >= 0.
LegendreResult legendre_inverse(std::span<const double> lambda, std::span<const double> u, double mu,
                                double convexity_tolerance = 1e-9);

/// True if all second differences (non-uniform grid) are <= tol (concave)
/// or >= -tol (convex).
bool concave_on_grid(std::span<const double> x, std::span<const double> y, double tol);
bool convex_on_grid(std::span<const double> x, std::span<const double> y, double tol);

/// Least concave majorant of the points (x[i], y[i]) evaluated at each x[i];
/// this is what a grid Legendre round trip reproduces for non-concave input.
std::vector<double> concave_majorant(std::span<const double> x, std::span<const double> y);

struct DualFreeEnergyCurve {
  InteractionParams params;
  std::vector<double> lambda;
  std::vector<FreeEnergyEstimate> u;
  std::vector<double> tilde_kappa;  // same lambda grid; empty if not computed
};

DualFreeEnergyCurve dual_curve(const InteractionParams& p, std::span<const double> lambdas, std::span<const int> sizes,
                               int replicas, const SeedSpec& seed, int threads = 1, bool with_tilde_kappa = true);

struct CurvatureRecord {
  double lambda = 0.0;
  double delta = 0.0;
  double second_difference = 0.0;
  double ratio = 0.0;  // second difference / delta^2
  double ratio_stderr = 0.0;
};

struct CurvatureReport {
  std::vector<CurvatureRecord> records;
  bool positive = true;  // every ratio > 3 stderr
  double ratio_min = 0.0, ratio_max = 0.0;
  bool stable = true;    // ratio_max <= 2 ratio_min
};

/// Second differences at each lambda point for each delta; the curve must
/// contain lambda and lambda +- delta. Differences are formed per replica.
CurvatureReport curvature_diagnostics(const DualFreeEnergyCurve& curve, std::span<const double> points,
                                      std::span<const double> deltas);

struct HorizontalVarianceRecord {
  int L = 0;
  double variance = 0.0;  // replica mean of Var(h) under the polymer measure
  double stderr_ = 0.0;
  double ratio = 0.0;     // variance / L
  double ratio_stderr = 0.0;
};

/// Var(h(pi)) under the dual polymer measure for each L, from the exact law
/// of the end position.
std::vector<HorizontalVarianceRecord> horizontal_step_variance(const InteractionParams& p, double lambda,
                                                               std::span<const int> sizes, int replicas,
                                                               const SeedSpec& seed, int threads = 1);

}  // namespace eplab
