#pragma once

// Phase diagram: the localization criterion, the critical curve beta_c(alpha),
// the transition scaling T(delta) = f(alpha, beta_c + delta) - f(alpha, beta_c)
// and finite-difference smoothness scans of f.

#include <functional>
#include <string>
#include <vector>

#include "eplab/blockpair.hpp"
#include "eplab/emulsion.hpp"
#include "eplab/interface.hpp"
#include "eplab/lattice_paths.hpp"

namespace eplab {

enum class Verdict { Localized, Delocalized, Undecided };

const char* verdict_name(Verdict v);

struct CriterionSpec {
  int L = 32;
  int replicas = 32;
  double mu_max = 20.0;
  /// Subtract c (f_A - 1/2) per replica, f_A the A fraction of the monomers
  /// used; E[f_A] = 1/2 exactly, so the mean is unchanged and the scatter drops.
  bool control_variate = true;
};

struct LocalizationVerdict {
  InteractionParams params;
  double value = 0.0;  // S = sup_mu mu [phi_shift(mu) - varpi] - varsigma
  double stderr_ = 0.0;
  double mu = 1.0;     // maximising mu
  double ci_lo = 0.0, ci_hi = 0.0;  // S -+ 3 stderr
  Verdict verdict = Verdict::Undecided;
  bool boundary = false;  // sup at mu_max: extend mu_max
  bool tail_ok = true;    // phi(mu_max) < varpi / 2
  int replicas = 0;
  int L = 0;
};

LocalizationVerdict localization_from_curve(const PhiCurve& curve, const SeedSpec& seed, bool control_variate = true);
LocalizationVerdict localization_score(const InteractionParams& p, const CriterionSpec& spec, const SeedSpec& seed,
                                       int threads = 1);

struct CriticalSpec {
  /// The maximising mu sits near 2.5 except deep in the localized phase, so
  /// probes start on a short mu range and widen it when the sup hits its end.
  CriterionSpec criterion{32, 32, 6.0, true};
  double mu_limit = 48.0;
  double tolerance = 0.02;  // final bracket width
  int max_doublings = 8;    // replica budget doublings per undecided probe
};

struct CriticalCurveSample {
  double alpha = 0.0;
  double beta_c = 0.0;
  double lo = 0.0, hi = 0.0;  // decided bracket: delocalized at lo, localized at hi
  Verdict verdict_lo = Verdict::Delocalized, verdict_hi = Verdict::Localized;
  bool diagonal = false;  // beta = alpha is not localized: beta_c = alpha
  bool flagged = false;   // a probe stayed undecided at the replica budget
  int probes = 0;
  int max_replicas = 0;
  double ci_lo() const { return lo; }
  double ci_hi() const { return hi; }
};

CriticalCurveSample critical_beta(double alpha, const CriticalSpec& spec, const SeedSpec& seed, int threads = 1);

struct CurveTrace {
  std::vector<CriticalCurveSample> samples;
  bool alpha_star_found = false;
  double alpha_star_lo = 0.0, alpha_star_hi = 0.0;  // largest diagonal alpha, next alpha
  double beta_star = 0.0;                           // beta_c at the largest alpha
  bool monotone = true;       // ci_hi(k+1) >= ci_lo(k)
  bool concave = true;        // midpoint concavity within CI
  bool alpha_star_below_beta_star = false;
  /// ci_hi at a1 < ci_lo at a2 (both must be on the grid).
  bool separated(double a1, double a2) const;
};

CurveTrace trace_curve(const std::vector<double>& alphas, const CriticalSpec& spec, const SeedSpec& seed,
                       int threads = 1);

/// Shared inputs for free-energy evaluations at many (alpha, beta).
struct FreeEnergyContext {
  KappaSurface kappa;
  GammaStarEstimate gamma;
  PhiCurveSpec phi{48, 20.0, 32};
  SeedSpec seed;
  double p = 0.8;
  int threads = 1;
  double psi_step = 0.125;
};

/// kappa surface and gamma*(p) at the default resolutions.
FreeEnergyContext make_context(double p, const SeedSpec& seed, int threads = 1);

/// f(alpha, beta; p). Points with beta > alpha use the exchange identity
/// f(alpha, beta) = f(beta, alpha) in the unshifted convention (valid where
/// (beta, alpha) is delocalized, which is the only case the diagonal contrast
/// needs). The result is reported in p.convention.
EmulsionFreeEnergy emulsion_point(const FreeEnergyContext& ctx, const InteractionParams& p);

/// sup_a psi_AB(a) - varpi at (alpha, beta), shifted.
double psi_excess(const FreeEnergyContext& ctx, double alpha, double beta);

struct TransitionScaling {
  double alpha = 0.0;
  double beta_c = 0.0;  // threshold of the free energy itself
  std::vector<double> deltas, T, T_stderr, ratio;  // ratio = T / delta^2
  double slope = 0.0, slope_stderr = 0.0;
  double ratio_lo = 0.0, ratio_hi = 0.0;
  bool positive = true;  // every T > 0 and T >= -3 stderr
};

/// Bisects the free-energy threshold on [beta_lo, beta_hi] to `beta_tolerance`,
/// then evaluates T on the delta ladder and fits log T against log delta.
TransitionScaling transition_scaling(const FreeEnergyContext& ctx, double alpha, const std::vector<double>& deltas,
                                     double beta_lo, double beta_hi, double beta_tolerance = 1e-4);

struct DiagonalContrast {
  double alpha = 0.0;
  std::vector<double> deltas, D;  // |f(alpha, alpha + delta) - f(alpha, alpha)|, unshifted
  std::vector<double> D_stderr;
  double slope = 0.0, slope_stderr = 0.0;
};

DiagonalContrast diagonal_contrast(const FreeEnergyContext& ctx, double alpha, const std::vector<double>& deltas);

struct SmoothnessReport {
  std::vector<double> alphas, betas;
  std::vector<std::vector<double>> f;  // [alpha][beta], shifted
  double max_second_difference = 0.0;
  double max_jump = 0.0;       // largest third difference along a row or column
  double noise_bound = 0.0;    // from the two replica halves
  std::vector<std::string> flagged;  // "alpha=..,beta=.." stencil anchors above 5x noise
  bool smooth = true;
};

/// f on the grid alpha0 + i h, beta0 + j h inside the rectangle.
SmoothnessReport smoothness_scan(const FreeEnergyContext& ctx, double alpha0, double alpha1, double beta0,
                                 double beta1, double h);

/// Same scan over a caller-supplied function (used for synthetic checks).
SmoothnessReport smoothness_scan(const std::function<double(double, double)>& f, double alpha0, double alpha1,
                                 double beta0, double beta1, double h, double noise_bound);

}  // namespace eplab
