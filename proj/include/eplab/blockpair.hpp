#pragma once

// Block-pair free energies psi_kl(a): free energy per step of a path that
// crosses a k-block diagonally in aL steps while the l-block below it is the
// neighbour it may visit. AA and BB have no interface and reduce to kappa;
// AB (and the mirrored BA) are variational over the time spent at the
// interface.

#include <functional>
#include <string>
#include <vector>

#include "eplab/disorder.hpp"
#include "eplab/interface.hpp"
#include "eplab/lattice_paths.hpp"
#include "eplab/numeric.hpp"

namespace eplab {

enum class PairLabel { AA, AB, BA, BB };

const char* pair_name(PairLabel kl);
PairLabel parse_pair(const std::string& s);

/// Shifted-convention phi(mu) on [1, mu_max], with an optional stderr.
struct PhiFunction {
  std::function<double(double)> value;
  std::function<double(double)> stderr_;
  double mu_max = 20.0;
};

/// Mean spline of a computed curve; stderr from the nearest grid point.
PhiFunction phi_function(const PhiCurve& curve);

/// psi_AA or psi_BB for a >= 2.
double psi_diag(PairLabel kl, double a, const InteractionParams& p);

struct OptimizerCertificate {
  int evaluations = 0;
  double final_cell = 0.0;
  double last_improvement = 0.0;
  bool converged = false;
};

struct BlockPairFreeEnergy {
  PairLabel kl = PairLabel::AB;
  double a = 2.0;
  double value = 0.0;
  Convention convention = Convention::Shifted;
  double c = 0.0;  // steps per L spent at the interface
  double b = 0.0;  // horizontal distance per L spent at the interface
  double mu = 0.0; // c / b, 0 on the pure crossing branch
  bool interface_branch = false;  // optimum has c > 0
  OptimizerCertificate certificate;
};

struct PsiOptions {
  int grid = 64;
  int rounds = 4;
  double zoom = 4.0;
  double mu_cap = 20.0;    // mu_0: c <= mu_0 b
  double tolerance = 1e-4; // certificate threshold on the final cell
};

/// sup over DOM(a) of [c phi(c/b) + (a-c)(bulk + kappa(a-c, 1-b))]/a, with
/// bulk = 0 for AB and (beta-alpha)/2 for BA in the shifted convention. The
/// phi function must be the shifted phi at the same (alpha, beta).
BlockPairFreeEnergy psi_AB(double a, const InteractionParams& p, const PhiFunction& phi, const KappaSurface& kappa,
                           const PsiOptions& opt = {});
BlockPairFreeEnergy psi_BA(double a, const InteractionParams& p, const PhiFunction& phi, const KappaSurface& kappa,
                           const PsiOptions& opt = {});

/// The variational objective itself at (c, b) in DOM(a), shifted; b = 0 is
/// the pure crossing branch.
double psi_objective(PairLabel kl, double a, double c, double b, const InteractionParams& p, const PhiFunction& phi,
                     const KappaSurface& kappa);

/// psi_AB tabulated on a uniform a grid with a spline of a * psi_AB(a).
class PsiCurve {
 public:
  PsiCurve() = default;
  static PsiCurve compute(const InteractionParams& p, const PhiFunction& phi, const KappaSurface& kappa,
                          double a_max = 12.0, double step = 0.125, const PsiOptions& opt = {});
  const std::vector<BlockPairFreeEnergy>& points() const { return points_; }
  double operator()(double a) const;  // shifted psi_AB
  /// d[a psi_AB(a)]/da.
  double a_psi_derivative(double a) const;
  /// Tabulated point nearest to a.
  const BlockPairFreeEnergy& nearest(double a) const;
  double a_max() const { return a_max_; }

 private:
  std::vector<BlockPairFreeEnergy> points_;
  CubicSpline a_psi_;
  double a_max_ = 2.0;
};

struct VariationalMaximizer {
  double delta = 0.0;
  double a = 0.0;  // a_alpha(delta)
  double c = 0.0;
  double b = 0.0;
  double mu = 0.0;
  double value = 0.0;  // sup_a psi_AB(a), shifted
  double a0 = 12.0;
  double mu0 = 20.0;
};

/// Maximises psi_AB(a) over a in [2, a0] for parameters (alpha, beta_c + delta)
/// already folded into p and phi; delta is recorded only.
VariationalMaximizer psi_sup_and_maximisers(const InteractionParams& p, double delta, const PhiFunction& phi,
                                            const KappaSurface& kappa, double a0 = 12.0, const PsiOptions& opt = {});

/// Runtime justification of the caps a0 and mu0.
struct CapCheck {
  double psi_at_a0 = 0.0;
  double phi_at_mu0 = 0.0;
  bool a0_ok = false;   // psi_AB(a0) < varpi + margin
  bool mu0_ok = false;  // phi(mu0) < kappa(a*, 1) / 2
};
CapCheck cap_check(const InteractionParams& p, const PhiFunction& phi, const KappaSurface& kappa, double a0 = 12.0,
                   double margin = 0.0, const PsiOptions& opt = {});

/// Local refinements of the AB objective from random interior starts.
struct UniquenessReport {
  std::vector<BlockPairFreeEnergy> starts;
  double spread = 0.0;  // max distance between refined (c, b)
  bool unique = false;  // spread <= tolerance
};
UniquenessReport psi_uniqueness(double a, const InteractionParams& p, const PhiFunction& phi,
                                const KappaSurface& kappa, int starts, const SeedSpec& seed, double tolerance,
                                const PsiOptions& opt = {});

/// ln Z over aL-step paths (0,0) -> (L,L), x in [0,L], height in (-L, L],
/// with the upper block labelled k and the lower block l.
double blockpair_log_partition(const MonomerSequence& w, int L, double a, PairLabel kl, const InteractionParams& p);

/// Per-step weights of the two-block crossing for monomers w[0..n).
std::vector<StepWeights> blockpair_step_weights(const MonomerSequence& w, int n, Label upper, Label lower,
                                                const InteractionParams& p);

}  // namespace eplab
