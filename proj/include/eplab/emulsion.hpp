#pragma once

// The emulsion: a copolymer crossing a random field of A and B blocks of
// side L, one block diagonally at a time. The variational free energy is
// reduced to single-row frequency matrices M_gamma, with gamma* the largest
// AB-pair frequency an A-percolating coarse path can realise.

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "eplab/blockpair.hpp"
#include "eplab/disorder.hpp"
#include "eplab/interface.hpp"

namespace eplab {

struct FrequencyMatrix {
  double aa = 1.0, ab = 0.0, ba = 0.0, bb = 0.0;

  /// Entries >= 0 summing to 1.
  bool valid(double tol = 1e-12) const;
  /// rho_AA = 1 - gamma, rho_AB = gamma.
  static FrequencyMatrix single_row(double gamma);
};

struct StepsPerBlock {
  double aa = 2.5, ab = 2.5, ba = 2.5, bb = 2.5;
  bool valid() const { return aa >= 2.0 && ab >= 2.0 && ba >= 2.0 && bb >= 2.0; }
};

struct PsiValues {
  double aa = 0.0, ab = 0.0, ba = 0.0, bb = 0.0;
};

/// sum rho_kl a_kl psi_kl / sum rho_kl a_kl.
double V(const FrequencyMatrix& rho, const StepsPerBlock& a, const PsiValues& psi);

/// Which neighbour block a coarse crossing is paired with. Standard: an
/// up-right crossing of block (i, j) pairs with (i, j-1) below; a down-right
/// crossing of (i, j-1) pairs with (i, j) above. Mirrored swaps up and down.
enum class NeighbourRule { Standard, Mirrored };

/// Largest number of AB pairs over coarse paths of N diagonal crossings,
/// starting at any corner of column 0, crossing only A-blocks (rows wrap).
/// Returns -1 when no all-A path exists.
int max_ab_crossings(const BlockField& field, NeighbourRule rule = NeighbourRule::Standard);

struct GammaStarEstimate {
  double p = 0.0;
  std::vector<int> sizes;
  std::vector<std::vector<double>> gamma_hat;  // [size][replica], NaN if infeasible
  std::vector<int> infeasible;                 // per size
  std::vector<SampleStats> per_size;
  double value = 0.0;  // extrapolated in 1/N
  double stderr_ = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;  // value +- 3 stderr, clipped to [0, 1]
};

/// Replica means per N and a least-squares fit c0 + c1/N (one size: no fit).
GammaStarEstimate gamma_star(double p, std::span<const int> sizes, int replicas, const SeedSpec& seed,
                             int threads = 1, NeighbourRule rule = NeighbourRule::Standard);

struct FreeEnergyOptions {
  double a0 = 12.0;
  int gamma_points = 9;  // gamma grid on [0, gamma*]
  double tolerance = 1e-9;
};

struct EmulsionFreeEnergy {
  InteractionParams params;
  double p = 0.0;
  double value = 0.0;     // f in params.convention
  double shifted = 0.0;   // f in the shifted convention
  double stderr_ = 0.0;
  double gamma = 0.0, x = 2.5, y = 2.5;  // maximisers
  double baseline = 0.0;  // varpi in params.convention
  bool localized = false;  // optimum above the baseline, attained at gamma*
  std::vector<double> gamma_grid;
  std::vector<double> v_of_gamma;  // max_{x,y} V(M_gamma) per gamma, shifted
  bool gamma_monotone = true;
};

/// Inner problem at fixed gamma: max over x, y in [2, a0] of V(M_gamma, (x, y)).
struct InnerOptimum {
  double value = 0.0, x = 2.5, y = 2.5;
};
InnerOptimum inner_optimum(double gamma, const PsiCurve& psi, double a0 = 12.0);

/// f(alpha, beta; p) from the psi_AB curve at the same parameters and gamma*.
/// phi_stderr(mu), if given, feeds the envelope-theorem error of f through
/// the interface term at the optimum; gamma.stderr_ feeds the gamma* part.
EmulsionFreeEnergy free_energy(const InteractionParams& p, double density, const PsiCurve& psi,
                               const GammaStarEstimate& gamma, const FreeEnergyOptions& opt = {},
                               const std::function<double(double)>& phi_stderr = {});

struct UniquenessDiagnostic {
  std::vector<std::array<double, 2>> optima;  // (x, y) per start
  double spread = 0.0;
  bool unique = false;
  double foc_x = 0.0;  // d[x psi_AB(x)]/dx at x* minus f
  double foc_y = 0.0;  // d[y kappa(y,1)]/dy at y* minus f
};
UniquenessDiagnostic maximiser_uniqueness(const EmulsionFreeEnergy& f, const PsiCurve& psi, int starts,
                                          const SeedSpec& seed, double tolerance = 1e-3, double a0 = 12.0);

/// Energy bookkeeping of the finite emulsion. Match rewards (A in A) by alpha
/// and (B in B) by beta; Mismatch rewards (A in B) by alpha and (B in A) by beta.
enum class Hamiltonian { Match, Mismatch };

/// ln Z over W_{n,L}: n-step paths from (0,0) that are concatenations of
/// corner-to-corner crossings of L x L blocks, each crossing confined to the
/// crossed block and its neighbour. Unshifted energies unless p is shifted
/// (then alpha per A monomer is subtracted). -inf when W_{n,L} is empty.
double emulsion_log_partition(const MonomerSequence& w, const BlockField& field, int n, int L,
                              const InteractionParams& p, Hamiltonian h = Hamiltonian::Match);

struct SymmetryReport {
  double swap_lhs = 0.0, swap_rhs = 0.0;            // identity (i)
  double mismatch_lhs = 0.0, mismatch_rhs = 0.0;    // identity (ii)
  double swap_error = 0.0, mismatch_error = 0.0;
  bool empty = false;
  bool ok = false;  // both errors <= 1e-10
};

/// (i) Z^{w,O}(alpha, beta) = Z^{w~,O~}(beta, alpha) with all labels swapped;
/// (ii) ln Z(alpha, beta) = sum_i (alpha 1{A} + beta 1{B}) + ln Z_mismatch(-alpha, -beta).
SymmetryReport finite_size_symmetry_check(const MonomerSequence& w, const BlockField& field, int n, int L,
                                          const InteractionParams& p);

}  // namespace eplab
