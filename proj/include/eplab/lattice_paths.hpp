#pragma once

// Path entropies: exact counts of directed paths with steps {up, down, right}
// and no immediate up/down reversal, and the entropy functions built on them.
//
//   kappa(a, b)  entropy per step of aL-step crossings (0,0) -> (bL, L)
//                inside the height band (-L, L].
//   kappa_hat(mu) entropy per step of muL-step returns (0,0) -> (L, 0).

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eplab/numeric.hpp"

namespace eplab {

/// Convert a ratio times L to an integer; throws when r*L is not integral.
int ratio_times_size(double r, int L, const char* what);

struct CrossingSpec {
  int L = 1;
  double a = 1.0;
  double b = 0.0;
  int steps = 1;  // aL
  int span = 0;   // bL

  /// Validates (a, b) in DOM and integrality of aL, bL. Parity is not checked.
  static CrossingSpec from_ratios(int L, double a, double b);
  /// (a - b)L and L have equal parity.
  bool parity_ok() const { return ((steps - span - L) % 2) == 0; }
};

struct InterfaceWalkSpec {
  int L = 1;
  double mu = 1.0;
  int steps = 1;  // muL

  static InterfaceWalkSpec from_ratio(int L, double mu);
  bool parity_ok() const { return ((steps - L) % 2) == 0; }
};

/// ln N_L(a, b); -inf when no path exists.
double count_crossing_paths(const CrossingSpec& spec);
/// Exact N_L(a, b) when it fits below 2^63.
std::optional<std::uint64_t> count_crossing_paths_exact(const CrossingSpec& spec);
/// ln of the number of k-step crossings (0,0) -> (span, L) in the band, for
/// every k = 0..max_steps, from a single pass.
std::vector<double> crossing_log_counts(int L, int span, int max_steps);

/// ln of the number of muL-step paths (0,0) -> (L, 0), unrestricted height.
double count_interface_returns(const InterfaceWalkSpec& spec);
std::optional<std::uint64_t> count_interface_returns_exact(const InterfaceWalkSpec& spec);
/// Same for every step count k = 0..max_steps.
std::vector<double> interface_log_counts(int L, int max_steps);

/// kappa(a, 1) in closed form, and its first and second derivatives in a.
double kappa_closed_b1(double a);
double kappa_closed_b1_d1(double a);
double kappa_closed_b1_d2(double a);

/// Finite-size sequence and its extrapolation to L -> infinity.
struct EntropyEstimate {
  std::vector<int> sizes;
  std::vector<double> finite_values;  // (1/n) ln count at each size
  double value = 0.0;
  double error_bound = 0.0;
  SizeExtrapolation fit;
  bool empty = false;    // every finite count was zero
  bool partial = false;  // some sizes were empty: value is the largest-size lower bound
};

/// Fits the finite-size sequence. If only some entries are -inf (the band
/// can make small sizes infeasible), the result is marked partial unless
/// `strict`, in which case that is an error.
EntropyEstimate extrapolate_entropy(std::span<const int> sizes, std::span<const double> values,
                                    bool strict = true);

EntropyEstimate kappa_estimate(double a, double b, std::span<const int> sizes);
EntropyEstimate kappa_hat_estimate(double mu, std::span<const int> sizes);

struct KappaCell {
  double a = 0.0, b = 0.0;
  EntropyEstimate estimate;
};

struct KappaHatCell {
  double mu = 1.0;
  EntropyEstimate estimate;
};

/// Grid layout of an entropy table. kappa cells sit on s = a - 1 - b in
/// [0, s_max] and b in [0, b_max], both with spacing `step`; kappa_hat cells
/// on mu in [1, mu_max] with the same spacing. All sizes must make every
/// grid point an admissible (integral, parity-consistent) ensemble.
struct EntropyGrid {
  double step = 1.0 / 16.0;
  double s_max = 11.0;
  double b_max = 1.25;
  double mu_max = 20.0;
  std::vector<int> sizes{32, 64, 96};
  std::vector<int> mu_sizes{32, 64, 96};
  bool with_kappa = true;
  bool with_kappa_hat = true;
};

class EntropyTable {
 public:
  EntropyTable() = default;
  EntropyTable(EntropyGrid grid, std::vector<KappaCell> kappa, std::vector<KappaHatCell> kappa_hat);

  const EntropyGrid& grid() const { return grid_; }
  const std::vector<KappaCell>& kappa() const { return kappa_; }
  const std::vector<KappaHatCell>& kappa_hat() const { return kappa_hat_; }
  std::size_t s_count() const { return s_count_; }
  std::size_t b_count() const { return b_count_; }
  /// Cell at grid indices (s index, b index).
  const KappaCell& kappa_at(std::size_t is, std::size_t ib) const;

  /// Rows a,b,L,value,error_bound; the extrapolated row has L = inf.
  std::string kappa_csv() const;
  /// Rows mu,L,value,error_bound.
  std::string kappa_hat_csv() const;
  /// Full table with extrapolation metadata and the constants.
  std::string to_json() const;

 private:
  EntropyGrid grid_;
  std::vector<KappaCell> kappa_;  // index is * b_count + ib
  std::vector<KappaHatCell> kappa_hat_;
  std::size_t s_count_ = 0, b_count_ = 0;
};

EntropyTable build_entropy_table(const EntropyGrid& grid, int threads);

/// Smooth interpolant of kappa over the table's (s, b) rectangle. The b = 1
/// row is pinned to the closed form by a correction that depends on s only;
/// kappa(a, 0) is taken as its limit 0 from b > 0.
class KappaSurface {
 public:
  KappaSurface() = default;
  explicit KappaSurface(const EntropyTable& table);

  double operator()(double a, double b) const { return eval(a, b, 0, 0); }
  /// Partial derivative of order (da, db) in the (a, b) coordinates.
  double eval(double a, double b, int da, int db) const;
  bool contains(double a, double b) const;
  bool empty() const { return spline_.empty(); }
  double a_max_at(double b) const { return s_max_ + 1.0 + b; }
  double b_max() const { return b_max_; }

 private:
  BicubicSpline spline_;
  double s_max_ = 0.0, b_max_ = 0.0;
};

/// Interpolant of mu -> mu * kappa_hat(mu).
class KappaHatCurve {
 public:
  KappaHatCurve() = default;
  explicit KappaHatCurve(const EntropyTable& table);
  double operator()(double mu) const;
  double mu_max() const { return spline_.x_max(); }
  bool empty() const { return spline_.empty(); }

 private:
  CubicSpline spline_;  // of mu * kappa_hat(mu)
};

struct KappaHatGap {
  double value = 0.0;        // sup_mu mu [kappa_hat(mu) - varpi]
  double mu_at_max = 1.0;
  double error_bound = 0.0;  // mu_at_max * error bound of the maximising cell
  bool boundary = false;     // supremum at the largest mu: extend the grid
};

KappaHatGap kappa_hat_gap(std::span<const KappaHatCell> cells);

struct DerivativeCheck {
  double d_a = 0.0;           // d kappa / d a at (a*, 1), closed form
  double d2_a = 0.0;          // closed form
  double d_a_table = 0.0;     // same from the table
  double d2_a_table = 0.0;
  double a_star_d_b = 0.0;    // a* d kappa / d b, table
  double d2_b = 0.0;          // table
  double d2_ab = 0.0;         // table
  double hessian_det_min = 0.0;  // min over sampled interior points of det Hess(a kappa)
  std::vector<std::array<double, 3>> hessian_samples;  // a, b, det
  double boundary_value = 0.0;   // kappa(a, a - 1) at a = 3/2 from the table
};

/// Central differences on the table nodes around (5/2, 1) with stencil
/// `stencil` (a multiple of the grid step).
DerivativeCheck kappa_derivative_check(const EntropyTable& table, double stencil);

}  // namespace eplab
