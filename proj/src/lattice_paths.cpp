#include "eplab/lattice_paths.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "eplab/constants.hpp"
#include "eplab/error.hpp"
#include "eplab/io.hpp"
#include "eplab/parallel.hpp"
#include "eplab/walk_dp.hpp"

namespace eplab {

int ratio_times_size(double r, int L, const char* what) {
  const double v = r * static_cast<double>(L);
  const double k = std::round(v);
  require(std::abs(v - k) <= 1e-9 * std::max(1.0, std::abs(v)),
          std::string(what) + " times L must be an integer");
  require(std::abs(k) < 1e9, std::string(what) + " times L is too large");
  return static_cast<int>(k);
}

CrossingSpec CrossingSpec::from_ratios(int L, double a, double b) {
  require(L >= 1, "crossing: L must be positive");
  require(b >= 0.0, "crossing: b must be >= 0");
  require(a >= 1.0 + b - 1e-12, "crossing: (a, b) must satisfy a >= 1 + b");
  CrossingSpec s;
  s.L = L;
  s.a = a;
  s.b = b;
  s.steps = ratio_times_size(a, L, "a");
  s.span = ratio_times_size(b, L, "b");
  require(s.steps >= s.span + L, "crossing: aL must be >= (1 + b)L");
  return s;
}

InterfaceWalkSpec InterfaceWalkSpec::from_ratio(int L, double mu) {
  require(L >= 1, "interface walk: L must be positive");
  require(mu >= 1.0 - 1e-12, "interface walk: mu must be >= 1");
  InterfaceWalkSpec s;
  s.L = L;
  s.mu = mu;
  s.steps = ratio_times_size(mu, L, "mu");
  require(s.steps >= L, "interface walk: muL must be >= L");
  return s;
}

namespace {

WalkBox crossing_box(int L, int span) { return {span, -L + 1, L}; }

WalkBox return_box(int L, int max_steps) {
  const int H = std::max(0, (max_steps - L) / 2);
  return {L, -H, H};
}

double single_count(const WalkBox& box, int steps, int x, int h) {
  WalkDP dp(box, StepRule::BothEndpoints);
  const std::vector<StepWeights> w(static_cast<std::size_t>(steps));
  dp.run(steps, w, 1.0, {x, x, h}, false);
  return dp.layer(steps).log_weight(x, h);
}

std::vector<double> all_counts(const WalkBox& box, int max_steps, int x, int h) {
  std::vector<double> out(static_cast<std::size_t>(max_steps + 1), kNegInf);
  WalkDP dp(box, StepRule::BothEndpoints);
  const std::vector<StepWeights> w(static_cast<std::size_t>(max_steps));
  dp.run(max_steps, w, 1.0, {x, x, h}, false,
         [&](int i, const LayerView& v) { out[static_cast<std::size_t>(i)] = v.log_weight(x, h); });
  return out;
}

}  // namespace

double count_crossing_paths(const CrossingSpec& spec) {
  if (!spec.parity_ok()) return kNegInf;
  return single_count(crossing_box(spec.L, spec.span), spec.steps, spec.span, spec.L);
}

std::optional<std::uint64_t> count_crossing_paths_exact(const CrossingSpec& spec) {
  if (!spec.parity_ok()) return 0;
  return exact_walk_count(crossing_box(spec.L, spec.span), spec.steps, spec.span, spec.L);
}

std::vector<double> crossing_log_counts(int L, int span, int max_steps) {
  require(L >= 1 && span >= 0 && max_steps >= 0, "crossing counts: bad geometry");
  return all_counts(crossing_box(L, span), max_steps, span, L);
}

double count_interface_returns(const InterfaceWalkSpec& spec) {
  if (!spec.parity_ok()) return kNegInf;
  return single_count(return_box(spec.L, spec.steps), spec.steps, spec.L, 0);
}

std::optional<std::uint64_t> count_interface_returns_exact(const InterfaceWalkSpec& spec) {
  if (!spec.parity_ok()) return 0;
  return exact_walk_count(return_box(spec.L, spec.steps), spec.steps, spec.L, 0);
}

std::vector<double> interface_log_counts(int L, int max_steps) {
  require(L >= 1 && max_steps >= 0, "interface counts: bad geometry");
  return all_counts(return_box(L, max_steps), max_steps, L, 0);
}

// a kappa(a,1) = log 2 + (a log a - (a-2) log(a-2)) / 2 =: g(a).
namespace {
double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }
double g0(double a) { return std::log(2.0) + 0.5 * (xlogx(a) - xlogx(a - 2.0)); }
double g1(double a) { return 0.5 * std::log(a / (a - 2.0)); }
double g2(double a) { return -1.0 / (a * (a - 2.0)); }
}  // namespace

double kappa_closed_b1(double a) {
  require(a >= 2.0, "kappa(a, 1): a must be >= 2");
  return g0(a) / a;
}

double kappa_closed_b1_d1(double a) {
  require(a > 2.0, "kappa(a, 1) derivative: a must be > 2");
  return g1(a) / a - g0(a) / (a * a);
}

double kappa_closed_b1_d2(double a) {
  require(a > 2.0, "kappa(a, 1) derivative: a must be > 2");
  return g2(a) / a - 2.0 * g1(a) / (a * a) + 2.0 * g0(a) / (a * a * a);
}

EntropyEstimate extrapolate_entropy(std::span<const int> sizes, std::span<const double> values, bool strict) {
  require(sizes.size() == values.size() && sizes.size() >= 3, "entropy estimate: need >= 3 sizes");
  EntropyEstimate e;
  e.sizes.assign(sizes.begin(), sizes.end());
  e.finite_values.assign(values.begin(), values.end());
  const auto n_inf = std::count(values.begin(), values.end(), kNegInf);
  if (n_inf == static_cast<long>(values.size())) {
    e.empty = true;
    e.value = kNegInf;
    return e;
  }
  if (n_inf > 0) {
    require(!strict, "entropy estimate: empty ensemble at some but not all sizes");
    e.partial = true;
    e.value = values.back();
    require(e.value != kNegInf, "entropy estimate: largest size is empty");
    e.error_bound = std::abs(e.value);
    return e;
  }
  e.fit = extrapolate_in_size(sizes, values);
  e.value = e.fit.value;
  e.error_bound = e.fit.error_bound;
  return e;
}

EntropyEstimate kappa_estimate(double a, double b, std::span<const int> sizes) {
  std::vector<double> v;
  for (int L : sizes) {
    const auto spec = CrossingSpec::from_ratios(L, a, b);
    const double c = count_crossing_paths(spec);
    v.push_back(c == kNegInf ? kNegInf : c / spec.steps);
  }
  return extrapolate_entropy(sizes, v);
}

EntropyEstimate kappa_hat_estimate(double mu, std::span<const int> sizes) {
  std::vector<double> v;
  for (int L : sizes) {
    const auto spec = InterfaceWalkSpec::from_ratio(L, mu);
    const double c = count_interface_returns(spec);
    v.push_back(c == kNegInf ? kNegInf : c / spec.steps);
  }
  return extrapolate_entropy(sizes, v);
}

// ---------------------------------------------------------------------------

namespace {

std::size_t grid_count(double lo, double hi, double step) {
  const double n = (hi - lo) / step;
  require(n >= 0.0 && std::abs(n - std::round(n)) < 1e-9, "entropy grid: range is not a multiple of the step");
  return static_cast<std::size_t>(std::llround(n)) + 1;
}

}  // namespace

EntropyTable::EntropyTable(EntropyGrid grid, std::vector<KappaCell> kappa, std::vector<KappaHatCell> kappa_hat)
    : grid_(std::move(grid)), kappa_(std::move(kappa)), kappa_hat_(std::move(kappa_hat)) {
  if (!kappa_.empty()) {
    s_count_ = grid_count(0.0, grid_.s_max, grid_.step);
    b_count_ = grid_count(0.0, grid_.b_max, grid_.step);
    require(kappa_.size() == s_count_ * b_count_, "entropy table: kappa cell count mismatch");
  }
}

const KappaCell& EntropyTable::kappa_at(std::size_t is, std::size_t ib) const {
  require(is < s_count_ && ib < b_count_, "entropy table: index out of range");
  return kappa_[is * b_count_ + ib];
}

std::string EntropyTable::kappa_csv() const {
  CsvWriter w({"a", "b", "L", "value", "error_bound"});
  for (const auto& c : kappa_) {
    for (std::size_t k = 0; k < c.estimate.sizes.size(); ++k)
      w.row(c.a, c.b, c.estimate.sizes[k], c.estimate.finite_values[k], 0.0);
    w.row(c.a, c.b, "inf", c.estimate.value, c.estimate.error_bound);
  }
  return w.str();
}

std::string EntropyTable::kappa_hat_csv() const {
  CsvWriter w({"mu", "L", "value", "error_bound"});
  for (const auto& c : kappa_hat_) {
    for (std::size_t k = 0; k < c.estimate.sizes.size(); ++k)
      w.row(c.mu, c.estimate.sizes[k], c.estimate.finite_values[k], 0.0);
    w.row(c.mu, "inf", c.estimate.value, c.estimate.error_bound);
  }
  return w.str();
}

namespace {
nlohmann::json estimate_json(const EntropyEstimate& e) {
  nlohmann::json j;
  j["sizes"] = e.sizes;
  j["finite_values"] = e.finite_values;
  j["empty"] = e.empty;
  if (!e.empty) {
    j["value"] = e.value;
    j["error_bound"] = e.error_bound;
    j["fit_residual"] = e.fit.fit_residual;
    j["last_increment"] = e.fit.last_increment;
    j["coefficients"] = e.fit.coefficients;
  }
  return j;
}
}  // namespace

std::string EntropyTable::to_json() const {
  nlohmann::json j;
  j["constants"] = {{"varpi", kVarpi}, {"varsigma", kVarsigma}, {"a_star", kAStar}};
  j["grid"] = {{"step", grid_.step},     {"s_max", grid_.s_max}, {"b_max", grid_.b_max},
               {"mu_max", grid_.mu_max}, {"sizes", grid_.sizes}, {"mu_sizes", grid_.mu_sizes}};
  j["extrapolation_model"] = "c0 + c1 ln(L)/L + c2/L";
  auto& k = j["kappa"] = nlohmann::json::array();
  for (const auto& c : kappa_) {
    auto e = estimate_json(c.estimate);
    e["a"] = c.a;
    e["b"] = c.b;
    k.push_back(std::move(e));
  }
  auto& kh = j["kappa_hat"] = nlohmann::json::array();
  for (const auto& c : kappa_hat_) {
    auto e = estimate_json(c.estimate);
    e["mu"] = c.mu;
    kh.push_back(std::move(e));
  }
  return j.dump(1) + "\n";
}

EntropyTable build_entropy_table(const EntropyGrid& grid, int threads) {
  require(grid.step > 0.0, "entropy grid: step must be positive");
  std::vector<KappaCell> kappa;
  std::vector<KappaHatCell> kappa_hat;

  if (grid.with_kappa) {
    require(grid.sizes.size() >= 3, "entropy grid: need >= 3 sizes");
    const std::size_t ns = grid_count(0.0, grid.s_max, grid.step);
    const std::size_t nb = grid_count(0.0, grid.b_max, grid.step);
    const std::size_t nl = grid.sizes.size();
    // One pass per (b row, size) yields every s on that row.
    auto rows = parallel_map(nb * nl, threads, [&](std::size_t t) {
      const std::size_t ib = t / nl;
      const int L = grid.sizes[t % nl];
      const double b = grid.step * static_cast<double>(ib);
      const int span = ratio_times_size(b, L, "b");
      const int max_steps = ratio_times_size(grid.s_max + 1.0 + b, L, "a");
      return crossing_log_counts(L, span, max_steps);
    });
    kappa.resize(ns * nb);
    for (std::size_t ib = 0; ib < nb; ++ib) {
      const double b = grid.step * static_cast<double>(ib);
      for (std::size_t is = 0; is < ns; ++is) {
        const double a = grid.step * static_cast<double>(is) + 1.0 + b;
        std::vector<double> v(nl);
        for (std::size_t k = 0; k < nl; ++k) {
          const int L = grid.sizes[k];
          const auto spec = CrossingSpec::from_ratios(L, a, b);
          require(spec.parity_ok() || ib == 0, "entropy grid: sizes break parity at some grid point");
          const double c = rows[ib * nl + k][static_cast<std::size_t>(spec.steps)];
          v[k] = c == kNegInf ? kNegInf : c / spec.steps;
        }
        kappa[is * nb + ib] = {a, b, extrapolate_entropy(grid.sizes, v, false)};
      }
    }
  }

  if (grid.with_kappa_hat) {
    require(grid.mu_sizes.size() >= 3, "entropy grid: need >= 3 mu sizes");
    const std::size_t nm = grid_count(1.0, grid.mu_max, grid.step);
    auto cols = parallel_map(grid.mu_sizes.size(), threads, [&](std::size_t k) {
      const int L = grid.mu_sizes[k];
      return interface_log_counts(L, ratio_times_size(grid.mu_max, L, "mu"));
    });
    for (std::size_t im = 0; im < nm; ++im) {
      const double mu = 1.0 + grid.step * static_cast<double>(im);
      std::vector<double> v;
      for (std::size_t k = 0; k < grid.mu_sizes.size(); ++k) {
        const auto spec = InterfaceWalkSpec::from_ratio(grid.mu_sizes[k], mu);
        require(spec.parity_ok(), "entropy grid: mu sizes break parity at some grid point");
        v.push_back(cols[k][static_cast<std::size_t>(spec.steps)] / spec.steps);
      }
      kappa_hat.push_back({mu, extrapolate_entropy(grid.mu_sizes, v)});
    }
  }
  return EntropyTable(grid, std::move(kappa), std::move(kappa_hat));
}

// ---------------------------------------------------------------------------

KappaSurface::KappaSurface(const EntropyTable& table) {
  if (table.kappa().empty()) throw DependencyError("kappa surface: table has no kappa cells");
  const auto& g = table.grid();
  const std::size_t ns = table.s_count(), nb = table.b_count();
  s_max_ = g.s_max;
  b_max_ = g.b_max;
  std::vector<double> v(ns * nb);
  for (std::size_t is = 0; is < ns; ++is)
    for (std::size_t ib = 0; ib < nb; ++ib) {
      const auto& c = table.kappa_at(is, ib);
      v[is * nb + ib] = ib == 0 || c.estimate.empty ? 0.0 : c.estimate.value;
    }
  // Pin b = 1 to the closed form; the correction fades linearly towards b = 0.
  const double ib1 = 1.0 / g.step;
  if (g.b_max >= 1.0 && std::abs(ib1 - std::round(ib1)) < 1e-9) {
    const auto j1 = static_cast<std::size_t>(std::llround(ib1));
    for (std::size_t is = 0; is < ns; ++is) {
      const double corr = kappa_closed_b1(g.step * static_cast<double>(is) + 2.0) - v[is * nb + j1];
      for (std::size_t ib = 0; ib < nb; ++ib) v[is * nb + ib] += corr * g.step * static_cast<double>(ib);
    }
  }
  spline_ = BicubicSpline(0.0, g.step, ns, 0.0, g.step, nb, std::move(v));
}

bool KappaSurface::contains(double a, double b) const {
  const double s = a - 1.0 - b;
  return s >= -1e-12 && s <= s_max_ + 1e-12 && b >= -1e-12 && b <= b_max_ + 1e-12;
}

double KappaSurface::eval(double a, double b, int da, int db) const {
  require(!spline_.empty(), "kappa surface: empty");
  require(da >= 0 && db >= 0 && da + db <= 2, "kappa surface: derivative order must be <= 2");
  const double s = a - 1.0 - b;
  auto f = [&](int ds, int dbb) { return spline_.eval(s, b, ds, dbb); };
  if (da == 0 && db == 0) return f(0, 0);
  if (da == 1 && db == 0) return f(1, 0);
  if (da == 0 && db == 1) return f(0, 1) - f(1, 0);
  if (da == 2) return f(2, 0);
  if (da == 1 && db == 1) return f(1, 1) - f(2, 0);
  return f(0, 2) - 2.0 * f(1, 1) + f(2, 0);
}

KappaHatCurve::KappaHatCurve(const EntropyTable& table) {
  if (table.kappa_hat().size() < 2) throw DependencyError("kappa_hat curve: table has too few cells");
  std::vector<double> x, y;
  for (const auto& c : table.kappa_hat()) {
    x.push_back(c.mu);
    y.push_back(c.mu * c.estimate.value);
  }
  spline_ = CubicSpline(std::move(x), std::move(y));
}

double KappaHatCurve::operator()(double mu) const {
  require(!spline_.empty(), "kappa_hat curve: empty");
  return spline_(mu) / mu;
}

KappaHatGap kappa_hat_gap(std::span<const KappaHatCell> cells) {
  require(!cells.empty(), "kappa_hat gap: no cells");
  std::size_t best = 0;
  auto obj = [&](std::size_t i) { return cells[i].mu * (cells[i].estimate.value - kVarpi); };
  for (std::size_t i = 1; i < cells.size(); ++i)
    if (obj(i) > obj(best)) best = i;
  KappaHatGap g;
  g.mu_at_max = cells[best].mu;
  g.value = obj(best);
  g.boundary = cells.size() > 1 && best + 1 == cells.size();
  double err = cells[best].estimate.error_bound;
  if (best > 0 && best + 1 < cells.size()) {
    const auto v = parabolic_vertex(cells[best - 1].mu, obj(best - 1), cells[best].mu, obj(best),
                                    cells[best + 1].mu, obj(best + 1));
    g.mu_at_max = v[0];
    g.value = v[1];
    err = std::max({err, cells[best - 1].estimate.error_bound, cells[best + 1].estimate.error_bound});
  }
  g.error_bound = g.mu_at_max * err;
  return g;
}

DerivativeCheck kappa_derivative_check(const EntropyTable& table, double stencil) {
  if (table.kappa().empty()) throw DependencyError("derivative check: table has no kappa cells");
  const auto& g = table.grid();
  const double k = stencil / g.step;
  require(stencil > 0.0 && std::abs(k - std::round(k)) < 1e-9,
          "derivative check: stencil must be a multiple of the grid step");
  auto node = [&](double a, double b) {
    const double s = a - 1.0 - b;
    const double is = s / g.step, ib = b / g.step;
    if (is < -1e-9 || ib < -1e-9 || std::abs(is - std::round(is)) > 1e-9 || std::abs(ib - std::round(ib)) > 1e-9 ||
        std::llround(is) >= static_cast<long long>(table.s_count()) ||
        std::llround(ib) >= static_cast<long long>(table.b_count()))
      throw ComputationError("derivative check: grid too coarse or too small for the requested stencil");
    const auto& c = table.kappa_at(static_cast<std::size_t>(std::llround(is)), static_cast<std::size_t>(std::llround(ib)));
    if (c.estimate.empty) throw ComputationError("derivative check: empty ensemble inside the stencil");
    return c.estimate.value;
  };
  const double a = kAStar, b = 1.0, h = stencil;
  DerivativeCheck r;
  r.d_a = kappa_closed_b1_d1(a);
  r.d2_a = kappa_closed_b1_d2(a);
  r.d_a_table = (node(a + h, b) - node(a - h, b)) / (2 * h);
  r.d2_a_table = (node(a + h, b) - 2 * node(a, b) + node(a - h, b)) / (h * h);
  r.a_star_d_b = a * (node(a, b + h) - node(a, b - h)) / (2 * h);
  r.d2_b = (node(a, b + h) - 2 * node(a, b) + node(a, b - h)) / (h * h);
  r.d2_ab = (node(a + h, b + h) - node(a + h, b - h) - node(a - h, b + h) + node(a - h, b - h)) / (4 * h * h);

  const KappaSurface surf(table);
  const std::array<std::array<double, 2>, 6> pts{{{3.0, 0.5}, {2.5, 1.0}, {4.0, 0.75}, {3.5, 1.1}, {2.2, 0.8}, {3.0, 1.0}}};
  r.hessian_det_min = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    if (!surf.contains(p[0], p[1])) continue;
    const double x = p[0], y = p[1];
    const double gaa = 2 * surf.eval(x, y, 1, 0) + x * surf.eval(x, y, 2, 0);
    const double gbb = x * surf.eval(x, y, 0, 2);
    const double gab = surf.eval(x, y, 0, 1) + x * surf.eval(x, y, 1, 1);
    const double det = gaa * gbb - gab * gab;
    r.hessian_samples.push_back({x, y, det});
    r.hessian_det_min = std::min(r.hessian_det_min, det);
  }
  r.boundary_value = node(1.5, 0.5);
  return r;
}

}  // namespace eplab
