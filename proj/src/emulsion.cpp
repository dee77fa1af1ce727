#include "eplab/emulsion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "eplab/constants.hpp"
#include "eplab/error.hpp"
#include "eplab/io.hpp"
#include "eplab/parallel.hpp"

namespace eplab {

bool FrequencyMatrix::valid(double tol) const {
  return aa >= -tol && ab >= -tol && ba >= -tol && bb >= -tol && std::abs(aa + ab + ba + bb - 1.0) <= tol;
}

FrequencyMatrix FrequencyMatrix::single_row(double gamma) {
  require(gamma >= 0.0 && gamma <= 1.0, "frequency matrix: gamma must lie in [0, 1]");
  return {1.0 - gamma, gamma, 0.0, 0.0};
}

double V(const FrequencyMatrix& rho, const StepsPerBlock& a, const PsiValues& psi) {
  require(rho.valid(1e-9), "V: frequencies must be >= 0 and sum to 1");
  require(a.valid(), "V: every a_kl must be >= 2");
  const double num = rho.aa * a.aa * psi.aa + rho.ab * a.ab * psi.ab + rho.ba * a.ba * psi.ba + rho.bb * a.bb * psi.bb;
  const double den = rho.aa * a.aa + rho.ab * a.ab + rho.ba * a.ba + rho.bb * a.bb;
  return num / den;
}

int max_ab_crossings(const BlockField& field, NeighbourRule rule) {
  const int N = field.N;
  require(N >= 1, "gamma: empty block field");
  auto wrap = [N](int j) { return ((j % N) + N) % N; };
  std::vector<int> best(static_cast<std::size_t>(N), 0), next(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    std::fill(next.begin(), next.end(), -1);
    for (int c = 0; c < N; ++c) {
      const int v = best[static_cast<std::size_t>(c)];
      if (v < 0) continue;
      // up-right across block (i, c) to corner c + 1
      if (field.at(i, c) == Label::A) {
        const int nb = rule == NeighbourRule::Standard ? c - 1 : c + 1;
        auto& t = next[static_cast<std::size_t>(wrap(c + 1))];
        t = std::max(t, v + (field.at(i, nb) == Label::B ? 1 : 0));
      }
      // down-right across block (i, c - 1) to corner c - 1
      if (field.at(i, c - 1) == Label::A) {
        const int nb = rule == NeighbourRule::Standard ? c : c - 2;
        auto& t = next[static_cast<std::size_t>(wrap(c - 1))];
        t = std::max(t, v + (field.at(i, nb) == Label::B ? 1 : 0));
      }
    }
    best.swap(next);
  }
  return *std::max_element(best.begin(), best.end());
}

GammaStarEstimate gamma_star(double p, std::span<const int> sizes, int replicas, const SeedSpec& seed, int threads,
                             NeighbourRule rule) {
  require(p > 0.0 && p <= 1.0, "gamma*: p must lie in (0, 1]");
  require(!sizes.empty() && replicas >= 2, "gamma*: need sizes and at least 2 replicas");
  GammaStarEstimate g;
  g.p = p;
  g.sizes.assign(sizes.begin(), sizes.end());
  const std::size_t m = static_cast<std::size_t>(replicas);
  const auto flat = parallel_map(sizes.size() * m, threads, [&](std::size_t t) {
    const int N = sizes[t / m];
    const auto field = sample_blocks(N, p, seed.child({streams::kBlocks, static_cast<std::uint64_t>(N), t % m}));
    const int best = max_ab_crossings(field, rule);
    return best < 0 ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(best) / N;
  });
  std::vector<double> x, y, se;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    std::vector<double> row(flat.begin() + static_cast<std::ptrdiff_t>(k * m),
                            flat.begin() + static_cast<std::ptrdiff_t>((k + 1) * m));
    std::vector<double> ok;
    for (double v : row)
      if (!std::isnan(v)) ok.push_back(v);
    g.infeasible.push_back(static_cast<int>(row.size() - ok.size()));
    g.gamma_hat.push_back(std::move(row));
    if (ok.size() < 2) throw ComputationError("gamma*: fewer than two feasible replicas at N = " +
                                              std::to_string(sizes[k]));
    const auto s = sample_stats(ok);
    g.per_size.push_back(s);
    x.push_back(1.0 / sizes[k]);
    y.push_back(s.mean);
    se.push_back(s.stderr_);
  }
  if (sizes.size() == 1) {
    g.value = y[0];
    g.stderr_ = se[0];
  } else {
    // least squares c0 + c1 x: c0 = sum w_i y_i
    const double n = static_cast<double>(x.size());
    double sx = 0, sxx = 0;
    for (double v : x) {
      sx += v;
      sxx += v * v;
    }
    const double det = n * sxx - sx * sx;
    require(det > 0.0, "gamma*: sizes must be distinct");
    double var = 0.0;
    g.value = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double w = (sxx - sx * x[i]) / det;
      g.value += w * y[i];
      var += w * w * se[i] * se[i];
    }
    g.stderr_ = std::sqrt(var);
  }
  g.ci_lo = std::clamp(g.value - 3.0 * g.stderr_, 0.0, 1.0);
  g.ci_hi = std::clamp(g.value + 3.0 * g.stderr_, 0.0, 1.0);
  return g;
}

namespace {

// max_x x (psi(x) - v) over the tabulated range capped at a0
std::array<double, 2> best_x(const PsiCurve& psi, double v, double a0) {
  const auto& pts = psi.points();
  const double hi = std::min(a0, psi.a_max());
  std::size_t best = 0;
  double best_v = kNegInf;
  for (std::size_t i = 0; i < pts.size() && pts[i].a <= hi + 1e-12; ++i) {
    const double g = pts[i].a * (pts[i].value - v);
    if (g > best_v) {
      best_v = g;
      best = i;
    }
  }
  const double step = pts.size() > 1 ? pts[1].a - pts[0].a : 0.0;
  const double lo_a = std::max(2.0, pts[best].a - step), hi_a = std::min(hi, pts[best].a + step);
  if (hi_a <= lo_a) return {pts[best].a, best_v};
  const auto r = golden_maximize([&](double a) { return a * (psi(a) - v); }, lo_a, hi_a, 1e-7);
  return r[1] > best_v ? r : std::array<double, 2>{pts[best].a, best_v};
}

// max_y y (kappa(y,1) - v) in closed form: d[y kappa(y,1)]/dy = v at y = 2 e^{2v} / (e^{2v} - 1)
std::array<double, 2> best_y(double v, double a0) {
  double y = 2.0;
  if (v > 0.0) y = std::clamp(2.0 / (1.0 - std::exp(-2.0 * v)), 2.0, a0);
  else y = a0;
  return {y, y * (kappa_closed_b1(y) - v)};
}

}  // namespace

InnerOptimum inner_optimum(double gamma, const PsiCurve& psi, double a0) {
  require(gamma >= 0.0 && gamma <= 1.0, "inner optimum: gamma must lie in [0, 1]");
  auto G = [&](double v) { return gamma * best_x(psi, v, a0)[1] + (1.0 - gamma) * best_y(v, a0)[1]; };
  double top = kVarpi;
  for (const auto& pt : psi.points()) top = std::max(top, pt.value);
  double lo = -1.0, hi = top + 1e-9;
  require(G(lo) >= 0.0, "inner optimum: lower bracket failed");
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (G(mid) >= 0.0) lo = mid;
    else hi = mid;
  }
  InnerOptimum r;
  r.value = lo;
  r.x = best_x(psi, lo, a0)[0];
  r.y = best_y(lo, a0)[0];
  return r;
}

EmulsionFreeEnergy free_energy(const InteractionParams& p, double density, const PsiCurve& psi,
                               const GammaStarEstimate& gamma, const FreeEnergyOptions& opt,
                               const std::function<double(double)>& phi_stderr) {
  require(density >= kPercolationThreshold && density <= 1.0,
          "free energy: p must be at least the percolation threshold " + format_number(kPercolationThreshold));
  require(opt.gamma_points >= 2, "free energy: need at least two gamma points");
  EmulsionFreeEnergy f;
  f.params = p;
  f.p = density;
  const double gmax = std::clamp(gamma.value, 0.0, 1.0);
  InnerOptimum best{kNegInf, 2.5, 2.5};
  double best_gamma = 0.0;
  for (int k = 0; k < opt.gamma_points; ++k) {
    const double g = gmax * k / (opt.gamma_points - 1);
    const auto r = inner_optimum(g, psi, opt.a0);
    f.gamma_grid.push_back(g);
    f.v_of_gamma.push_back(r.value);
    // ties within tolerance go to the larger gamma
    if (r.value >= best.value - opt.tolerance) {
      const double top = std::max(best.value, r.value);
      best = r;
      best.value = top;
      best_gamma = g;
    }
  }
  for (std::size_t k = 1; k < f.v_of_gamma.size(); ++k)
    if (f.v_of_gamma[k] < f.v_of_gamma[k - 1] - 1e-9) f.gamma_monotone = false;
  f.gamma = best_gamma;
  f.x = best.x;
  f.y = best.y;
  f.localized = best.value > kVarpi + opt.tolerance;
  // Excess within the optimiser tolerance is numerical: report the baseline.
  f.shifted = f.localized ? best.value : kVarpi;
  const double shift = p.convention == Convention::Shifted ? 0.0 : 0.5 * p.alpha;
  f.value = f.shifted + shift;
  f.baseline = kVarpi + shift;
  if (f.localized) {
    const double den = f.gamma * f.x + (1.0 - f.gamma) * f.y;
    const auto& pt = psi.nearest(f.x);
    double var = 0.0;
    if (phi_stderr && pt.interface_branch) {
      const double s = f.gamma * pt.c / den * phi_stderr(pt.mu);
      var += s * s;
    }
    if (f.gamma_grid.size() >= 2 && gmax > 0.0) {
      const std::size_t n = f.v_of_gamma.size();
      const double slope = (f.v_of_gamma[n - 1] - f.v_of_gamma[n - 2]) / (f.gamma_grid[n - 1] - f.gamma_grid[n - 2]);
      var += slope * slope * gamma.stderr_ * gamma.stderr_;
    }
    f.stderr_ = std::sqrt(var);
  }
  return f;
}

UniquenessDiagnostic maximiser_uniqueness(const EmulsionFreeEnergy& f, const PsiCurve& psi, int starts,
                                          const SeedSpec& seed, double tolerance, double a0) {
  require(starts >= 1, "uniqueness: need at least one start");
  const double hi = std::min(a0, psi.a_max());
  const double g = f.gamma;
  auto V_xy = [&](double x, double y) {
    const double den = g * x + (1.0 - g) * y;
    return (g * x * psi(x) + (1.0 - g) * y * kappa_closed_b1(y)) / den;
  };
  Rng rng(seed.child(streams::kSampling));
  UniquenessDiagnostic d;
  for (int s = 0; s < starts; ++s) {
    const double x0 = 2.0 + (hi - 2.0) * rng.uniform(), y0 = 2.0 + (hi - 2.0) * rng.uniform();
    const auto r = pattern_search_maximize(V_xy, x0, y0, 0.5, 2.0, hi, 2.0, hi, 1e-7);
    d.optima.push_back({r.x, r.y});
  }
  for (const auto& a : d.optima)
    for (const auto& b : d.optima) {
      // with gamma = 0 the objective does not depend on x
      const double dist = g > 0.0 ? std::hypot(a[0] - b[0], a[1] - b[1]) : std::abs(a[1] - b[1]);
      d.spread = std::max(d.spread, dist);
    }
  d.unique = d.spread <= tolerance;
  d.foc_x = psi.a_psi_derivative(f.x) - f.shifted;
  d.foc_y = kappa_closed_b1(f.y) + f.y * kappa_closed_b1_d1(f.y) - f.shifted;
  return d;
}

namespace {

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

enum class Dir : std::uint8_t { Free, Up, Down };

struct State {
  int x, y;
  Move last;
  int sx, sy;
  Dir dir;
  auto key() const { return std::make_tuple(x, y, static_cast<int>(last), sx, sy, static_cast<int>(dir)); }
  bool operator<(const State& o) const { return key() < o.key(); }
};

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double step_energy(Label m, Label block, const InteractionParams& p, Hamiltonian h) {
  double e = 0.0;
  if (h == Hamiltonian::Match) {
    if (m == Label::A && block == Label::A) e += p.alpha;
    if (m == Label::B && block == Label::B) e += p.beta;
  } else {
    if (m == Label::A && block == Label::B) e += p.alpha;
    if (m == Label::B && block == Label::A) e += p.beta;
  }
  if (p.convention == Convention::Shifted && m == Label::A) e -= p.alpha;
  return e;
}

}  // namespace

double emulsion_log_partition(const MonomerSequence& w, const BlockField& field, int n, int L,
                              const InteractionParams& p, Hamiltonian h) {
  require(L >= 1 && n >= 0, "emulsion: bad geometry");
  require(static_cast<std::size_t>(n) <= w.size(), "emulsion: monomer sequence shorter than the path");
  std::map<State, double> cur{{State{0, 0, Move::Right, 0, 0, Dir::Free}, 0.0}};
  for (int t = 0; t < n; ++t) {
    std::map<State, double> next;
    const Label mono = w[static_cast<std::size_t>(t)];
    for (const auto& [s, lw] : cur) {
      for (Move mv : {Move::Right, Move::Up, Move::Down}) {
        if ((mv == Move::Up && s.last == Move::Down) || (mv == Move::Down && s.last == Move::Up)) continue;
        const int nx = s.x + (mv == Move::Right ? 1 : 0);
        const int ny = s.y + (mv == Move::Up ? 1 : mv == Move::Down ? -1 : 0);
        for (Dir d : {Dir::Up, Dir::Down}) {
          if (s.dir != Dir::Free && s.dir != d) continue;
          if (nx > s.sx + L) continue;
          if (d == Dir::Up && (ny <= s.sy - L || ny > s.sy + L)) continue;
          if (d == Dir::Down && (ny < s.sy - L || ny >= s.sy + L)) continue;
          const bool lower = s.y <= s.sy && ny <= s.sy;
          const int bi = floor_div(s.sx, L), bj = floor_div(s.sy, L);
          const Label block = field.at(bi, lower ? bj - 1 : bj);
          const double e = step_energy(mono, block, p, h);
          const int ey = d == Dir::Up ? s.sy + L : s.sy - L;
          State ns = (nx == s.sx + L && ny == ey) ? State{nx, ny, mv, nx, ny, Dir::Free}
                                                  : State{nx, ny, mv, s.sx, s.sy, d};
          auto [it, inserted] = next.try_emplace(ns, lw + e);
          if (!inserted) it->second = log_add(it->second, lw + e);
        }
      }
    }
    cur.swap(next);
  }
  double total = kNegInf;
  for (const auto& [s, lw] : cur)
    if (s.dir == Dir::Free) total = log_add(total, lw);
  return total;
}

SymmetryReport finite_size_symmetry_check(const MonomerSequence& w, const BlockField& field, int n, int L,
                                          const InteractionParams& p) {
  const InteractionParams u{p.alpha, p.beta, Convention::Unshifted};
  SymmetryReport r;
  r.swap_lhs = emulsion_log_partition(w, field, n, L, u);
  r.swap_rhs = emulsion_log_partition(w.swapped(), field.swapped(), n, L, {p.beta, p.alpha, Convention::Unshifted});
  r.mismatch_lhs = r.swap_lhs;
  double linear = 0.0;
  for (int i = 0; i < n; ++i) linear += w[static_cast<std::size_t>(i)] == Label::A ? p.alpha : p.beta;
  r.mismatch_rhs =
      linear + emulsion_log_partition(w, field, n, L, {-p.alpha, -p.beta, Convention::Unshifted}, Hamiltonian::Mismatch);
  r.empty = r.swap_lhs == kNegInf;
  if (r.empty) {
    r.ok = r.swap_rhs == kNegInf && r.mismatch_rhs == kNegInf;
    return r;
  }
  r.swap_error = std::abs(r.swap_lhs - r.swap_rhs);
  r.mismatch_error = std::abs(r.mismatch_lhs - r.mismatch_rhs);
  r.ok = r.swap_error <= 1e-10 && r.mismatch_error <= 1e-10;
  return r;
}

}  // namespace eplab
