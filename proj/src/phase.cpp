#include "eplab/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eplab/constants.hpp"
#include "eplab/error.hpp"
#include "eplab/io.hpp"

namespace eplab {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Localized: return "localized";
    case Verdict::Delocalized: return "delocalized";
    case Verdict::Undecided: return "undecided";
  }
  return "undecided";
}

namespace {

struct Adjusted {
  double mean = 0.0, stderr_ = 0.0;
};

// Regression-adjusted mean of y with control x, E[x] = 0.
Adjusted control_adjusted(const std::vector<double>& y, const std::vector<double>& x, bool use_control) {
  const std::size_t m = y.size();
  const auto sy = sample_stats(y);
  if (!use_control || m < 3) return {sy.mean, sy.stderr_};
  const auto sx = sample_stats(x);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    sxx += (x[r] - sx.mean) * (x[r] - sx.mean);
    sxy += (x[r] - sx.mean) * (y[r] - sy.mean);
  }
  if (sxx <= 0.0) return {sy.mean, sy.stderr_};
  const double c = sxy / sxx;
  double rss = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    const double e = (y[r] - sy.mean) - c * (x[r] - sx.mean);
    rss += e * e;
  }
  const double md = static_cast<double>(m);
  return {sy.mean - c * sx.mean, std::sqrt(rss / (md - 2.0) / md)};
}

}  // namespace

LocalizationVerdict localization_from_curve(const PhiCurve& curve, const SeedSpec& seed, bool control_variate) {
  if (curve.empty()) throw DependencyError("localization: empty phi curve");
  const auto& mu = curve.mu();
  const auto& vals = curve.values();
  const int L = curve.spec().L;
  const std::size_t m = vals.size();
  const std::size_t n_mu = mu.size();

  std::vector<std::vector<double>> fa(m);
  if (control_variate) {
    const auto max_steps = static_cast<std::size_t>(std::lround(mu.back() * L));
    for (std::size_t r = 0; r < m; ++r) {
      const auto w = replica_monomers(seed, L, static_cast<int>(r), max_steps);
      fa[r].resize(n_mu);
      std::size_t count = 0, done = 0;
      for (std::size_t i = 0; i < n_mu; ++i) {
        const auto n = static_cast<std::size_t>(std::lround(mu[i] * L));
        for (; done < n; ++done) count += w[done] == Label::A ? 1 : 0;
        fa[r][i] = static_cast<double>(count) / static_cast<double>(n) - 0.5;
      }
    }
  }

  std::vector<Adjusted> adj(n_mu);
  std::vector<double> y(m), x(m, 0.0);
  for (std::size_t i = 0; i < n_mu; ++i) {
    for (std::size_t r = 0; r < m; ++r) {
      y[r] = mu[i] * (vals[r][i] - kVarpi) - kVarsigma;
      if (control_variate) x[r] = fa[r][i];
    }
    adj[i] = control_adjusted(y, x, control_variate);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < n_mu; ++i)
    if (adj[i].mean > adj[best].mean) best = i;

  LocalizationVerdict v;
  v.params = curve.params();
  v.replicas = static_cast<int>(m);
  v.L = L;
  v.mu = mu[best];
  v.value = adj[best].mean;
  v.stderr_ = adj[best].stderr_;
  if (best > 0 && best + 1 < n_mu) {
    const auto vx = parabolic_vertex(mu[best - 1], adj[best - 1].mean, mu[best], adj[best].mean, mu[best + 1],
                                     adj[best + 1].mean);
    v.mu = vx[0];
    v.value = std::max(vx[1], adj[best].mean);
  }
  v.ci_lo = v.value - 3.0 * v.stderr_;
  v.ci_hi = v.value + 3.0 * v.stderr_;
  v.boundary = best + 1 == n_mu;
  v.tail_ok = curve.mean().back() < kVarpi / 2.0;
  if (v.ci_lo > 0.0)
    v.verdict = Verdict::Localized;
  else if (v.ci_hi < 0.0 && !v.boundary)
    v.verdict = Verdict::Delocalized;
  else
    v.verdict = Verdict::Undecided;
  return v;
}

LocalizationVerdict localization_score(const InteractionParams& p, const CriterionSpec& spec, const SeedSpec& seed,
                                       int threads) {
  require(p.in_cone(), "localization: need alpha >= |beta|");
  require(spec.replicas >= 2, "localization: need >= 2 replicas");
  const auto curve = PhiCurve::compute(p.with(Convention::Shifted), {spec.L, spec.mu_max, spec.replicas}, seed,
                                       threads);
  return localization_from_curve(curve, seed, spec.control_variate);
}

CriticalCurveSample critical_beta(double alpha, const CriticalSpec& spec, const SeedSpec& seed, int threads) {
  require(alpha >= 0.0, "critical_beta: need alpha >= 0");
  require(spec.tolerance > 0.0, "critical_beta: need tolerance > 0");
  CriticalCurveSample s;
  s.alpha = alpha;

  // Verdict at beta with the replica budget doubled while undecided; a
  // supremum at the end of the mu range widens the range instead.
  auto probe = [&](double beta) {
    CriterionSpec c = spec.criterion;
    LocalizationVerdict v;
    for (int d = 0;;) {
      v = localization_score({alpha, beta, Convention::Shifted}, c, seed, threads);
      ++s.probes;
      s.max_replicas = std::max(s.max_replicas, c.replicas);
      if (v.verdict != Verdict::Undecided) break;
      if (v.boundary && c.mu_max < spec.mu_limit) {
        c.mu_max = std::min(2.0 * c.mu_max, spec.mu_limit);
        continue;
      }
      if (v.boundary || d >= spec.max_doublings) break;
      c.replicas *= 2;
      ++d;
    }
    return v;
  };

  const auto top = probe(alpha);
  if (top.verdict != Verdict::Localized) {
    s.diagonal = true;
    s.flagged = top.verdict == Verdict::Undecided;
    s.beta_c = s.lo = s.hi = alpha;
    s.verdict_lo = s.verdict_hi = top.verdict;
    return s;
  }
  double lo = 0.0, hi = alpha;
  const auto bottom = probe(lo);
  if (bottom.verdict != Verdict::Delocalized) {
    s.flagged = true;
    s.beta_c = s.lo = s.hi = 0.0;
    s.verdict_lo = bottom.verdict;
    return s;
  }
  while (hi - lo > spec.tolerance) {
    const double mid = 0.5 * (lo + hi);
    const auto v = probe(mid);
    if (v.verdict == Verdict::Localized) {
      hi = mid;
    } else if (v.verdict == Verdict::Delocalized) {
      lo = mid;
    } else {
      s.flagged = true;
      break;
    }
  }
  s.lo = lo;
  s.hi = hi;
  s.beta_c = 0.5 * (lo + hi);
  return s;
}

bool CurveTrace::separated(double a1, double a2) const {
  const CriticalCurveSample *s1 = nullptr, *s2 = nullptr;
  for (const auto& s : samples) {
    if (std::abs(s.alpha - a1) < 1e-12) s1 = &s;
    if (std::abs(s.alpha - a2) < 1e-12) s2 = &s;
  }
  if (!s1 || !s2) throw InvalidArgument("separated: alpha not on the traced grid");
  return s1->ci_hi() < s2->ci_lo();
}

CurveTrace trace_curve(const std::vector<double>& alphas, const CriticalSpec& spec, const SeedSpec& seed,
                       int threads) {
  require(!alphas.empty(), "trace_curve: empty alpha grid");
  require(std::is_sorted(alphas.begin(), alphas.end()), "trace_curve: alpha grid must be increasing");
  CurveTrace t;
  // Common disorder across alpha: differences between points are not
  // swamped by replica noise.
  for (double a : alphas) t.samples.push_back(critical_beta(a, spec, seed, threads));
  const auto& s = t.samples;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!s[k].diagonal) break;
    t.alpha_star_found = true;
    t.alpha_star_lo = s[k].alpha;
    t.alpha_star_hi = k + 1 < s.size() ? s[k + 1].alpha : std::numeric_limits<double>::infinity();
  }
  t.beta_star = s.back().beta_c;
  for (std::size_t k = 0; k + 1 < s.size(); ++k)
    if (s[k + 1].ci_hi() < s[k].ci_lo()) t.monotone = false;
  for (std::size_t k = 1; k + 1 < s.size(); ++k) {
    const double h1 = s[k].alpha - s[k - 1].alpha, h2 = s[k + 1].alpha - s[k].alpha;
    if (std::abs(h1 - h2) > 1e-9) continue;
    if (s[k].ci_hi() < 0.5 * (s[k - 1].ci_lo() + s[k + 1].ci_lo())) t.concave = false;
  }
  t.alpha_star_below_beta_star = t.alpha_star_found && t.alpha_star_lo < t.beta_star;
  return t;
}

FreeEnergyContext make_context(double p, const SeedSpec& seed, int threads) {
  require(p >= kPercolationThreshold && p <= 1.0, "context: need p in [" + format_number(kPercolationThreshold) +
                                                      ", 1]");
  FreeEnergyContext ctx;
  EntropyGrid g;
  g.with_kappa_hat = false;
  ctx.kappa = KappaSurface(build_entropy_table(g, threads));
  const int sizes[3] = {16, 32, 64};
  ctx.gamma = gamma_star(p, sizes, 32, seed, threads);
  ctx.seed = seed;
  ctx.p = p;
  ctx.threads = threads;
  return ctx;
}

namespace {

EmulsionFreeEnergy direct_point(const FreeEnergyContext& ctx, const InteractionParams& q) {
  const auto sq = q.with(Convention::Shifted);
  const auto curve = PhiCurve::compute(sq, ctx.phi, ctx.seed, ctx.threads);
  const auto phi = phi_function(curve);
  const auto psi = PsiCurve::compute(sq, phi, ctx.kappa, 12.0, ctx.psi_step);
  return free_energy(q, ctx.p, psi, ctx.gamma, {}, phi.stderr_);
}

}  // namespace

EmulsionFreeEnergy emulsion_point(const FreeEnergyContext& ctx, const InteractionParams& p) {
  if (p.beta <= p.alpha) return direct_point(ctx, p);
  const InteractionParams q{p.beta, p.alpha, Convention::Unshifted};
  require(q.in_cone(), "emulsion_point: need |alpha| <= beta for the exchanged point");
  auto f = direct_point(ctx, q);
  const double unshifted = f.value;
  f.params = p;
  f.shifted = unshifted - 0.5 * p.alpha;
  f.value = p.convention == Convention::Unshifted ? unshifted : f.shifted;
  f.baseline = p.convention == Convention::Unshifted ? kVarpi + 0.5 * p.alpha : kVarpi;
  return f;
}

double psi_excess(const FreeEnergyContext& ctx, double alpha, double beta) {
  const InteractionParams p{alpha, beta, Convention::Shifted};
  const auto curve = PhiCurve::compute(p, ctx.phi, ctx.seed, ctx.threads);
  const auto phi = phi_function(curve);
  return psi_sup_and_maximisers(p, 0.0, phi, ctx.kappa).value - kVarpi;
}

TransitionScaling transition_scaling(const FreeEnergyContext& ctx, double alpha, const std::vector<double>& deltas,
                                     double beta_lo, double beta_hi, double beta_tolerance) {
  require(!deltas.empty(), "scaling: empty delta ladder");
  require(beta_lo < beta_hi, "scaling: need beta_lo < beta_hi");
  for (double d : deltas) require(d > 0.0, "scaling: deltas must be positive");
  double lo = beta_lo, hi = beta_hi;
  if (psi_excess(ctx, alpha, lo) > 0.0)
    throw ComputationError("scaling: free energy already above varpi at beta_lo = " + format_number(lo));
  if (psi_excess(ctx, alpha, hi) <= 0.0)
    throw ComputationError("scaling: no threshold below beta_hi = " + format_number(hi) +
                           " (alpha inside the diagonal segment?)");
  // With common disorder the excess is a deterministic function of beta.
  while (hi - lo > beta_tolerance) {
    const double mid = 0.5 * (lo + hi);
    (psi_excess(ctx, alpha, mid) > 0.0 ? hi : lo) = mid;
  }
  TransitionScaling t;
  t.alpha = alpha;
  t.beta_c = lo;
  t.deltas = deltas;
  const double f0 = emulsion_point(ctx, {alpha, lo, Convention::Shifted}).shifted;
  std::vector<double> lx, ly;
  t.ratio_lo = std::numeric_limits<double>::infinity();
  t.ratio_hi = -std::numeric_limits<double>::infinity();
  for (double d : deltas) {
    const auto f = emulsion_point(ctx, {alpha, lo + d, Convention::Shifted});
    const double T = f.shifted - f0;
    t.T.push_back(T);
    t.T_stderr.push_back(f.stderr_);
    t.ratio.push_back(T / (d * d));
    t.ratio_lo = std::min(t.ratio_lo, T / (d * d));
    t.ratio_hi = std::max(t.ratio_hi, T / (d * d));
    if (T < -3.0 * f.stderr_) t.positive = false;
    if (T > 0.0) {
      lx.push_back(std::log(d));
      ly.push_back(std::log(T));
    }
  }
  if (t.ratio_lo <= 0.0) t.positive = false;
  if (lx.size() >= 2) {
    const auto fit = fit_line(lx, ly);
    t.slope = fit.slope;
    t.slope_stderr = fit.slope_stderr;
  } else {
    t.positive = false;
  }
  return t;
}

DiagonalContrast diagonal_contrast(const FreeEnergyContext& ctx, double alpha, const std::vector<double>& deltas) {
  require(!deltas.empty(), "diagonal: empty delta ladder");
  DiagonalContrast c;
  c.alpha = alpha;
  c.deltas = deltas;
  const double f0 = emulsion_point(ctx, {alpha, alpha, Convention::Unshifted}).value;
  std::vector<double> lx, ly;
  for (double d : deltas) {
    require(d > 0.0, "diagonal: deltas must be positive");
    const auto f = emulsion_point(ctx, {alpha, alpha + d, Convention::Unshifted});
    const double D = std::abs(f.value - f0);
    c.D.push_back(D);
    c.D_stderr.push_back(f.stderr_);
    if (D > 0.0) {
      lx.push_back(std::log(d));
      ly.push_back(std::log(D));
    }
  }
  if (lx.size() >= 2) {
    const auto fit = fit_line(lx, ly);
    c.slope = fit.slope;
    c.slope_stderr = fit.slope_stderr;
  }
  return c;
}

namespace {

std::vector<double> axis(double a0, double a1, double h) {
  require(h > 0.0 && a1 >= a0, "smoothness: need h > 0 and a nonempty range");
  std::vector<double> v;
  const int n = static_cast<int>(std::floor((a1 - a0) / h + 1e-9));
  for (int i = 0; i <= n; ++i) v.push_back(a0 + i * h);
  return v;
}

using Grid = std::vector<std::vector<double>>;

// Visits every row and column of g as a line of values with its anchors.
template <class F>
void for_lines(const Grid& g, F&& visit) {
  const std::size_t na = g.size(), nb = g.empty() ? 0 : g[0].size();
  std::vector<double> line;
  for (std::size_t i = 0; i < na; ++i) visit(g[i], i, true);
  for (std::size_t j = 0; j < nb; ++j) {
    line.clear();
    for (std::size_t i = 0; i < na; ++i) line.push_back(g[i][j]);
    visit(line, j, false);
  }
}

double max_third(const Grid& g) {
  double m = 0.0;
  for_lines(g, [&](const std::vector<double>& v, std::size_t, bool) {
    for (std::size_t k = 0; k + 3 < v.size(); ++k) m = std::max(m, std::abs(v[k + 3] - 3 * v[k + 2] + 3 * v[k + 1] - v[k]));
  });
  return m;
}

void fill_report(SmoothnessReport& r, double noise) {
  r.noise_bound = noise;
  const double limit = 5.0 * std::max(noise, 1e-9);
  for_lines(r.f, [&](const std::vector<double>& v, std::size_t line, bool row) {
    for (std::size_t k = 0; k + 2 < v.size(); ++k)
      r.max_second_difference = std::max(r.max_second_difference, std::abs(v[k + 2] - 2 * v[k + 1] + v[k]));
    for (std::size_t k = 0; k + 3 < v.size(); ++k) {
      const double jump = std::abs(v[k + 3] - 3 * v[k + 2] + 3 * v[k + 1] - v[k]);
      r.max_jump = std::max(r.max_jump, jump);
      if (jump > limit) {
        const double a = row ? r.alphas[line] : r.alphas[k];
        const double b = row ? r.betas[k] : r.betas[line];
        r.flagged.push_back("alpha=" + format_number(a) + ",beta=" + format_number(b) + (row ? ",dir=beta" : ",dir=alpha"));
      }
    }
  });
  r.smooth = r.flagged.empty();
}

}  // namespace

SmoothnessReport smoothness_scan(const std::function<double(double, double)>& f, double alpha0, double alpha1,
                                 double beta0, double beta1, double h, double noise_bound) {
  SmoothnessReport r;
  r.alphas = axis(alpha0, alpha1, h);
  r.betas = axis(beta0, beta1, h);
  for (double a : r.alphas) {
    r.f.emplace_back();
    for (double b : r.betas) r.f.back().push_back(f(a, b));
  }
  fill_report(r, noise_bound);
  return r;
}

SmoothnessReport smoothness_scan(const FreeEnergyContext& ctx, double alpha0, double alpha1, double beta0,
                                 double beta1, double h) {
  require(ctx.phi.replicas >= 4, "smoothness: need >= 4 replicas");
  SmoothnessReport r;
  r.alphas = axis(alpha0, alpha1, h);
  r.betas = axis(beta0, beta1, h);
  // Two independent half-size replica sets estimate the noise of the stencils.
  FreeEnergyContext half_a = ctx, half_b = ctx;
  half_a.phi.replicas = half_b.phi.replicas = ctx.phi.replicas / 2;
  half_a.seed = ctx.seed.child(1);
  half_b.seed = ctx.seed.child(2);
  Grid ga, gb;
  for (double a : r.alphas) {
    r.f.emplace_back();
    ga.emplace_back();
    gb.emplace_back();
    for (double b : r.betas) {
      const InteractionParams p{a, b, Convention::Shifted};
      require(p.in_cone(), "smoothness: grid leaves the cone alpha >= |beta|");
      r.f.back().push_back(emulsion_point(ctx, p).shifted);
      ga.back().push_back(emulsion_point(half_a, p).shifted);
      gb.back().push_back(emulsion_point(half_b, p).shifted);
    }
  }
  Grid diff = ga;
  for (std::size_t i = 0; i < diff.size(); ++i)
    for (std::size_t j = 0; j < diff[i].size(); ++j) diff[i][j] = 0.5 * (ga[i][j] - gb[i][j]);
  fill_report(r, max_third(diff));
  return r;
}

}  // namespace eplab
