#include "eplab/dual.hpp"

#include <algorithm>
#include <cmath>

#include "eplab/constants.hpp"
#include "eplab/error.hpp"
#include "eplab/parallel.hpp"

namespace eplab {

namespace {

std::vector<double> end_log_weights(std::span<const StepWeights> weights, int L, double lambda, StepRule rule) {
  const int H = std::max(1, L / 2);
  WalkDP dp({L, -H, H}, rule);
  dp.run(L, weights, std::exp(-lambda), {1, L, 0}, false);
  const auto v = dp.layer(L);
  std::vector<double> out(static_cast<std::size_t>(L + 1), kNegInf);
  for (int x = 1; x <= L; ++x) out[static_cast<std::size_t>(x)] = v.log_weight(x, 0);
  return out;
}

}  // namespace

std::vector<double> dual_end_log_weights(const MonomerSequence& w, int L, double lambda, const InteractionParams& p,
                                         StepRule rule) {
  require(L >= 1, "dual: L must be positive");
  require(lambda >= 0.0 && std::isfinite(lambda), "dual: lambda must be >= 0");
  return end_log_weights(interface_step_weights(w, L, p), L, lambda, rule);
}

double dual_log_partition(const MonomerSequence& w, int L, double lambda, const InteractionParams& p,
                          StepRule rule) {
  return log_sum_exp(dual_end_log_weights(w, L, lambda, p, rule));
}

FreeEnergyEstimate u_estimate(const InteractionParams& p, double lambda, std::span<const int> sizes, int replicas,
                              const SeedSpec& seed, int threads, bool extrapolate) {
  require(replicas >= 2, "u estimate: need at least 2 replicas");
  require(!sizes.empty(), "u estimate: empty size schedule");
  const std::size_t m = static_cast<std::size_t>(replicas);
  auto flat = parallel_map(sizes.size() * m, threads, [&](std::size_t t) {
    const int L = sizes[t / m];
    const auto w = replica_monomers(seed, L, static_cast<int>(t % m), static_cast<std::size_t>(L));
    return dual_log_partition(w, L, lambda, p) / L;
  });
  std::vector<std::vector<double>> values;
  for (std::size_t k = 0; k < sizes.size(); ++k)
    values.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(k * m),
                        flat.begin() + static_cast<std::ptrdiff_t>((k + 1) * m));
  return FreeEnergyEstimate::from_values(sizes, std::move(values), extrapolate);
}

EntropyEstimate tilde_kappa(double lambda, std::span<const int> sizes) {
  require(lambda >= 0.0 && std::isfinite(lambda), "tilde kappa: lambda must be >= 0");
  std::vector<double> v;
  for (int L : sizes) {
    require(L >= 1, "tilde kappa: sizes must be positive");
    const std::vector<StepWeights> ones(static_cast<std::size_t>(L));
    v.push_back(log_sum_exp(end_log_weights(ones, L, lambda, StepRule::BothEndpoints)) / L);
  }
  if (sizes.size() >= 3) return extrapolate_entropy(sizes, v);
  EntropyEstimate e;
  e.sizes.assign(sizes.begin(), sizes.end());
  e.finite_values = v;
  e.value = v.back();
  if (v.size() == 2) e.error_bound = std::abs(v[1] - v[0]);
  return e;
}

namespace {

double second_divided(double x0, double y0, double x1, double y1, double x2, double y2) {
  return 2.0 * ((y2 - y1) / (x2 - x1) - (y1 - y0) / (x1 - x0)) / (x2 - x0);
}

void check_grid(std::span<const double> x, std::span<const double> y, const char* what) {
  require(x.size() == y.size() && !x.empty(), std::string(what) + ": grid and values differ in length");
  for (std::size_t i = 1; i < x.size(); ++i) require(x[i] > x[i - 1], std::string(what) + ": grid must increase");
}

// Optimum of g over a grid with parabolic refinement; sign = +1 for max, -1 for min.
LegendreResult grid_optimum(std::span<const double> x, const std::vector<double>& g, double sign) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < g.size(); ++i)
    if (sign * g[i] > sign * g[best]) best = i;
  LegendreResult r;
  r.value = g[best];
  r.argument = x[best];
  r.boundary = g.size() > 1 && (best == 0 || best + 1 == g.size());
  if (best > 0 && best + 1 < g.size()) {
    const double c = second_divided(x[best - 1], g[best - 1], x[best], g[best], x[best + 1], g[best + 1]);
    const double h = std::max(x[best] - x[best - 1], x[best + 1] - x[best]);
    r.grid_bound = std::abs(c) * h * h / 8.0;
    const auto v = parabolic_vertex(x[best - 1], sign * g[best - 1], x[best], sign * g[best], x[best + 1],
                                    sign * g[best + 1]);
    r.argument = v[0];
    r.value = sign * v[1];
  }
  return r;
}

}  // namespace

bool concave_on_grid(std::span<const double> x, std::span<const double> y, double tol) {
  check_grid(x, y, "concavity check");
  for (std::size_t i = 1; i + 1 < x.size(); ++i)
    if (second_divided(x[i - 1], y[i - 1], x[i], y[i], x[i + 1], y[i + 1]) > tol) return false;
  return true;
}

bool convex_on_grid(std::span<const double> x, std::span<const double> y, double tol) {
  check_grid(x, y, "convexity check");
  for (std::size_t i = 1; i + 1 < x.size(); ++i)
    if (second_divided(x[i - 1], y[i - 1], x[i], y[i], x[i + 1], y[i + 1]) < -tol) return false;
  return true;
}

std::vector<double> concave_majorant(std::span<const double> x, std::span<const double> y) {
  check_grid(x, y, "concave majorant");
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2], b = hull.back();
      // drop b if it lies on or below the chord a -> i
      if ((y[b] - y[a]) * (x[i] - x[a]) <= (y[i] - y[a]) * (x[b] - x[a])) hull.pop_back();
      else break;
    }
    hull.push_back(i);
  }
  std::vector<double> out(x.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (k + 1 < hull.size() && x[hull[k + 1]] < x[i]) ++k;
    if (k + 1 == hull.size() || hull[k] == i) {
      out[i] = y[hull[k]];
    } else {
      const std::size_t a = hull[k], b = hull[k + 1];
      out[i] = y[a] + (y[b] - y[a]) * (x[i] - x[a]) / (x[b] - x[a]);
    }
  }
  return out;
}

LegendreResult legendre_forward(std::span<const double> rho, std::span<const double> phi_of_inv_rho, double lambda,
                                double concavity_tolerance) {
  check_grid(rho, phi_of_inv_rho, "legendre forward");
  require(rho.front() > 0.0 && rho.back() <= 1.0 + 1e-12, "legendre forward: rho must lie in (0, 1]");
  std::vector<double> g(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) g[i] = -lambda * rho[i] + phi_of_inv_rho[i];
  auto r = grid_optimum(rho, g, 1.0);
  r.envelope = !concave_on_grid(rho, phi_of_inv_rho, concavity_tolerance);
  return r;
}

LegendreResult legendre_inverse(std::span<const double> lambda, std::span<const double> u, double mu,
                                double convexity_tolerance) {
  check_grid(lambda, u, "legendre inverse");
  require(lambda.front() >= 0.0, "legendre inverse: lambda must be >= 0");
  require(mu >= 1.0, "legendre inverse: mu must be >= 1");
  std::vector<double> g(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) g[i] = lambda[i] / mu + u[i];
  auto r = grid_optimum(lambda, g, -1.0);
  r.envelope = !convex_on_grid(lambda, u, convexity_tolerance);
  return r;
}

DualFreeEnergyCurve dual_curve(const InteractionParams& p, std::span<const double> lambdas, std::span<const int> sizes,
                               int replicas, const SeedSpec& seed, int threads, bool with_tilde_kappa) {
  DualFreeEnergyCurve c;
  c.params = p;
  c.lambda.assign(lambdas.begin(), lambdas.end());
  for (double l : lambdas) {
    c.u.push_back(u_estimate(p, l, sizes, replicas, seed, threads));
    if (with_tilde_kappa) c.tilde_kappa.push_back(tilde_kappa(l, sizes).value);
  }
  return c;
}

CurvatureReport curvature_diagnostics(const DualFreeEnergyCurve& curve, std::span<const double> points,
                                      std::span<const double> deltas) {
  auto find = [&](double l) -> const FreeEnergyEstimate& {
    for (std::size_t i = 0; i < curve.lambda.size(); ++i)
      if (std::abs(curve.lambda[i] - l) < 1e-9) return curve.u[i];
    throw DependencyError("curvature: lambda " + std::to_string(l) + " is not on the curve");
  };
  CurvatureReport rep;
  rep.ratio_min = std::numeric_limits<double>::infinity();
  rep.ratio_max = -std::numeric_limits<double>::infinity();
  for (double l : points) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double d : deltas) {
      require(d > 0.0, "curvature: deltas must be positive");
      const auto& um = find(l - d);
      const auto& u0 = find(l);
      const auto& up = find(l + d);
      require(um.combined.size() == u0.combined.size() && up.combined.size() == u0.combined.size(),
              "curvature: estimates use different replica counts");
      std::vector<double> diff(u0.combined.size());
      for (std::size_t r = 0; r < diff.size(); ++r)
        diff[r] = um.combined[r] + up.combined[r] - 2.0 * u0.combined[r];
      const auto s = sample_stats(diff);
      CurvatureRecord rec{l, d, s.mean, s.mean / (d * d), s.stderr_ / (d * d)};
      rep.records.push_back(rec);
      if (!(rec.ratio > 3.0 * rec.ratio_stderr) || !(rec.ratio > 0.0)) rep.positive = false;
      lo = std::min(lo, rec.ratio);
      hi = std::max(hi, rec.ratio);
    }
    if (!(hi <= 2.0 * lo) || !(lo > 0.0)) rep.stable = false;
    rep.ratio_min = std::min(rep.ratio_min, lo);
    rep.ratio_max = std::max(rep.ratio_max, hi);
  }
  return rep;
}

std::vector<HorizontalVarianceRecord> horizontal_step_variance(const InteractionParams& p, double lambda,
                                                               std::span<const int> sizes, int replicas,
                                                               const SeedSpec& seed, int threads) {
  require(replicas >= 2, "horizontal variance: need at least 2 replicas");
  const std::size_t m = static_cast<std::size_t>(replicas);
  auto flat = parallel_map(sizes.size() * m, threads, [&](std::size_t t) {
    const int L = sizes[t / m];
    const auto w = replica_monomers(seed, L, static_cast<int>(t % m), static_cast<std::size_t>(L));
    const auto lw = dual_end_log_weights(w, L, lambda, p);
    const double mx = *std::max_element(lw.begin(), lw.end());
    double z = 0, e1 = 0, e2 = 0;
    for (int x = 1; x <= L; ++x) {
      const double q = std::exp(lw[static_cast<std::size_t>(x)] - mx);
      z += q;
      e1 += q * x;
      e2 += q * x * x;
    }
    e1 /= z;
    e2 /= z;
    return std::max(0.0, e2 - e1 * e1);
  });
  std::vector<HorizontalVarianceRecord> out;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const std::vector<double> v(flat.begin() + static_cast<std::ptrdiff_t>(k * m),
                                flat.begin() + static_cast<std::ptrdiff_t>((k + 1) * m));
    const auto s = sample_stats(v);
    const double L = sizes[k];
    out.push_back({sizes[k], s.mean, s.stderr_, s.mean / L, s.stderr_ / L});
  }
  return out;
}

}  // namespace eplab
