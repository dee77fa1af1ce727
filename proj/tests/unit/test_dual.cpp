#include <cmath>

#include "doctest.h"
#include "eplab/constants.hpp"
#include "eplab/dual.hpp"
#include "eplab/oracle.hpp"
#include "support.hpp"

using namespace eplab;

namespace {

DualFreeEnergyCurve synthetic_curve(const std::function<double(double)>& u, std::vector<double> lambdas) {
  DualFreeEnergyCurve c;
  c.lambda = lambdas;
  const int sizes[1] = {64};
  for (double l : lambdas) {
    std::vector<double> row;
    for (int r = 0; r < 4; ++r) row.push_back(u(l) + 0.01 * r);
    c.u.push_back(FreeEnergyEstimate::from_values(sizes, {row}, false));
  }
  return c;
}

}  // namespace

TEST_CASE("dual partition matches the enumeration fixture") {
  const auto doc = test::fixture("dual_partition.json");
  for (const auto& c : doc["cases"]) {
    const auto w = test::monomers_from(c["w"]);
    const double got = dual_log_partition(w, c["L"].get<int>(), c["lambda"].get<double>(), test::params_from(c["params"]));
    CHECK(std::abs(got - c["log_u"].get<double>()) <= 1e-10);
  }
}

TEST_CASE("dual partition limits") {
  const auto w = sample_monomers(12, {8, {}});
  const InteractionParams zero{0.0, 0.0, Convention::Shifted};
  CHECK(dual_log_partition(w, 12, 0.0, zero) == doctest::Approx(oracle::enum_dual_partition(w, 12, 0.0, zero)));
  // Large penalty: bounded by the single shortest horizontal extent.
  const double big = dual_log_partition(w, 12, 50.0, zero) / 12.0;
  CHECK(big <= -50.0 / 12.0 + std::log(3.0));
  CHECK_THROWS_AS(dual_log_partition(w, 12, -1.0, zero), InvalidArgument);
  // End weights sum to the partition function.
  const auto ew = dual_end_log_weights(w, 12, 0.7, {1.0, 0.4, Convention::Shifted});
  CHECK(log_sum_exp(std::span<const double>(ew).subspan(1)) ==
        doctest::Approx(dual_log_partition(w, 12, 0.7, {1.0, 0.4, Convention::Shifted})));
}

TEST_CASE("tilde kappa at lambda = 0 is the growth rate of W_L") {
  const int sizes[] = {10};
  const MonomerSequence a{std::vector<Label>(10, Label::A), {}};
  const double want = oracle::enum_dual_partition(a, 10, 0.0, {0.0, 0.0, Convention::Unshifted}) / 10.0;
  CHECK(tilde_kappa(0.0, sizes).value == doctest::Approx(want).epsilon(1e-12));
  const int s3[] = {32, 64, 96};
  CHECK(tilde_kappa(1.0, s3).value < tilde_kappa(0.5, s3).value);
}

TEST_CASE("legendre transforms on grids") {
  std::vector<double> rho, phi;
  for (int i = 1; i <= 20; ++i) {
    rho.push_back(i / 20.0);
    phi.push_back(0.3);
  }
  const auto r0 = legendre_forward(rho, phi, 0.0);
  CHECK(r0.value == doctest::Approx(0.3));
  const auto r1 = legendre_forward(rho, phi, 1.0);
  CHECK(r1.value == doctest::Approx(0.3 - 0.05));
  CHECK(r1.boundary);

  // Round trip on a strictly concave function of rho; its slopes lie inside the lambda grid.
  std::vector<double> g;
  for (double r : rho) g.push_back(-2.0 * (r - 0.9) * (r - 0.9));
  std::vector<double> lam, u;
  double bound = 0.0;
  for (int i = 0; i <= 80; ++i) {
    lam.push_back(i * 0.05);
    const auto r = legendre_forward(rho, g, lam.back());
    u.push_back(r.value);
    bound = std::max(bound, r.grid_bound);
  }
  // Parabolic refinement may dent convexity, but only within the grid bound.
  for (std::size_t i = 1; i + 1 < u.size(); ++i) CHECK(u[i + 1] - 2.0 * u[i] + u[i - 1] >= -2.0 * bound);
  for (std::size_t k = 4; k < 14; ++k) {
    const auto back = legendre_inverse(lam, u, 1.0 / rho[k]);
    CHECK(std::abs(back.value - g[k]) <= 2.0 * back.grid_bound + 2e-3);
  }
  CHECK(concave_on_grid(rho, g, 1e-12));
  const std::vector<double> bumpy{0.0, 1.0, 0.2, 1.5, 0.0};
  const std::vector<double> xs{0, 1, 2, 3, 4};
  const auto maj = concave_majorant(xs, bumpy);
  CHECK(concave_on_grid(xs, maj, 1e-12));
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(maj[i] >= bumpy[i]);
}

TEST_CASE("curvature diagnostics on synthetic inputs") {
  const std::vector<double> l{0.8, 0.9, 0.95, 1.0, 1.05, 1.1, 1.2};
  const double pt[] = {1.0};
  const double ds[] = {0.05, 0.1, 0.2};
  const auto quad = curvature_diagnostics(synthetic_curve([](double x) { return x * x; }, l), pt, ds);
  for (const auto& r : quad.records) CHECK(r.ratio == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(quad.positive);
  CHECK(quad.stable);
  const auto lin = curvature_diagnostics(synthetic_curve([](double x) { return 3.0 - x; }, l), pt, ds);
  for (const auto& r : lin.records) CHECK(r.ratio == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_FALSE(lin.positive);
  const double missing[] = {0.3};
  CHECK_THROWS_AS(curvature_diagnostics(synthetic_curve([](double x) { return x; }, l), pt, missing),
                  DependencyError);
}

TEST_CASE("horizontal variance") {
  const int sizes[] = {16, 32};
  const InteractionParams p{2.0, 1.5, Convention::Shifted};
  const auto huge = horizontal_step_variance(p, 40.0, sizes, 4, {1, {}});
  for (const auto& r : huge) CHECK(r.ratio < 1e-6);
  const auto a = horizontal_step_variance(p, 1.0, sizes, 16, {1, {}});
  const auto b = horizontal_step_variance(p, 1.0, sizes, 16, {2, {}});
  for (std::size_t k = 0; k < 2; ++k)
    CHECK(std::abs(a[k].ratio - b[k].ratio) <= 3.0 * std::hypot(a[k].ratio_stderr, b[k].ratio_stderr));
}

TEST_CASE("u estimate is deterministic and convex in lambda") {
  const int sizes[] = {32};
  const InteractionParams p{2.0, 1.5, Convention::Shifted};
  const double ls[] = {0.5, 1.0, 1.5};
  const auto c = dual_curve(p, ls, sizes, 8, {4, {}}, 1, false);
  CHECK(c.u[0].value + c.u[2].value - 2.0 * c.u[1].value >= 0.0);
  CHECK(u_estimate(p, 1.0, sizes, 8, {4, {}}, 2).values == c.u[1].values);
}
