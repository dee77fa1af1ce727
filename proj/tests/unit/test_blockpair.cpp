#include <cmath>

#include "doctest.h"
#include "eplab/blockpair.hpp"
#include "eplab/constants.hpp"
#include "support.hpp"

using namespace eplab;

namespace {

PhiFunction constant_phi(double v) {
  PhiFunction f;
  f.value = [v](double) { return v; };
  f.stderr_ = [](double) { return 0.0; };
  f.mu_max = 20.0;
  return f;
}

const PhiFunction& measured_phi() {
  static const PhiFunction f =
      phi_function(PhiCurve::compute({3.0, 2.8, Convention::Shifted}, {24, 20.0, 8}, {7, {}}));
  return f;
}

}  // namespace

TEST_CASE("diagonal block pairs") {
  const InteractionParams sh{1.2, 0.4, Convention::Shifted}, un{1.2, 0.4, Convention::Unshifted};
  CHECK(psi_diag(PairLabel::AA, kAStar, sh) == doctest::Approx(kVarpi));
  CHECK(psi_diag(PairLabel::BB, 2.0, un) == doctest::Approx(0.2 + std::log(2.0)));
  const InteractionParams z0{0.0, 0.7, Convention::Unshifted};
  CHECK(psi_diag(PairLabel::AA, 3.0, z0) == doctest::Approx(kappa_closed_b1(3.0)));
  CHECK(psi_diag(PairLabel::AA, 3.0, z0.with(Convention::Shifted)) == doctest::Approx(kappa_closed_b1(3.0)));
  CHECK_THROWS_AS(psi_diag(PairLabel::AB, 3.0, sh), InvalidArgument);
  CHECK_THROWS_AS(psi_diag(PairLabel::AA, 1.5, sh), InvalidArgument);
  CHECK(parse_pair("BA") == PairLabel::BA);
  CHECK(std::string(pair_name(PairLabel::AB)) == "AB");
  CHECK_THROWS_AS(parse_pair("AC"), InvalidArgument);
}

TEST_CASE("block pair partition matches the enumeration fixture") {
  const auto doc = test::fixture("blockpair_partition.json");
  for (const auto& c : doc["cases"]) {
    const auto w = test::monomers_from(c["w"]);
    const double got = blockpair_log_partition(w, c["L"].get<int>(), c["a"].get<double>(),
                                               parse_pair(c["pair"].get<std::string>()), test::params_from(c["params"]));
    CHECK(std::abs(got - c["log_z"].get<double>()) <= 1e-10);
  }
}

TEST_CASE("zero energy block pair is the crossing count") {
  const auto w = sample_monomers(30, {2, {}});
  for (auto kl : {PairLabel::AA, PairLabel::AB})
    CHECK(blockpair_log_partition(w, 10, 3.0, kl, {0.0, 0.0, Convention::Unshifted}) ==
          doctest::Approx(count_crossing_paths(CrossingSpec::from_ratios(10, 3.0, 1.0))));
}

TEST_CASE("mixed block pairs") {
  const auto& kappa = test::coarse_kappa();
  // Unattractive interface: the pure crossing branch wins.
  const InteractionParams rep{2.0, -2.0, Convention::Shifted};
  const auto r = psi_AB(3.0, rep, constant_phi(-5.0), kappa);
  CHECK_FALSE(r.interface_branch);
  CHECK(r.c == 0.0);
  CHECK(r.value == doctest::Approx(kappa_closed_b1(3.0)));
  const auto rb = psi_BA(3.0, rep, constant_phi(-5.0), kappa);
  CHECK(rb.value == doctest::Approx(-2.0 + kappa_closed_b1(3.0)));
  CHECK(psi_AB(3.0, rep.with(Convention::Unshifted), constant_phi(-5.0), kappa).value ==
        doctest::Approx(1.0 + kappa_closed_b1(3.0)));

  // alpha = beta: both formulas coincide.
  const InteractionParams diag{1.5, 1.5, Convention::Shifted};
  const auto& phi = measured_phi();
  CHECK(psi_AB(3.0, diag, phi, kappa).value == doctest::Approx(psi_BA(3.0, diag, phi, kappa).value));

  // Attractive interface: the optimum uses it and beats the crossing branch.
  const InteractionParams loc{3.0, 2.8, Convention::Shifted};
  const auto m = psi_AB(3.0, loc, phi, kappa);
  CHECK(m.interface_branch);
  CHECK(m.value > kappa_closed_b1(3.0));
  CHECK(m.certificate.converged);
  CHECK(m.mu == doctest::Approx(m.c / m.b));
  CHECK(psi_objective(PairLabel::AB, 3.0, m.c, m.b, loc, phi, kappa) == doctest::Approx(m.value).epsilon(1e-9));

  PhiFunction short_phi = constant_phi(0.0);
  short_phi.mu_max = 5.0;
  CHECK_THROWS_AS(psi_AB(3.0, loc, short_phi, kappa), DependencyError);
}

TEST_CASE("psi curve and variational maximiser") {
  const auto& kappa = test::coarse_kappa();
  const InteractionParams loc{3.0, 2.8, Convention::Shifted};
  const auto& phi = measured_phi();
  const auto curve = PsiCurve::compute(loc, phi, kappa, 6.0, 0.5);
  CHECK(curve.points().size() == 9);
  CHECK(curve(3.0) == doctest::Approx(psi_AB(3.0, loc, phi, kappa).value).epsilon(1e-9));
  CHECK_THROWS_AS(curve(7.0), InvalidArgument);

  const auto v = psi_sup_and_maximisers(loc, 0.0, phi, kappa, 6.0);
  CHECK(v.value >= curve(3.0) - 1e-9);
  CHECK(v.a >= 2.0);
  CHECK(v.a <= 6.0);
  const auto cap = cap_check(loc, phi, kappa, 6.0, 1.0);
  CHECK(cap.phi_at_mu0 == doctest::Approx(phi.value(20.0)));
  CHECK(cap.a0_ok);

  const auto u = psi_uniqueness(3.0, loc, phi, kappa, 5, {3, {}}, 0.05);
  CHECK(u.starts.size() == 5);
  CHECK(u.unique);
}
