#include <cmath>
#include <string>

#include "doctest.h"
#include "eplab/constants.hpp"
#include "eplab/error.hpp"
#include "eplab/phase.hpp"

using namespace eplab;

TEST_CASE("smoothness scan on synthetic surfaces") {
  const auto flat = smoothness_scan([](double, double) { return 0.8; }, 2.0, 3.0, 1.0, 2.0, 0.25, 0.0);
  CHECK(flat.f.size() == 5);
  CHECK(flat.f[0].size() == 5);
  CHECK(flat.max_second_difference == 0.0);
  CHECK(flat.max_jump == 0.0);
  CHECK(flat.smooth);

  const auto quad = smoothness_scan([](double a, double b) { return a * a - a * b + 2.0 * b * b; }, 2.0, 3.0, 1.0,
                                    2.0, 0.25, 1e-6);
  CHECK(quad.max_jump < 1e-12);
  CHECK(quad.smooth);

  // A second-order kink at beta = 1.5 is flagged, and only next to the crossing.
  auto kink = [](double, double b) { return b > 1.5 ? (b - 1.5) * (b - 1.5) : 0.0; };
  const auto k = smoothness_scan(kink, 2.0, 3.0, 1.0, 2.5, 0.125, 1e-4);
  CHECK_FALSE(k.smooth);
  for (const auto& s : k.flagged) {
    const auto at = s.find("beta=");
    const double b = std::stod(s.substr(at + 5));
    CHECK(b >= 1.5 - 3 * 0.125 - 1e-9);
    CHECK(b <= 1.5 + 1e-9);
  }
}

TEST_CASE("localization criterion") {
  CHECK(std::string(verdict_name(Verdict::Localized)) == "localized");
  const CriterionSpec spec{32, 16, 20.0, true};
  const auto zero = localization_score({0.0, 0.0, Convention::Shifted}, spec, {7, {}});
  CHECK(zero.verdict == Verdict::Delocalized);
  CHECK(zero.stderr_ == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(zero.value < 0.0);
  CHECK(zero.tail_ok);

  // The mu = 1 term alone is negative in the cone.
  for (double a : {0.5, 2.0, 4.0})
    for (double b : {-a, 0.0, a}) CHECK(0.5 * (b - a) - kVarpi - kVarsigma < 0.0);

  const auto loc = localization_score({3.0, 2.9, Convention::Shifted}, {32, 32, 6.0, true}, {7, {}});
  CHECK(loc.verdict == Verdict::Localized);
  CHECK(loc.ci_lo > 0.0);
  CHECK(loc.mu > 1.0);
  CHECK(localization_score({3.0, 2.9, Convention::Shifted}, {32, 32, 6.0, true}, {7, {}}, 2).value == loc.value);
}

TEST_CASE("critical beta on the diagonal segment") {
  const auto s = critical_beta(0.5, CriticalSpec{}, {7, {}});
  CHECK(s.diagonal);
  CHECK(s.beta_c == 0.5);
  CHECK_FALSE(s.flagged);
}

TEST_CASE("curve trace bookkeeping") {
  CurveTrace t;
  CriticalCurveSample a, b;
  a.alpha = 3.0;
  a.lo = 1.6;
  a.hi = 1.7;
  b.alpha = 5.0;
  b.lo = 1.8;
  b.hi = 1.9;
  t.samples = {a, b};
  CHECK(t.separated(3.0, 5.0));
  CHECK_FALSE(t.separated(5.0, 3.0));
  CHECK_THROWS_AS(t.separated(3.0, 4.0), InvalidArgument);
}
