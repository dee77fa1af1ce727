#include <cmath>

#include "doctest.h"
#include "eplab/constants.hpp"
#include "eplab/io.hpp"
#include "eplab/numeric.hpp"
#include "eplab/parallel.hpp"

using namespace eplab;

TEST_CASE("log-sum-exp") {
  const double v[] = {1000.0, 1000.0};
  CHECK(log_sum_exp(v) == doctest::Approx(1000.0 + std::log(2.0)));
  const double empty[] = {kNegInf, kNegInf};
  CHECK(log_sum_exp(empty) == kNegInf);
}

TEST_CASE("size extrapolation recovers the model exactly") {
  const int sizes[] = {16, 32, 64};
  double v[3];
  for (int i = 0; i < 3; ++i) v[i] = 0.7 + 0.3 * std::log(sizes[i]) / sizes[i] - 1.1 / sizes[i];
  const auto e = extrapolate_in_size(sizes, v);
  CHECK(e.value == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(e.fit_residual < 1e-12);
  const auto w = extrapolation_weights(sizes);
  CHECK(w[0] + w[1] + w[2] == doctest::Approx(1.0));
}

TEST_CASE("line fit and parabola vertex") {
  const double x[] = {0.0, 1.0, 2.0, 3.0};
  const double y[] = {1.0, 3.0, 5.0, 7.0};
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.slope_stderr == doctest::Approx(0.0).epsilon(1e-12));
  const auto v = parabolic_vertex(0.0, -1.0, 1.0, 0.0, 2.0, -1.0);
  CHECK(v[0] == doctest::Approx(1.0));
  CHECK(v[1] == doctest::Approx(0.0));
}

TEST_CASE("sample statistics") {
  const double v[] = {1.0, 2.0, 3.0, 4.0};
  const auto s = sample_stats(v);
  CHECK(s.mean == 2.5);
  CHECK(s.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(s.stderr_ == doctest::Approx(s.stddev / 2.0));
}

TEST_CASE("splines reproduce polynomials") {
  std::vector<double> x, y;
  for (int i = 0; i <= 20; ++i) {
    x.push_back(i * 0.1);
    y.push_back(3.0 * x.back() - 1.0);
  }
  const CubicSpline s(x, y);
  CHECK(s(0.55) == doctest::Approx(0.65));
  CHECK(s.derivative(1.23) == doctest::Approx(3.0));
  std::vector<double> g;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 5; ++j) g.push_back(2.0 * i * 0.5 + j * 0.25);
  const BicubicSpline b(0.0, 0.5, 6, 0.0, 0.25, 5, g);
  CHECK(b(1.3, 0.6) == doctest::Approx(2.0 * 1.3 + 0.6));
  CHECK(b.eval(1.3, 0.6, 1, 0) == doctest::Approx(2.0));
  CHECK(b.eval(1.3, 0.6, 0, 1) == doctest::Approx(1.0));
}

TEST_CASE("maximisers") {
  auto f = [](double x, double y) { return -(x - 0.3) * (x - 0.3) - 2.0 * (y + 0.4) * (y + 0.4); };
  const auto g = maximize_on_grid(f, -1, 1, -1, 1, 32, 5, 4.0, 1e-3);
  CHECK(g.converged);
  CHECK(g.x == doctest::Approx(0.3).epsilon(1e-3));
  CHECK(g.y == doctest::Approx(-0.4).epsilon(1e-3));
  const auto p = pattern_search_maximize(f, 0.0, 0.0, 0.25, -1, 1, -1, 1, 1e-8);
  CHECK(p.converged);
  CHECK(p.x == doctest::Approx(0.3).epsilon(1e-5));
  const auto m = golden_maximize([](double t) { return std::sin(t); }, 0.0, 3.0, 1e-9);
  CHECK(m[0] == doctest::Approx(std::acos(0.0)).epsilon(1e-6));
}

TEST_CASE("csv format contract") {
  CsvWriter w({"a", "b"});
  w.comment("note");
  w.row(0.5, std::string("x"));
  w.row(-0.0, 12);
  CHECK(w.str() == "# note\na,b\n0.5,x\n0,12\n");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(format_number(kNegInf) == "-inf");
}

TEST_CASE("parallel map keeps order and propagates errors") {
  auto sq = [](std::size_t i) { return static_cast<int>(i * i); };
  CHECK(parallel_map(50, 1, sq) == parallel_map(50, 4, sq));
  CHECK_THROWS(parallel_map(5, 2, [](std::size_t i) -> int {
    if (i == 3) throw std::runtime_error("boom");
    return 0;
  }));
  CHECK(resolve_threads(3) == 3);
}
