#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace eplab {

/// log(sum(exp(v))) with -inf entries ignored; -inf for an empty/all -inf input.
double log_sum_exp(std::span<const double> v);

/// Fit of a finite-size sequence to c0 + c1 (ln L)/L + c2/L.
struct SizeExtrapolation {
  double value = 0.0;           // c0
  double error_bound = 0.0;     // max(fit residual, last increment)
  double fit_residual = 0.0;    // max |fit - data|
  double last_increment = 0.0;  // |v(L_last) - v(L_prev)|
  std::array<double, 3> coefficients{};
};

/// Requires at least three distinct sizes.
SizeExtrapolation extrapolate_in_size(std::span<const int> sizes, std::span<const double> values);

/// Weights w with c0 = sum_i w_i v_i for the least-squares fit above; used to
/// propagate independent per-size errors into the extrapolated value.
std::vector<double> extrapolation_weights(std::span<const int> sizes);

/// Mean, standard deviation (n-1) and standard error of a sample.
struct SampleStats {
  double mean = 0.0;
  double stddev = 0.0;
  double stderr_ = 0.0;
  std::size_t count = 0;
};
SampleStats sample_stats(std::span<const double> v);

/// Ordinary least-squares line y = intercept + slope x.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_stderr = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Vertex of the parabola through (x0,y0),(x1,y1),(x2,y2), x0 < x1 < x2;
/// returns {x, y} of the vertex, or the middle point if the parabola is flat
/// or opens upward.
std::array<double, 2> parabolic_vertex(double x0, double y0, double x1, double y1, double x2, double y2);

/// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);
  double operator()(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  bool empty() const { return x_.empty(); }

 private:
  std::size_t segment(double t) const;
  std::vector<double> x_, y_, m_;  // m_: second derivatives at knots
};

/// Tensor-product cubic B-spline interpolant on a uniform grid
/// (natural end conditions on both axes). C2 everywhere inside the grid.
class BicubicSpline {
 public:
  BicubicSpline() = default;
  /// values[i * ny + j] is the sample at (x0 + i hx, y0 + j hy).
  BicubicSpline(double x0, double hx, std::size_t nx, double y0, double hy, std::size_t ny,
                std::vector<double> values);

  double operator()(double x, double y) const { return eval(x, y, 0, 0); }
  /// Partial derivative of order (dx, dy), each in {0, 1, 2}.
  double eval(double x, double y, int dx, int dy) const;
  bool contains(double x, double y) const;
  bool empty() const { return coef_.empty(); }

 private:
  double x0_ = 0, hx_ = 1, y0_ = 0, hy_ = 1;
  std::size_t nx_ = 0, ny_ = 0;
  std::vector<double> coef_;  // (nx+2) x (ny+2)
};

/// Result of a shrinking-grid maximisation over a 2-D box.
struct GridMaximum {
  double x = 0.0, y = 0.0, value = 0.0;
  double final_cell = 0.0;        // largest cell side in the last round
  double last_improvement = 0.0;  // value gain of the last round
  int evaluations = 0;
  bool converged = false;         // final_cell and last_improvement below tolerance
};

/// Coarse n x n grid over [x_lo,x_hi] x [y_lo,y_hi], then `rounds` rounds
/// that zoom by `zoom` around the incumbent. Points where f returns -inf or
/// NaN are treated as infeasible.
GridMaximum maximize_on_grid(const std::function<double(double, double)>& f, double x_lo, double x_hi,
                             double y_lo, double y_hi, int n, int rounds, double zoom, double tolerance);

/// Compass search from (x, y) inside the box: try the four axis moves of the
/// current step, move on improvement, otherwise halve the step; stops when the
/// step falls below `tolerance`.
struct PatternSearchResult {
  double x = 0.0, y = 0.0, value = 0.0;
  double final_step = 0.0;
  int evaluations = 0;
  bool converged = false;
};
PatternSearchResult pattern_search_maximize(const std::function<double(double, double)>& f, double x, double y,
                                            double step, double x_lo, double x_hi, double y_lo, double y_hi,
                                            double tolerance, int max_evaluations = 100000);

/// Golden-section maximisation of a unimodal function on [lo, hi].
std::array<double, 2> golden_maximize(const std::function<double(double)>& f, double lo, double hi,
                                      double tolerance);

}  // namespace eplab
