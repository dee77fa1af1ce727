#include "eplab/numeric.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "eplab/constants.hpp"
#include "eplab/error.hpp"

namespace eplab {

double log_sum_exp(std::span<const double> v) {
  double mx = kNegInf;
  for (double x : v) mx = std::max(mx, x);
  if (mx == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v)
    if (x != kNegInf) s += std::exp(x - mx);
  return mx + std::log(s);
}

SizeExtrapolation extrapolate_in_size(std::span<const int> sizes, std::span<const double> values) {
  require(sizes.size() == values.size(), "extrapolation: sizes and values differ in length");
  require(sizes.size() >= 3, "extrapolation: need at least three sizes");
  const auto n = static_cast<Eigen::Index>(sizes.size());
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double L = sizes[static_cast<std::size_t>(i)];
    require(L > 1.0, "extrapolation: sizes must exceed 1");
    A(i, 0) = 1.0;
    A(i, 1) = std::log(L) / L;
    A(i, 2) = 1.0 / L;
    y(i) = values[static_cast<std::size_t>(i)];
  }
  SizeExtrapolation out;
  out.last_increment = std::abs(values[values.size() - 1] - values[values.size() - 2]);
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; })) {
    out.value = values[0];
    out.coefficients = {values[0], 0.0, 0.0};
    return out;
  }
  const Eigen::Vector3d c = A.colPivHouseholderQr().solve(y);
  out.coefficients = {c(0), c(1), c(2)};
  out.value = c(0);
  const Eigen::VectorXd r = A * c - y;
  out.fit_residual = r.cwiseAbs().maxCoeff();
  out.error_bound = std::max(out.fit_residual, out.last_increment);
  return out;
}

std::vector<double> extrapolation_weights(std::span<const int> sizes) {
  require(sizes.size() >= 3, "extrapolation: need at least three sizes");
  const auto n = static_cast<Eigen::Index>(sizes.size());
  Eigen::MatrixXd A(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double L = sizes[static_cast<std::size_t>(i)];
    require(L > 1.0, "extrapolation: sizes must exceed 1");
    A(i, 0) = 1.0;
    A(i, 1) = std::log(L) / L;
    A(i, 2) = 1.0 / L;
  }
  const Eigen::MatrixXd P = (A.transpose() * A).ldlt().solve(A.transpose());
  std::vector<double> w(sizes.size());
  for (Eigen::Index i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = P(0, i);
  return w;
}

SampleStats sample_stats(std::span<const double> v) {
  SampleStats s;
  s.count = v.size();
  if (v.empty()) return s;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
    s.stderr_ = s.stddev / std::sqrt(static_cast<double>(v.size()));
  }
  return s;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, "line fit: need >= 2 matching points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0.0, "line fit: x values are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (x.size() > 2) {
    double sse = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = y[i] - f.intercept - f.slope * x[i];
      sse += e * e;
    }
    f.slope_stderr = std::sqrt(sse / (n - 2.0) / sxx);
  }
  return f;
}

std::array<double, 2> parabolic_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double curvature = (y2 - y1) / (x2 - x1) - (y1 - y0) / (x1 - x0);
  const double den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
  if (!(curvature < 0.0) || den == 0.0) return {x1, y1};
  const double num = (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
  const double xv = x1 - 0.5 * num / den;
  const double l0 = (xv - x1) * (xv - x2) / ((x0 - x1) * (x0 - x2));
  const double l1 = (xv - x0) * (xv - x2) / ((x1 - x0) * (x1 - x2));
  const double l2 = (xv - x0) * (xv - x1) / ((x2 - x0) * (x2 - x1));
  const double yv = y0 * l0 + y1 * l1 + y2 * l2;
  if (xv < x0 || xv > x2 || yv < y1) return {x1, y1};
  return {xv, yv};
}

// ---------------------------------------------------------------------------

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  require(x_.size() == y_.size() && x_.size() >= 2, "spline: need >= 2 matching knots");
  for (std::size_t i = 1; i < x_.size(); ++i) require(x_[i] > x_[i - 1], "spline: knots must increase");
  const std::size_t n = x_.size();
  m_.assign(n, 0.0);
  if (n < 3) return;
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    a[i] = h0;
    b[i] = 2.0 * (h0 + h1);
    c[i] = h1;
    d[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
  }
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
    if (i == 1) break;
  }
}

std::size_t CubicSpline::segment(double t) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), t);
  std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(k, x_.size() - 2);
}

double CubicSpline::operator()(double t) const {
  const std::size_t k = segment(t);
  const double h = x_[k + 1] - x_[k];
  const double A = (x_[k + 1] - t) / h, B = (t - x_[k]) / h;
  return A * y_[k] + B * y_[k + 1] + ((A * A * A - A) * m_[k] + (B * B * B - B) * m_[k + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double t) const {
  const std::size_t k = segment(t);
  const double h = x_[k + 1] - x_[k];
  const double A = (x_[k + 1] - t) / h, B = (t - x_[k]) / h;
  return (y_[k + 1] - y_[k]) / h - (3 * A * A - 1) * h / 6.0 * m_[k] + (3 * B * B - 1) * h / 6.0 * m_[k + 1];
}

double CubicSpline::second_derivative(double t) const {
  const std::size_t k = segment(t);
  const double h = x_[k + 1] - x_[k];
  const double A = (x_[k + 1] - t) / h, B = (t - x_[k]) / h;
  return A * m_[k] + B * m_[k + 1];
}

// ---------------------------------------------------------------------------

namespace {

// Natural cubic B-spline interpolation on a uniform grid: returns n+2
// coefficients c_{-1..n} such that (c_{i-1} + 4 c_i + c_{i+1}) / 6 = f_i.
std::vector<double> bspline_coefficients(const std::vector<double>& f) {
  const std::size_t n = f.size();
  std::vector<double> c(n + 2, 0.0);
  if (n == 1) {
    c.assign(3, f[0]);
    return c;
  }
  // Unknowns c_0..c_{n-1}; c_0 = f_0 and c_{n-1} = f_{n-1} under natural ends.
  std::vector<double> x(n, 0.0);
  x[0] = f[0];
  x[n - 1] = f[n - 1];
  if (n > 2) {
    const std::size_t m = n - 2;
    std::vector<double> diag(m, 4.0), rhs(m);
    for (std::size_t i = 0; i < m; ++i) rhs[i] = 6.0 * f[i + 1];
    rhs[0] -= x[0];
    rhs[m - 1] -= x[n - 1];
    for (std::size_t i = 1; i < m; ++i) {
      const double w = 1.0 / diag[i - 1];
      diag[i] -= w;
      rhs[i] -= w * rhs[i - 1];
    }
    x[m] = rhs[m - 1] / diag[m - 1];
    for (std::size_t i = m - 1; i >= 1; --i) x[i] = (rhs[i - 1] - x[i + 1]) / diag[i - 1];
  }
  for (std::size_t i = 0; i < n; ++i) c[i + 1] = x[i];
  c[0] = 2.0 * x[0] - x[1];
  c[n + 1] = 2.0 * x[n - 1] - x[n - 2];
  return c;
}

void basis(double t, int order, double out[4]) {
  const double s = 1.0 - t;
  switch (order) {
    case 0:
      out[0] = s * s * s / 6.0;
      out[1] = (3 * t * t * t - 6 * t * t + 4) / 6.0;
      out[2] = (-3 * t * t * t + 3 * t * t + 3 * t + 1) / 6.0;
      out[3] = t * t * t / 6.0;
      break;
    case 1:
      out[0] = -s * s / 2.0;
      out[1] = (3 * t * t - 4 * t) / 2.0;
      out[2] = (-3 * t * t + 2 * t + 1) / 2.0;
      out[3] = t * t / 2.0;
      break;
    default:
      out[0] = s;
      out[1] = 3 * t - 2;
      out[2] = -3 * t + 1;
      out[3] = t;
      break;
  }
}

}  // namespace

BicubicSpline::BicubicSpline(double x0, double hx, std::size_t nx, double y0, double hy, std::size_t ny,
                             std::vector<double> values)
    : x0_(x0), hx_(hx), y0_(y0), hy_(hy), nx_(nx), ny_(ny) {
  require(nx >= 2 && ny >= 2, "bicubic: need at least 2 x 2 samples");
  require(values.size() == nx * ny, "bicubic: value count mismatch");
  require(hx > 0 && hy > 0, "bicubic: spacings must be positive");
  for (double v : values) require(std::isfinite(v), "bicubic: samples must be finite");
  // Along y for every x row, then along x for every y coefficient column.
  std::vector<double> tmp(nx * (ny + 2));
  for (std::size_t i = 0; i < nx; ++i) {
    std::vector<double> row(values.begin() + static_cast<std::ptrdiff_t>(i * ny),
                            values.begin() + static_cast<std::ptrdiff_t>((i + 1) * ny));
    auto c = bspline_coefficients(row);
    std::copy(c.begin(), c.end(), tmp.begin() + static_cast<std::ptrdiff_t>(i * (ny + 2)));
  }
  coef_.assign((nx + 2) * (ny + 2), 0.0);
  for (std::size_t j = 0; j < ny + 2; ++j) {
    std::vector<double> col(nx);
    for (std::size_t i = 0; i < nx; ++i) col[i] = tmp[i * (ny + 2) + j];
    auto c = bspline_coefficients(col);
    for (std::size_t i = 0; i < nx + 2; ++i) coef_[i * (ny + 2) + j] = c[i];
  }
}

bool BicubicSpline::contains(double x, double y) const {
  const double ex = 1e-12 * hx_, ey = 1e-12 * hy_;
  return x >= x0_ - ex && x <= x0_ + hx_ * static_cast<double>(nx_ - 1) + ex && y >= y0_ - ey &&
         y <= y0_ + hy_ * static_cast<double>(ny_ - 1) + ey;
}

double BicubicSpline::eval(double x, double y, int dx, int dy) const {
  const double u = (x - x0_) / hx_, v = (y - y0_) / hy_;
  auto i = static_cast<long>(std::floor(u));
  auto j = static_cast<long>(std::floor(v));
  i = std::clamp(i, 0L, static_cast<long>(nx_) - 2);
  j = std::clamp(j, 0L, static_cast<long>(ny_) - 2);
  const double tu = u - static_cast<double>(i), tv = v - static_cast<double>(j);
  double bu[4], bv[4];
  basis(tu, dx, bu);
  basis(tv, dy, bv);
  double s = 0.0;
  for (int a = 0; a < 4; ++a) {
    const std::size_t ii = static_cast<std::size_t>(i + a);  // c_{i-1+a} stored at index i+a
    double row = 0.0;
    for (int b = 0; b < 4; ++b) row += coef_[ii * (ny_ + 2) + static_cast<std::size_t>(j + b)] * bv[b];
    s += row * bu[a];
  }
  return s / std::pow(hx_, dx) / std::pow(hy_, dy);
}

// ---------------------------------------------------------------------------

GridMaximum maximize_on_grid(const std::function<double(double, double)>& f, double x_lo, double x_hi,
                             double y_lo, double y_hi, int n, int rounds, double zoom, double tolerance) {
  require(n >= 3 && rounds >= 0 && zoom > 1.0, "grid maximisation: bad resolution settings");
  require(x_hi >= x_lo && y_hi >= y_lo, "grid maximisation: empty box");
  GridMaximum best;
  best.value = kNegInf;
  double bx_lo = x_lo, bx_hi = x_hi, by_lo = y_lo, by_hi = y_hi;
  double previous = kNegInf;
  for (int r = 0; r <= rounds; ++r) {
    const double dx = (bx_hi - bx_lo) / (n - 1), dy = (by_hi - by_lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
      const double x = bx_lo + dx * i;
      for (int j = 0; j < n; ++j) {
        const double y = by_lo + dy * j;
        const double v = f(x, y);
        ++best.evaluations;
        if (std::isnan(v) || v == kNegInf) continue;
        if (v > best.value) {
          best.value = v;
          best.x = x;
          best.y = y;
        }
      }
    }
    best.final_cell = std::max(dx, dy);
    best.last_improvement = r == 0 ? std::numeric_limits<double>::infinity() : best.value - previous;
    previous = best.value;
    if (best.value == kNegInf) break;
    const double hx = 0.5 * (bx_hi - bx_lo) / zoom, hy = 0.5 * (by_hi - by_lo) / zoom;
    bx_lo = std::max(x_lo, best.x - hx);
    bx_hi = std::min(x_hi, best.x + hx);
    by_lo = std::max(y_lo, best.y - hy);
    by_hi = std::min(y_hi, best.y + hy);
  }
  best.converged = best.value > kNegInf && best.final_cell <= tolerance && best.last_improvement <= tolerance;
  return best;
}

PatternSearchResult pattern_search_maximize(const std::function<double(double, double)>& f, double x, double y,
                                            double step, double x_lo, double x_hi, double y_lo, double y_hi,
                                            double tolerance, int max_evaluations) {
  require(step > 0.0 && tolerance > 0.0, "pattern search: step and tolerance must be positive");
  PatternSearchResult r;
  r.x = std::clamp(x, x_lo, x_hi);
  r.y = std::clamp(y, y_lo, y_hi);
  r.value = f(r.x, r.y);
  r.evaluations = 1;
  if (std::isnan(r.value)) r.value = kNegInf;
  static constexpr int dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (step >= tolerance && r.evaluations < max_evaluations) {
    bool moved = false;
    for (const auto& d : dirs) {
      const double nx = std::clamp(r.x + d[0] * step, x_lo, x_hi), ny = std::clamp(r.y + d[1] * step, y_lo, y_hi);
      if (nx == r.x && ny == r.y) continue;
      const double v = f(nx, ny);
      ++r.evaluations;
      if (v > r.value) {
        r.x = nx;
        r.y = ny;
        r.value = v;
        moved = true;
        break;
      }
    }
    if (!moved) step *= 0.5;
  }
  r.final_step = step;
  r.converged = step < tolerance;
  return r;
}

std::array<double, 2> golden_maximize(const std::function<double(double)>& f, double lo, double hi,
                                      double tolerance) {
  require(hi >= lo, "golden: empty interval");
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  double xb = 0.5 * (a + b);
  double fb = f(xb);
  // Endpoints can win for monotone objectives.
  const double flo = f(lo), fhi = f(hi);
  if (flo > fb) {
    xb = lo;
    fb = flo;
  }
  if (fhi > fb) {
    xb = hi;
    fb = fhi;
  }
  return {xb, fb};
}

}  // namespace eplab
