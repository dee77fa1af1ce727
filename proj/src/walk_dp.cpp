#include "eplab/walk_dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eplab/constants.hpp"
#include "eplab/error.hpp"
#include "denormals.hpp"

namespace eplab {

namespace {

constexpr int kMoves = 3;

struct Window {
  int x_lo = 0, x_hi = -1, h_lo = 0, h_hi = -1;
  bool empty() const { return x_lo > x_hi || h_lo > h_hi; }
};

struct Geometry {
  WalkBox box;
  int stride;  // heights per row including the two pads

  std::size_t row(int x, int m) const {
    return static_cast<std::size_t>(x * kMoves + m) * static_cast<std::size_t>(stride);
  }
  // Offset such that row_ptr[h] addresses height h.
  std::ptrdiff_t h_offset() const { return 1 - box.h_min; }
};

Window layer_window(const WalkBox& box, const WalkTarget& t, int i, int n) {
  const int rem = n - i;
  Window w;
  w.x_lo = std::max(0, t.x_min - rem);
  w.x_hi = std::min({box.x_max, i, t.x_max});
  w.h_lo = std::max({box.h_min, -i, t.h - rem});
  w.h_hi = std::min({box.h_max, i, t.h + rem});
  return w;
}

template <class T>
void zero_window(T* buf, const Geometry& g, const Window& w) {
  if (w.empty()) return;
  for (int x = w.x_lo; x <= w.x_hi; ++x)
    for (int m = 0; m < kMoves; ++m) {
      T* r = buf + g.row(x, m) + g.h_offset();
      std::fill(r + w.h_lo, r + w.h_hi + 1, T{});
    }
}

// Heights at or below these thresholds make the step "lower".
struct Thresholds {
  int right = 0, up = 0, down = -1;
};

Thresholds thresholds(StepRule rule) {
  if (rule == StepRule::BothEndpoints) return {0, 0, -1};
  return {0, 1, 0};
}

template <class T, bool Weighted>
void advance(const T* prev, T* next, const Geometry& g, const Window& w, const Thresholds& th,
             double wl, double wu, double fug) {
  if (w.empty()) return;
  const auto off = g.h_offset();
  const double rl = wl * fug, ru = wu * fug;
  for (int x = w.x_lo; x <= w.x_hi; ++x) {
    T* nr = next + g.row(x, 0) + off;
    T* nu = next + g.row(x, 1) + off;
    T* nd = next + g.row(x, 2) + off;
    const T* qr = prev + g.row(x, 0) + off;
    const T* qu = prev + g.row(x, 1) + off;
    const T* qd = prev + g.row(x, 2) + off;
    if (x > 0) {
      const T* pr = prev + g.row(x - 1, 0) + off;
      const T* pu = prev + g.row(x - 1, 1) + off;
      const T* pd = prev + g.row(x - 1, 2) + off;
      const int split = std::min(w.h_hi, th.right);
      for (int h = w.h_lo; h <= split; ++h) {
        if constexpr (Weighted) nr[h] = (pr[h] + pu[h] + pd[h]) * rl;
        else nr[h] = pr[h] + pu[h] + pd[h];
      }
      for (int h = std::max(w.h_lo, th.right + 1); h <= w.h_hi; ++h) {
        if constexpr (Weighted) nr[h] = (pr[h] + pu[h] + pd[h]) * ru;
        else nr[h] = pr[h] + pu[h] + pd[h];
      }
    } else {
      std::fill(nr + w.h_lo, nr + w.h_hi + 1, T{});
    }
    {
      const int split = std::min(w.h_hi, th.up);
      for (int h = w.h_lo; h <= split; ++h) {
        if constexpr (Weighted) nu[h] = (qr[h - 1] + qu[h - 1]) * wl;
        else nu[h] = qr[h - 1] + qu[h - 1];
      }
      for (int h = std::max(w.h_lo, th.up + 1); h <= w.h_hi; ++h) {
        if constexpr (Weighted) nu[h] = (qr[h - 1] + qu[h - 1]) * wu;
        else nu[h] = qr[h - 1] + qu[h - 1];
      }
    }
    {
      const int split = std::min(w.h_hi, th.down);
      for (int h = w.h_lo; h <= split; ++h) {
        if constexpr (Weighted) nd[h] = (qr[h + 1] + qd[h + 1]) * wl;
        else nd[h] = qr[h + 1] + qd[h + 1];
      }
      for (int h = std::max(w.h_lo, th.down + 1); h <= w.h_hi; ++h) {
        if constexpr (Weighted) nd[h] = (qr[h + 1] + qd[h + 1]) * wu;
        else nd[h] = qr[h + 1] + qd[h + 1];
      }
    }
  }
}

double window_max(const double* buf, const Geometry& g, const Window& w) {
  double mx = 0.0;
  if (w.empty()) return mx;
  const auto off = g.h_offset();
  for (int x = w.x_lo; x <= w.x_hi; ++x)
    for (int m = 0; m < kMoves; ++m) {
      const double* r = buf + g.row(x, m) + off;
      for (int h = w.h_lo; h <= w.h_hi; ++h) mx = std::max(mx, r[h]);
    }
  return mx;
}

void scale_window(double* buf, const Geometry& g, const Window& w, double s) {
  if (w.empty()) return;
  const auto off = g.h_offset();
  for (int x = w.x_lo; x <= w.x_hi; ++x)
    for (int m = 0; m < kMoves; ++m) {
      double* r = buf + g.row(x, m) + off;
      for (int h = w.h_lo; h <= w.h_hi; ++h) r[h] *= s;
    }
}

void validate_box(const WalkBox& box) {
  require(box.x_max >= 0, "walk box: x_max must be >= 0");
  require(box.h_min <= 0 && box.h_max >= 0, "walk box: height range must contain 0");
}

}  // namespace

bool step_is_lower(int from, int to, StepRule rule) {
  if (rule == StepRule::BothEndpoints) return from <= 0 && to <= 0;
  return from <= 0 || to <= 0;
}

double LayerView::log_weight(int x, int h, Move last) const {
  if (x < 0 || x > box_.x_max || h < box_.h_min || h > box_.h_max) return kNegInf;
  const std::size_t i = static_cast<std::size_t>(x * kMoves + static_cast<int>(last)) *
                            static_cast<std::size_t>(stride_) +
                        static_cast<std::size_t>(h - box_.h_min + 1);
  const double v = data_[i];
  return v > 0.0 ? std::log(v) + log_scale_ : kNegInf;
}

double LayerView::log_weight(int x, int h) const {
  if (x < 0 || x > box_.x_max || h < box_.h_min || h > box_.h_max) return kNegInf;
  double total = 0.0;
  for (int m = 0; m < kMoves; ++m) {
    const std::size_t i = static_cast<std::size_t>(x * kMoves + m) * static_cast<std::size_t>(stride_) +
                          static_cast<std::size_t>(h - box_.h_min + 1);
    total += data_[i];
  }
  return total > 0.0 ? std::log(total) + log_scale_ : kNegInf;
}

WalkDP::WalkDP(WalkBox box, StepRule rule) : box_(box), rule_(rule) {
  validate_box(box_);
  height_span_ = box_.h_max - box_.h_min + 3;
  layer_size_ = static_cast<std::size_t>(box_.x_max + 1) * kMoves * static_cast<std::size_t>(height_span_);
}

std::size_t WalkDP::index(int x, Move m, int h) const {
  return static_cast<std::size_t>(x * kMoves + static_cast<int>(m)) * static_cast<std::size_t>(height_span_) +
         static_cast<std::size_t>(h - box_.h_min + 1);
}

void WalkDP::run(int n_steps, std::span<const StepWeights> weights, double right_factor, WalkTarget target,
                 bool keep_layers, const std::function<void(int, const LayerView&)>& observer) {
  require(n_steps >= 0, "walk: number of steps must be >= 0");
  require(static_cast<int>(weights.size()) >= n_steps, "walk: fewer step weights than steps");
  require(right_factor > 0.0 && std::isfinite(right_factor), "walk: right-step factor must be positive");
  FlushDenormals ftz;

  n_steps_ = n_steps;
  right_factor_ = right_factor;
  weights_.assign(weights.begin(), weights.begin() + n_steps);
  layers_.clear();
  log_scales_.clear();

  const Geometry g{box_, height_span_};
  const Thresholds th = thresholds(rule_);

  // Renormalise often enough that no layer can overflow or underflow.
  double max_log = std::abs(std::log(right_factor));
  for (const auto& w : weights_) {
    require(w.lower > 0.0 && w.upper > 0.0 && std::isfinite(w.lower) && std::isfinite(w.upper),
            "walk: step weights must be positive and finite");
    max_log = std::max({max_log, std::abs(std::log(w.lower)) + std::abs(std::log(right_factor)),
                        std::abs(std::log(w.upper)) + std::abs(std::log(right_factor))});
  }
  const int renorm_every = std::max(1, static_cast<int>(250.0 / (std::log(3.0) + max_log)));

  std::vector<double> a(layer_size_, 0.0), b(layer_size_, 0.0);
  Window win_a, win_b;
  a[index(0, Move::Right, 0)] = 1.0;
  win_a = Window{0, 0, 0, 0};
  double log_scale = 0.0;

  if (keep_layers) {
    layers_.push_back(a);
    log_scales_.push_back(log_scale);
  }
  if (observer) observer(0, LayerView(a.data(), box_, height_span_, log_scale));

  std::vector<double>* prev = &a;
  std::vector<double>* next = &b;
  Window* prev_win = &win_a;
  Window* next_win = &win_b;

  for (int i = 1; i <= n_steps; ++i) {
    zero_window(next->data(), g, *next_win);
    const Window w = layer_window(box_, target, i, n_steps);
    const auto& sw = weights_[static_cast<std::size_t>(i - 1)];
    advance<double, true>(prev->data(), next->data(), g, w, th, sw.lower, sw.upper, right_factor);
    *next_win = w;
    if (i % renorm_every == 0 || i == n_steps) {
      const double mx = window_max(next->data(), g, w);
      if (mx > 0.0) {
        scale_window(next->data(), g, w, 1.0 / mx);
        log_scale += std::log(mx);
      }
    }
    if (keep_layers) {
      layers_.push_back(*next);
      log_scales_.push_back(log_scale);
    }
    if (observer) observer(i, LayerView(next->data(), box_, height_span_, log_scale));
    std::swap(prev, next);
    std::swap(prev_win, next_win);
  }
  current_ = std::move(*prev);
  current_log_scale_ = log_scale;
}

LayerView WalkDP::layer(int i) const {
  if (!layers_.empty()) {
    require(i >= 0 && i < static_cast<int>(layers_.size()), "walk: layer index out of range");
    return LayerView(layers_[static_cast<std::size_t>(i)].data(), box_, height_span_,
                     log_scales_[static_cast<std::size_t>(i)]);
  }
  require(i == n_steps_, "walk: only the final layer is available without keep_layers");
  return LayerView(current_.data(), box_, height_span_, current_log_scale_);
}

Path WalkDP::sample_backward(int x, int h, const std::function<double()>& uniform) const {
  require(!layers_.empty(), "walk: sampling requires keep_layers");
  const auto pick = [&](const double* options, int count) {
    double total = 0.0;
    for (int k = 0; k < count; ++k) total += options[k];
    if (!(total > 0.0)) throw ComputationError("walk: sampling from a state of zero weight");
    double u = uniform() * total;
    for (int k = 0; k < count; ++k) {
      if (u < options[k]) return k;
      u -= options[k];
    }
    for (int k = count - 1; k >= 0; --k)
      if (options[k] > 0.0) return k;
    return count - 1;
  };

  const auto& last_layer = layers_.back();
  double w_end[kMoves];
  for (int m = 0; m < kMoves; ++m) w_end[m] = last_layer[index(x, static_cast<Move>(m), h)];
  Move m = static_cast<Move>(pick(w_end, kMoves));

  Path reversed;
  reversed.reserve(static_cast<std::size_t>(n_steps_));
  for (int i = n_steps_; i >= 1; --i) {
    reversed.push_back(m);
    const auto& pl = layers_[static_cast<std::size_t>(i - 1)];
    double opts[kMoves] = {0.0, 0.0, 0.0};
    Move choices[kMoves] = {Move::Right, Move::Up, Move::Down};
    int count = 0;
    switch (m) {
      case Move::Right:
        x -= 1;
        for (int k = 0; k < kMoves; ++k) opts[count++] = pl[index(x, static_cast<Move>(k), h)];
        break;
      case Move::Up:
        h -= 1;
        opts[0] = pl[index(x, Move::Right, h)];
        opts[1] = pl[index(x, Move::Up, h)];
        count = 2;
        break;
      case Move::Down:
        h += 1;
        opts[0] = pl[index(x, Move::Right, h)];
        opts[1] = pl[index(x, Move::Down, h)];
        choices[1] = Move::Down;
        count = 2;
        break;
    }
    if (i > 1) m = choices[pick(opts, count)];
  }
  return Path(reversed.rbegin(), reversed.rend());
}

std::optional<std::uint64_t> exact_walk_count(WalkBox box, int n_steps, int x, int h) {
  validate_box(box);
  require(n_steps >= 0, "walk: number of steps must be >= 0");
  // 3^80 < 2^128, so 128-bit accumulation cannot overflow below this length.
  if (n_steps > 80) return std::nullopt;
  if (x < 0 || x > box.x_max || h < box.h_min || h > box.h_max) return 0;
  using U = unsigned __int128;
  const int stride = box.h_max - box.h_min + 3;
  const Geometry g{box, stride};
  const std::size_t size = static_cast<std::size_t>(box.x_max + 1) * kMoves * static_cast<std::size_t>(stride);
  std::vector<U> a(size, 0), b(size, 0);
  Window win_a{0, 0, 0, 0}, win_b;
  a[g.row(0, 0) + static_cast<std::size_t>(g.h_offset())] = 1;
  const WalkTarget target{x, x, h};
  const Thresholds th{};
  std::vector<U>* prev = &a;
  std::vector<U>* next = &b;
  Window* prev_win = &win_a;
  Window* next_win = &win_b;
  for (int i = 1; i <= n_steps; ++i) {
    zero_window(next->data(), g, *next_win);
    const Window w = layer_window(box, target, i, n_steps);
    advance<U, false>(prev->data(), next->data(), g, w, th, 1.0, 1.0, 1.0);
    *next_win = w;
    std::swap(prev, next);
    std::swap(prev_win, next_win);
  }
  U total = 0;
  for (int m = 0; m < kMoves; ++m) total += (*prev)[g.row(x, m) + static_cast<std::size_t>(g.h_offset() + h)];
  if (total >= (static_cast<U>(1) << 63)) return std::nullopt;
  return static_cast<std::uint64_t>(total);
}

}  // namespace eplab
