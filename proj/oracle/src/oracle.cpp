#include "eplab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eplab/error.hpp"

namespace eplab::oracle {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

int dx(Move m) { return m == Move::Right ? 1 : 0; }
int dy(Move m) { return m == Move::Up ? 1 : m == Move::Down ? -1 : 0; }
bool reversal(Move last, Move m) {
  return (last == Move::Up && m == Move::Down) || (last == Move::Down && m == Move::Up);
}

void check_steps(int steps, const EnumerationBudget& budget, const char* what) {
  if (steps < 0) throw InvalidArgument(std::string(what) + ": negative step count");
  if (steps > budget.max_steps)
    throw BudgetExceeded(std::string(what) + ": " + std::to_string(steps) + " steps exceed the budget of " +
                         std::to_string(budget.max_steps));
}

// Plain recursive walk over all no-reversal paths of n steps from (0,0).
// keep(t, x, y) prunes partial paths; step_log(t, y0, y1) is the log weight
// of step t; leaf(x, y, logw) sees every complete path.
template <class Keep, class StepLog, class Leaf>
struct Walk {
  int n;
  Keep keep;
  StepLog step_log;
  Leaf leaf;
  std::uint64_t nodes = 0;
  std::uint64_t max_nodes;

  void go(int t, int x, int y, bool first, Move last, double logw) {
    if (++nodes > max_nodes) throw BudgetExceeded("oracle: node budget exceeded");
    if (t == n) {
      leaf(x, y, logw);
      return;
    }
    for (Move m : {Move::Right, Move::Up, Move::Down}) {
      if (!first && reversal(last, m)) continue;
      const int nx = x + dx(m), ny = y + dy(m);
      if (!keep(t + 1, nx, ny)) continue;
      go(t + 1, nx, ny, false, m, logw + step_log(t, y, ny));
    }
  }
};

template <class Keep, class StepLog, class Leaf>
std::uint64_t walk(int n, const EnumerationBudget& budget, Keep keep, StepLog step_log, Leaf leaf) {
  Walk<Keep, StepLog, Leaf> w{n, keep, step_log, leaf, 0, budget.max_nodes};
  w.go(0, 0, 0, true, Move::Right, 0.0);
  return w.nodes;
}

bool lower_step(int y0, int y1, StepRule rule) {
  return rule == StepRule::BothEndpoints ? (y0 <= 0 && y1 <= 0) : (y0 <= 0 || y1 <= 0);
}

double interface_energy(Label m, bool lower, const InteractionParams& p) {
  if (p.convention == Convention::Unshifted) {
    if (lower) return m == Label::B ? p.beta : 0.0;
    return m == Label::A ? p.alpha : 0.0;
  }
  if (lower) return m == Label::B ? p.beta : -p.alpha;
  return 0.0;
}

double match_energy(Label m, Label block, const InteractionParams& p, Hamiltonian h) {
  double e = 0.0;
  const bool same = m == block;
  if (h == Hamiltonian::Match ? same : !same) e += m == Label::A ? p.alpha : p.beta;
  if (p.convention == Convention::Shifted && m == Label::A) e -= p.alpha;
  return e;
}

int to_steps(double r, int L, const char* what) {
  const double v = r * L;
  const long k = std::lround(v);
  if (std::abs(v - static_cast<double>(k)) > 1e-9) throw InvalidArgument(std::string(what) + ": ratio * L not integral");
  return static_cast<int>(k);
}

}  // namespace

std::uint64_t enum_crossing_paths(int L, int steps, int span, const EnumerationBudget& budget) {
  require(L >= 1 && span >= 0, "enum_crossing_paths: bad geometry");
  check_steps(steps, budget, "enum_crossing_paths");
  std::uint64_t count = 0;
  walk(
      steps, budget,
      [&](int t, int x, int y) {
        const int left = steps - t;
        return x <= span && y > -L && y <= L && (span - x) + std::abs(L - y) <= left;
      },
      [](int, int, int) { return 0.0; },
      [&](int x, int y, double) {
        if (x == span && y == L) ++count;
      });
  return count;
}

std::uint64_t enum_crossing_paths(int L, double a, double b, const EnumerationBudget& budget) {
  return enum_crossing_paths(L, to_steps(a, L, "enum_crossing_paths"), to_steps(b, L, "enum_crossing_paths"),
                             budget);
}

std::uint64_t enum_interface_returns(int L, int steps, const EnumerationBudget& budget) {
  require(L >= 1, "enum_interface_returns: bad geometry");
  check_steps(steps, budget, "enum_interface_returns");
  std::uint64_t count = 0;
  walk(
      steps, budget,
      [&](int t, int x, int y) { return x <= L && (L - x) + std::abs(y) <= steps - t; },
      [](int, int, int) { return 0.0; },
      [&](int x, int y, double) {
        if (x == L && y == 0) ++count;
      });
  return count;
}

double enum_interface_partition(const MonomerSequence& w, int L, double mu, const InteractionParams& p,
                                StepRule rule, const EnumerationBudget& budget) {
  require(L >= 1, "enum_interface_partition: bad geometry");
  const int n = to_steps(mu, L, "enum_interface_partition");
  check_steps(n, budget, "enum_interface_partition");
  require(static_cast<int>(w.size()) >= n, "enum_interface_partition: monomer sequence too short");
  double z = kNegInf;
  walk(
      n, budget, [&](int t, int x, int y) { return x <= L && (L - x) + std::abs(y) <= n - t; },
      [&](int t, int y0, int y1) { return interface_energy(w[static_cast<std::size_t>(t)], lower_step(y0, y1, rule), p); },
      [&](int x, int y, double lw) {
        if (x == L && y == 0) z = log_add(z, lw);
      });
  return z;
}

double enum_dual_partition(const MonomerSequence& w, int L, double lambda, const InteractionParams& p, StepRule rule,
                           const EnumerationBudget& budget) {
  require(L >= 1, "enum_dual_partition: bad geometry");
  check_steps(L, budget, "enum_dual_partition");
  require(static_cast<int>(w.size()) >= L, "enum_dual_partition: monomer sequence too short");
  double z = kNegInf;
  walk(
      L, budget, [&](int t, int, int y) { return std::abs(y) <= L - t; },
      [&](int t, int y0, int y1) { return interface_energy(w[static_cast<std::size_t>(t)], lower_step(y0, y1, rule), p); },
      [&](int x, int y, double lw) {
        if (y == 0 && x >= 1) z = log_add(z, lw - lambda * x);
      });
  return z;
}

double enum_blockpair_partition(const MonomerSequence& w, int L, double a, PairLabel kl, const InteractionParams& p,
                                const EnumerationBudget& budget) {
  require(L >= 1, "enum_blockpair_partition: bad geometry");
  const int n = to_steps(a, L, "enum_blockpair_partition");
  check_steps(n, budget, "enum_blockpair_partition");
  require(static_cast<int>(w.size()) >= n, "enum_blockpair_partition: monomer sequence too short");
  const Label upper = kl == PairLabel::AA || kl == PairLabel::AB ? Label::A : Label::B;
  const Label lower = kl == PairLabel::AA || kl == PairLabel::BA ? Label::A : Label::B;
  double z = kNegInf;
  walk(
      n, budget,
      [&](int t, int x, int y) { return x <= L && y > -L && y <= L && (L - x) + (L - y) <= n - t; },
      [&](int t, int y0, int y1) {
        const Label block = (y0 <= 0 && y1 <= 0) ? lower : upper;
        return match_energy(w[static_cast<std::size_t>(t)], block, p, Hamiltonian::Match);
      },
      [&](int x, int y, double lw) {
        if (x == L && y == L) z = log_add(z, lw);
      });
  return z;
}

namespace {

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

struct EmulsionWalk {
  const MonomerSequence& w;
  const BlockField& field;
  int n, L;
  const InteractionParams& p;
  Hamiltonian h;
  std::uint64_t nodes = 0, max_nodes;
  double z = kNegInf;

  // (sx, sy) is the corner where the current crossing began; up and down say
  // which exit corners are still consistent with the steps taken so far.
  void go(int t, int x, int y, bool first, Move last, int sx, int sy, bool up, bool down, double lw) {
    if (++nodes > max_nodes) throw BudgetExceeded("oracle: node budget exceeded");
    const bool at_corner = !up && !down;
    if (t == n) {
      if (at_corner) z = log_add(z, lw);
      return;
    }
    if (at_corner) {
      sx = x;
      sy = y;
      up = down = true;
    }
    for (Move m : {Move::Right, Move::Up, Move::Down}) {
      if (!first && reversal(last, m)) continue;
      const int nx = x + dx(m), ny = y + dy(m);
      if (nx > sx + L) continue;
      const bool nu = up && ny > sy - L && ny <= sy + L;
      const bool nd = down && ny >= sy - L && ny < sy + L;
      if (!nu && !nd) continue;
      const int col = floor_div(sx, L), row = floor_div(sy, L);
      const Label block = field.at(col, (y <= sy && ny <= sy) ? row - 1 : row);
      const double e = match_energy(w[static_cast<std::size_t>(t)], block, p, h);
      const bool done = (nu && nx == sx + L && ny == sy + L) || (nd && nx == sx + L && ny == sy - L);
      if (done)
        go(t + 1, nx, ny, false, m, nx, ny, false, false, lw + e);
      else
        go(t + 1, nx, ny, false, m, sx, sy, nu, nd, lw + e);
    }
  }
};

}  // namespace

double enum_emulsion_partition(const MonomerSequence& w, const BlockField& field, int n, int L,
                               const InteractionParams& p, Hamiltonian h, const EnumerationBudget& budget) {
  require(L >= 1 && field.N >= 1, "enum_emulsion_partition: bad geometry");
  check_steps(n, budget, "enum_emulsion_partition");
  require(static_cast<int>(w.size()) >= n, "enum_emulsion_partition: monomer sequence too short");
  EmulsionWalk walker{w, field, n, L, p, h, 0, budget.max_nodes};
  walker.go(0, 0, 0, true, Move::Right, 0, 0, false, false, 0.0);
  return walker.z;
}

int enum_max_ab_crossings(const BlockField& field, NeighbourRule rule) {
  const int N = field.N;
  require(N >= 1 && N <= 16, "enum_max_ab_crossings: need 1 <= N <= 16");
  int best = -1;
  for (int start = 0; start < N; ++start) {
    for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
      int c = start, pairs = 0;
      bool ok = true;
      for (int i = 0; i < N && ok; ++i) {
        const bool go_up = (mask >> i) & 1u;
        const int crossed = go_up ? c : c - 1;
        int neighbour;
        if (rule == NeighbourRule::Standard)
          neighbour = go_up ? crossed - 1 : crossed + 1;
        else
          neighbour = go_up ? crossed + 1 : crossed - 1;
        if (field.at(i, crossed) != Label::A) ok = false;
        if (field.at(i, neighbour) == Label::B) ++pairs;
        c += go_up ? 1 : -1;
      }
      if (ok) best = std::max(best, pairs);
    }
  }
  return best;
}

}  // namespace eplab::oracle
