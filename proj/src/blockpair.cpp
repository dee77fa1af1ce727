#include "eplab/blockpair.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "eplab/constants.hpp"
#include "eplab/error.hpp"

namespace eplab {

const char* pair_name(PairLabel kl) {
  switch (kl) {
    case PairLabel::AA: return "AA";
    case PairLabel::AB: return "AB";
    case PairLabel::BA: return "BA";
    case PairLabel::BB: return "BB";
  }
  return "?";
}

PairLabel parse_pair(const std::string& s) {
  if (s == "AA") return PairLabel::AA;
  if (s == "AB") return PairLabel::AB;
  if (s == "BA") return PairLabel::BA;
  if (s == "BB") return PairLabel::BB;
  throw InvalidArgument("unknown block pair '" + s + "'");
}

PhiFunction phi_function(const PhiCurve& curve) {
  require(!curve.empty(), "phi function: curve not computed");
  require(curve.params().convention == Convention::Shifted, "phi function: curve must use the shifted convention");
  auto c = std::make_shared<const PhiCurve>(curve);
  PhiFunction f;
  f.value = [c](double mu) { return (*c)(mu); };
  f.stderr_ = [c](double mu) { return c->stderr_()[c->nearest(mu)]; };
  f.mu_max = c->mu_max();
  return f;
}

namespace {

double bulk_shift(PairLabel kl, const InteractionParams& p) {
  return kl == PairLabel::BA || kl == PairLabel::BB ? 0.5 * (p.beta - p.alpha) : 0.0;
}

double to_convention(double shifted, const InteractionParams& p) {
  return p.convention == Convention::Shifted ? shifted : shifted + 0.5 * p.alpha;
}

double kappa_at(const KappaSurface& kappa, double a, double b) {
  if (b >= 1.0 - 1e-12) return kappa_closed_b1(a);
  return kappa(a, b);
}

}  // namespace

double psi_diag(PairLabel kl, double a, const InteractionParams& p) {
  require(kl == PairLabel::AA || kl == PairLabel::BB, "psi_diag: pair must be AA or BB");
  require(a >= 2.0, "psi_diag: a must be >= 2");
  return to_convention(bulk_shift(kl, p) + kappa_closed_b1(a), p);
}

double psi_objective(PairLabel kl, double a, double c, double b, const InteractionParams& p, const PhiFunction& phi,
                     const KappaSurface& kappa) {
  require(kl == PairLabel::AB || kl == PairLabel::BA, "psi objective: pair must be AB or BA");
  const double bulk = bulk_shift(kl, p);
  if (b <= 0.0 || c <= 0.0) return bulk + kappa_closed_b1(a);
  require(b <= 1.0 + 1e-12 && c >= b - 1e-12 && a - c >= 2.0 - b - 1e-12, "psi objective: (c, b) outside DOM(a)");
  const double mu = std::max(1.0, c / b);
  if (mu > phi.mu_max + 1e-9) throw DependencyError("psi objective: phi not available at mu = " + std::to_string(mu));
  const double rest_a = a - c, rest_b = std::max(0.0, 1.0 - b);
  const double rest = rest_a > 0.0 ? rest_a * (bulk + kappa_at(kappa, rest_a, rest_b)) : 0.0;
  return (c * phi.value(mu) + rest) / a;
}

namespace {

struct DomMap {
  double a, mu0;
  // (b, t) in [0,1]^2 -> c in [b, c_max(b)]
  double c_of(double b, double t) const {
    const double c_max = std::min(mu0 * b, a - 2.0 + b);
    return b + t * (c_max - b);
  }
};

BlockPairFreeEnergy psi_mixed(PairLabel kl, double a, const InteractionParams& p, const PhiFunction& phi,
                              const KappaSurface& kappa, const PsiOptions& opt) {
  require(a >= 2.0, "psi: a must be >= 2");
  require(static_cast<bool>(phi.value), "psi: phi function missing");
  if (phi.mu_max < opt.mu_cap - 1e-9)
    throw DependencyError("psi: phi covers mu <= " + std::to_string(phi.mu_max) + " but the cap is " +
                          std::to_string(opt.mu_cap));
  const DomMap dom{a, opt.mu_cap};
  auto f = [&](double b, double t) { return psi_objective(kl, a, dom.c_of(b, t), b, p, phi, kappa); };
  const auto g = maximize_on_grid(f, 0.0, 1.0, 0.0, 1.0, opt.grid, opt.rounds, opt.zoom, opt.tolerance);
  const double branch = bulk_shift(kl, p) + kappa_closed_b1(a);
  BlockPairFreeEnergy r;
  r.kl = kl;
  r.a = a;
  r.convention = p.convention;
  r.certificate = {g.evaluations, g.final_cell, g.last_improvement, g.converged};
  if (g.x > 0.0 && g.value > branch) {
    r.interface_branch = true;
    r.b = g.x;
    r.c = dom.c_of(g.x, g.y);
    r.mu = r.c / r.b;
    r.value = to_convention(g.value, p);
  } else {
    r.value = to_convention(branch, p);
  }
  return r;
}

}  // namespace

BlockPairFreeEnergy psi_AB(double a, const InteractionParams& p, const PhiFunction& phi, const KappaSurface& kappa,
                           const PsiOptions& opt) {
  return psi_mixed(PairLabel::AB, a, p, phi, kappa, opt);
}

BlockPairFreeEnergy psi_BA(double a, const InteractionParams& p, const PhiFunction& phi, const KappaSurface& kappa,
                           const PsiOptions& opt) {
  return psi_mixed(PairLabel::BA, a, p, phi, kappa, opt);
}

PsiCurve PsiCurve::compute(const InteractionParams& p, const PhiFunction& phi, const KappaSurface& kappa,
                           double a_max, double step, const PsiOptions& opt) {
  require(a_max > 2.0 && step > 0.0, "psi curve: need a_max > 2 and a positive step");
  PsiCurve c;
  const auto shifted = p.with(Convention::Shifted);
  const int n = static_cast<int>(std::floor((a_max - 2.0) / step + 1e-9));
  std::vector<double> as, ys;
  for (int i = 0; i <= n; ++i) {
    const double a = 2.0 + i * step;
    c.points_.push_back(psi_AB(a, shifted, phi, kappa, opt));
    as.push_back(a);
    ys.push_back(a * c.points_.back().value);
  }
  c.a_max_ = as.back();
  c.a_psi_ = CubicSpline(std::move(as), std::move(ys));
  return c;
}

double PsiCurve::operator()(double a) const {
  require(!points_.empty(), "psi curve: not computed");
  require(a >= 2.0 - 1e-12 && a <= a_max_ + 1e-12, "psi curve: a outside the tabulated range");
  return a_psi_(a) / a;
}

double PsiCurve::a_psi_derivative(double a) const {
  require(!points_.empty(), "psi curve: not computed");
  return a_psi_.derivative(a);
}

const BlockPairFreeEnergy& PsiCurve::nearest(double a) const {
  require(!points_.empty(), "psi curve: not computed");
  std::size_t best = 0;
  for (std::size_t i = 1; i < points_.size(); ++i)
    if (std::abs(points_[i].a - a) < std::abs(points_[best].a - a)) best = i;
  return points_[best];
}

VariationalMaximizer psi_sup_and_maximisers(const InteractionParams& p, double delta, const PhiFunction& phi,
                                            const KappaSurface& kappa, double a0, const PsiOptions& opt) {
  require(a0 > 2.0, "psi sup: a0 must exceed 2");
  const auto shifted = p.with(Convention::Shifted);
  auto value = [&](double a) { return psi_AB(a, shifted, phi, kappa, opt).value; };
  const double h = 0.25;
  const int n = static_cast<int>(std::floor((a0 - 2.0) / h + 1e-9));
  int best = 0;
  double best_v = kNegInf;
  for (int i = 0; i <= n; ++i) {
    const double v = value(2.0 + i * h);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  const double lo = std::max(2.0, 2.0 + (best - 1) * h), hi = std::min(a0, 2.0 + (best + 1) * h);
  const auto g = golden_maximize(value, lo, hi, 1e-4);
  const auto r = psi_AB(g[0], shifted, phi, kappa, opt);
  VariationalMaximizer m;
  m.delta = delta;
  m.a = g[0];
  m.c = r.c;
  m.b = r.b;
  m.mu = r.mu;
  m.value = r.value;
  m.a0 = a0;
  m.mu0 = opt.mu_cap;
  return m;
}

CapCheck cap_check(const InteractionParams& p, const PhiFunction& phi, const KappaSurface& kappa, double a0,
                   double margin, const PsiOptions& opt) {
  CapCheck c;
  c.psi_at_a0 = psi_AB(a0, p.with(Convention::Shifted), phi, kappa, opt).value;
  c.phi_at_mu0 = phi.value(std::min(opt.mu_cap, phi.mu_max));
  c.a0_ok = c.psi_at_a0 < kVarpi + margin;
  c.mu0_ok = c.phi_at_mu0 < 0.5 * kVarpi;
  return c;
}

UniquenessReport psi_uniqueness(double a, const InteractionParams& p, const PhiFunction& phi,
                                const KappaSurface& kappa, int starts, const SeedSpec& seed, double tolerance,
                                const PsiOptions& opt) {
  require(starts >= 1, "uniqueness: need at least one start");
  const auto shifted = p.with(Convention::Shifted);
  const DomMap dom{a, opt.mu_cap};
  auto f = [&](double b, double t) { return psi_objective(PairLabel::AB, a, dom.c_of(b, t), b, shifted, phi, kappa); };
  Rng rng(seed.child(streams::kSampling));
  UniquenessReport rep;
  for (int s = 0; s < starts; ++s) {
    const double b0 = 0.05 + 0.9 * rng.uniform(), t0 = 0.05 + 0.9 * rng.uniform();
    const auto r = pattern_search_maximize(f, b0, t0, 0.1, 0.0, 1.0, 0.0, 1.0, 1e-7);
    BlockPairFreeEnergy e;
    e.kl = PairLabel::AB;
    e.a = a;
    e.value = r.value;
    e.b = r.x;
    e.c = r.x > 0.0 ? dom.c_of(r.x, r.y) : 0.0;
    e.mu = e.b > 0.0 ? e.c / e.b : 0.0;
    e.interface_branch = e.c > 0.0;
    e.certificate = {r.evaluations, r.final_step, 0.0, r.converged};
    rep.starts.push_back(e);
  }
  for (const auto& x : rep.starts)
    for (const auto& y : rep.starts) rep.spread = std::max(rep.spread, std::hypot(x.c - y.c, x.b - y.b));
  rep.unique = rep.spread <= tolerance;
  return rep;
}

std::vector<StepWeights> blockpair_step_weights(const MonomerSequence& w, int n, Label upper, Label lower,
                                                const InteractionParams& p) {
  require(n >= 0 && static_cast<std::size_t>(n) <= w.size(), "blockpair: monomer sequence shorter than the path");
  auto energy = [&](Label m, Label block) {
    double e = 0.0;
    if (m == Label::A && block == Label::A) e += p.alpha;
    if (m == Label::B && block == Label::B) e += p.beta;
    if (p.convention == Convention::Shifted && m == Label::A) e -= p.alpha;
    return std::exp(e);
  };
  std::vector<StepWeights> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Label m = w[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = {energy(m, lower), energy(m, upper)};
  }
  return out;
}

double blockpair_log_partition(const MonomerSequence& w, int L, double a, PairLabel kl, const InteractionParams& p) {
  const auto spec = CrossingSpec::from_ratios(L, a, 1.0);
  if (!spec.parity_ok()) return kNegInf;
  const Label upper = kl == PairLabel::AA || kl == PairLabel::AB ? Label::A : Label::B;
  const Label lower = kl == PairLabel::AA || kl == PairLabel::BA ? Label::A : Label::B;
  const auto weights = blockpair_step_weights(w, spec.steps, upper, lower, p);
  WalkDP dp({L, -L + 1, L}, StepRule::BothEndpoints);
  dp.run(spec.steps, weights, 1.0, {L, L, L}, false);
  return dp.layer(spec.steps).log_weight(L, L);
}

}  // namespace eplab
