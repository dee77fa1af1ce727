#include "eplab/interface.hpp"

#include <algorithm>
#include <cmath>

#include "eplab/constants.hpp"
#include "eplab/error.hpp"
#include "eplab/lattice_paths.hpp"
#include "eplab/parallel.hpp"

namespace eplab {

const char* convention_name(Convention c) { return c == Convention::Shifted ? "shifted" : "unshifted"; }

std::vector<StepWeights> interface_step_weights(const MonomerSequence& w, int n, const InteractionParams& p) {
  require(n >= 0 && static_cast<std::size_t>(n) <= w.size(), "interface: monomer sequence shorter than the path");
  const double ea = std::exp(p.alpha), eb = std::exp(p.beta), ema = std::exp(-p.alpha);
  std::vector<StepWeights> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const bool is_a = w[static_cast<std::size_t>(i)] == Label::A;
    auto& s = out[static_cast<std::size_t>(i)];
    if (p.convention == Convention::Shifted) {
      s.lower = is_a ? ema : eb;
      s.upper = 1.0;
    } else {
      s.lower = is_a ? 1.0 : eb;
      s.upper = is_a ? ea : 1.0;
    }
  }
  return out;
}

namespace {

WalkBox interface_box(int L, int max_steps) {
  const int H = std::max(1, (max_steps - L) / 2);
  return {L, -H, H};
}

}  // namespace

double interface_log_partition(const MonomerSequence& w, int L, double mu, const InteractionParams& p,
                               StepRule rule) {
  const auto spec = InterfaceWalkSpec::from_ratio(L, mu);
  if (!spec.parity_ok()) throw InvalidArgument("interface: (mu - 1)L must be even");
  const auto weights = interface_step_weights(w, spec.steps, p);
  WalkDP dp(interface_box(L, spec.steps), rule);
  dp.run(spec.steps, weights, 1.0, {L, L, 0}, false);
  return dp.layer(spec.steps).log_weight(L, 0);
}

std::vector<double> interface_log_partitions(const MonomerSequence& w, int L, int max_steps,
                                             const InteractionParams& p, StepRule rule) {
  require(L >= 1 && max_steps >= 0, "interface: bad geometry");
  const auto weights = interface_step_weights(w, max_steps, p);
  std::vector<double> out(static_cast<std::size_t>(max_steps + 1), kNegInf);
  WalkDP dp(interface_box(L, max_steps), rule);
  dp.run(max_steps, weights, 1.0, {L, L, 0}, false,
         [&](int i, const LayerView& v) { out[static_cast<std::size_t>(i)] = v.log_weight(L, 0); });
  return out;
}

MonomerSequence replica_monomers(const SeedSpec& seed, int L, int replica, std::size_t n) {
  return sample_monomers(n, seed.child({streams::kMonomers, static_cast<std::uint64_t>(L),
                                        static_cast<std::uint64_t>(replica)}));
}

InterfaceFreeEnergyEstimate phi_estimate(const InteractionParams& p, double mu, std::span<const int> sizes,
                                         int replicas, const SeedSpec& seed, int threads) {
  require(replicas >= 2, "phi estimate: need at least 2 replicas");
  require(!sizes.empty(), "phi estimate: empty size schedule");
  InterfaceFreeEnergyEstimate e;
  e.params = p;
  e.mu = mu;
  e.sizes.assign(sizes.begin(), sizes.end());
  e.replicas = replicas;
  e.seed = seed;
  const std::size_t m = static_cast<std::size_t>(replicas);
  auto flat = parallel_map(sizes.size() * m, threads, [&](std::size_t t) {
    const int L = sizes[t / m];
    const int r = static_cast<int>(t % m);
    const auto spec = InterfaceWalkSpec::from_ratio(L, mu);
    const auto w = replica_monomers(seed, L, r, static_cast<std::size_t>(spec.steps));
    return interface_log_partition(w, L, mu, p) / spec.steps;
  });
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    e.values.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(k * m),
                          flat.begin() + static_cast<std::ptrdiff_t>((k + 1) * m));
    e.stats.push_back(sample_stats(e.values.back()));
  }
  e.mean = e.stats.back().mean;
  e.stderr_ = e.stats.back().stderr_;
  if (e.stats.size() > 1) e.drift = e.stats.back().mean - e.stats[e.stats.size() - 2].mean;
  for (std::size_t k = 1; k < e.stats.size(); ++k)
    if (e.stats[k].stddev > e.stats[k - 1].stddev) e.scatter_shrinks = false;
  return e;
}

PhiCurve PhiCurve::compute(const InteractionParams& p, const PhiCurveSpec& spec, const SeedSpec& seed,
                           int threads) {
  require(spec.L >= 2 && spec.replicas >= 2, "phi curve: need L >= 2 and >= 2 replicas");
  require(spec.mu_max > 1.0, "phi curve: mu_max must exceed 1");
  PhiCurve c;
  c.params_ = p;
  c.spec_ = spec;
  const int L = spec.L;
  const int max_steps = static_cast<int>(std::floor(spec.mu_max * L + 1e-9));
  c.values_ = parallel_map(static_cast<std::size_t>(spec.replicas), threads, [&](std::size_t r) {
    const auto w = replica_monomers(seed, L, static_cast<int>(r), static_cast<std::size_t>(max_steps));
    const auto lz = interface_log_partitions(w, L, max_steps, p);
    std::vector<double> v;
    for (int k = L; k <= max_steps; k += 2) v.push_back(lz[static_cast<std::size_t>(k)] / k);
    return v;
  });
  for (int k = L; k <= max_steps; k += 2) c.mu_.push_back(static_cast<double>(k) / L);
  std::vector<double> col(static_cast<std::size_t>(spec.replicas)), mu_phi;
  for (std::size_t i = 0; i < c.mu_.size(); ++i) {
    for (std::size_t r = 0; r < col.size(); ++r) col[r] = c.values_[r][i];
    const auto s = sample_stats(col);
    c.mean_.push_back(s.mean);
    c.stderr_v_.push_back(s.stderr_);
    mu_phi.push_back(c.mu_[i] * s.mean);
  }
  c.mu_phi_ = CubicSpline(c.mu_, std::move(mu_phi));
  return c;
}

double PhiCurve::operator()(double mu) const {
  if (empty()) throw DependencyError("phi curve: not computed");
  if (mu < 1.0 - 1e-12 || mu > mu_max() + 1e-12) throw DependencyError("phi curve: mu outside the computed range");
  return mu_phi_(mu) / mu;
}

double PhiCurve::derivative(double mu) const {
  if (empty()) throw DependencyError("phi curve: not computed");
  return mu_phi_.derivative(mu) / mu - mu_phi_(mu) / (mu * mu);
}

std::size_t PhiCurve::nearest(double mu) const {
  require(!mu_.empty(), "phi curve: empty");
  auto it = std::lower_bound(mu_.begin(), mu_.end(), mu);
  if (it == mu_.end()) return mu_.size() - 1;
  const auto i = static_cast<std::size_t>(it - mu_.begin());
  if (i > 0 && mu - mu_[i - 1] < *it - mu) return i - 1;
  return i;
}

TailCheck phi_tail_check(const InteractionParams& p, std::span<const double> mu_list, std::span<const int> sizes,
                         int replicas, const SeedSpec& seed, int threads) {
  TailCheck t;
  t.mu.assign(mu_list.begin(), mu_list.end());
  for (double mu : mu_list) t.estimates.push_back(phi_estimate(p.with(Convention::Shifted), mu, sizes, replicas, seed, threads));
  for (std::size_t k = 1; k < t.estimates.size(); ++k) {
    const auto& a = t.estimates[k - 1];
    const auto& b = t.estimates[k];
    if (b.mean > a.mean + 3.0 * std::hypot(a.stderr_, b.stderr_)) t.decreasing = false;
  }
  return t;
}

Path sample_interface_path(const MonomerSequence& w, int L, double mu, const InteractionParams& p,
                           const SeedSpec& seed, StepRule rule) {
  const auto spec = InterfaceWalkSpec::from_ratio(L, mu);
  if (!spec.parity_ok()) throw InvalidArgument("interface: (mu - 1)L must be even");
  const auto weights = interface_step_weights(w, spec.steps, p);
  WalkDP dp(interface_box(L, spec.steps), rule);
  dp.run(spec.steps, weights, 1.0, {L, L, 0}, true);
  Rng rng(seed);
  return dp.sample_backward(L, 0, [&rng] { return rng.uniform(); });
}

std::vector<int> path_heights(const Path& path) {
  std::vector<int> h;
  h.reserve(path.size());
  int y = 0;
  for (Move m : path) {
    if (m == Move::Up) ++y;
    if (m == Move::Down) --y;
    h.push_back(y);
  }
  return h;
}

std::vector<Excursion> path_excursions(const Path& path, StepRule rule) {
  std::vector<Excursion> out;
  int y = 0;
  for (Move m : path) {
    const int next = y + (m == Move::Up) - (m == Move::Down);
    const bool positive = !step_is_lower(y, next, rule);
    if (out.empty() || out.back().positive != positive) out.push_back({0, positive});
    ++out.back().length;
    y = next;
  }
  return out;
}

ExcursionStats excursion_tightness(const InteractionParams& p, double mu, int L, int paths,
                                   std::span<const int> ladder, const SeedSpec& seed, bool localized,
                                   int threads) {
  require(paths >= 2, "excursions: need at least 2 paths");
  require(!ladder.empty(), "excursions: empty M ladder");
  const auto spec = InterfaceWalkSpec::from_ratio(L, mu);
  ExcursionStats st;
  st.probative = localized;
  st.ladder.assign(ladder.begin(), ladder.end());
  st.per_path = parallel_map(static_cast<std::size_t>(paths), threads, [&](std::size_t r) {
    const auto w = replica_monomers(seed, L, static_cast<int>(r), static_cast<std::size_t>(spec.steps));
    const auto path = sample_interface_path(w, L, mu, p, seed.child({streams::kSampling, r}));
    return path_excursions(path);
  });
  std::vector<std::vector<double>> frac(ladder.size());
  for (const auto& ex : st.per_path) {
    int positives = 0;
    for (const auto& e : ex)
      if (e.positive) {
        ++positives;
        ++st.histogram[e.length];
      }
    st.positive_counts.push_back(positives);
    for (std::size_t k = 0; k < ladder.size(); ++k) {
      long steps = 0;
      for (const auto& e : ex)
        if (e.positive && e.length >= ladder[k]) steps += e.length;
      frac[k].push_back(static_cast<double>(steps) / spec.steps);
    }
  }
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    const auto s = sample_stats(frac[k]);
    st.fraction_at_least.push_back(s.mean);
    st.fraction_stderr.push_back(s.stderr_);
    if (k > 0 && s.mean > st.fraction_at_least[k - 1]) st.monotone = false;
  }
  return st;
}

}  // namespace eplab
