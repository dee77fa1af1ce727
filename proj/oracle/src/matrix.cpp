#include <cmath>
#include <sstream>

#include "eplab/dual.hpp"
#include "eplab/io.hpp"
#include "eplab/lattice_paths.hpp"
#include "eplab/oracle.hpp"

namespace eplab::oracle {

namespace {

int pick(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.uniform() * (hi - lo + 1));
}

double pick_real(Rng& rng, double lo, double hi) {
  // Two decimals so the instance text reproduces the inputs exactly enough.
  return std::round((lo + rng.uniform() * (hi - lo)) * 100.0) / 100.0;
}

InteractionParams pick_params(Rng& rng, Convention c) {
  const double a = pick_real(rng, 0.0, 2.0);
  const double b = pick_real(rng, -a, a);
  return {a, b, c};
}

std::string describe(const InteractionParams& p) {
  return "alpha=" + format_number(p.alpha) + " beta=" + format_number(p.beta) + " " + convention_name(p.convention);
}

const char* rule_name(StepRule r) { return r == StepRule::BothEndpoints ? "both" : "any"; }

void add_log(MatrixReport& rep, const std::string& pair, const std::string& inst, double dp, double oracle,
             double tol) {
  MatrixRecord r{pair, inst, dp, oracle, 0.0, false, false};
  if (std::isinf(dp) || std::isinf(oracle)) {
    r.ok = dp == oracle;
    r.error = r.ok ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    r.error = std::abs(dp - oracle);
    r.ok = r.error <= tol;
  }
  if (!r.ok) ++rep.failures;
  rep.records.push_back(r);
}

void add_exact(MatrixReport& rep, const std::string& pair, const std::string& inst, std::optional<std::uint64_t> dp,
               std::uint64_t oracle) {
  MatrixRecord r{pair, inst, dp ? static_cast<double>(*dp) : -1.0, static_cast<double>(oracle), 0.0, true, false};
  r.ok = dp.has_value() && *dp == oracle;
  r.error = r.ok ? 0.0 : std::abs(r.dp - r.oracle);
  if (!r.ok) ++rep.failures;
  rep.records.push_back(r);
}

}  // namespace

std::string MatrixReport::csv() const {
  CsvWriter w({"pair", "instance", "dp", "oracle", "error", "ok"});
  for (const auto& r : records)
    w.add({r.pair, r.instance, format_number(r.dp), format_number(r.oracle), format_number(r.error),
           r.ok ? "1" : "0"});
  return w.str();
}

MatrixReport run_oracle_matrix(const SeedSpec& seed, int per_pair, double tolerance) {
  MatrixReport rep;
  const int k = per_pair;

  {  // crossing counts, integer exact
    Rng rng(seed.child(1));
    for (int i = 0; i < k; ++i) {
      const int L = pick(rng, 1, 6), span = pick(rng, 0, L);
      const int steps = std::min(18, span + L + 2 * pick(rng, 0, 4));
      CrossingSpec s{L, static_cast<double>(steps) / L, static_cast<double>(span) / L, steps, span};
      add_exact(rep, "crossing_count",
                "L=" + std::to_string(L) + " steps=" + std::to_string(steps) + " span=" + std::to_string(span),
                count_crossing_paths_exact(s), enum_crossing_paths(L, steps, span));
    }
  }
  {  // interface return counts, integer exact
    Rng rng(seed.child(2));
    for (int i = 0; i < k; ++i) {
      const int L = pick(rng, 1, 8);
      const int steps = std::min(18, L + 2 * pick(rng, 0, 5));
      InterfaceWalkSpec s{L, static_cast<double>(steps) / L, steps};
      add_exact(rep, "interface_count", "L=" + std::to_string(L) + " steps=" + std::to_string(steps),
                count_interface_returns_exact(s), enum_interface_returns(L, steps));
    }
  }
  {  // interface partition, both conventions and both step rules
    Rng rng(seed.child(3));
    for (int i = 0; i < k; ++i) {
      const int L = pick(rng, 1, 6);
      int steps = L + 2 * pick(rng, 0, 5);
      while (steps > 16) steps -= 2;
      const double mu = static_cast<double>(steps) / L;
      const auto p = pick_params(rng, i % 2 ? Convention::Shifted : Convention::Unshifted);
      const StepRule rule = (i / 2) % 2 ? StepRule::AnyEndpoint : StepRule::BothEndpoints;
      const auto w = sample_monomers(static_cast<std::size_t>(steps), seed.child({3, static_cast<std::uint64_t>(i)}));
      add_log(rep, "interface_partition",
              "L=" + std::to_string(L) + " steps=" + std::to_string(steps) + " " + describe(p) + " rule=" +
                  rule_name(rule) + " w=" + encode_rle(w.labels),
              interface_log_partition(w, L, mu, p, rule), enum_interface_partition(w, L, mu, p, rule), tolerance);
    }
  }
  {  // dual partition
    Rng rng(seed.child(4));
    for (int i = 0; i < k; ++i) {
      const int L = pick(rng, 1, 12);
      const double lambda = pick_real(rng, 0.0, 2.0);
      const auto p = pick_params(rng, i % 2 ? Convention::Shifted : Convention::Unshifted);
      const StepRule rule = (i / 2) % 2 ? StepRule::AnyEndpoint : StepRule::BothEndpoints;
      const auto w = sample_monomers(static_cast<std::size_t>(L), seed.child({4, static_cast<std::uint64_t>(i)}));
      add_log(rep, "dual_partition",
              "L=" + std::to_string(L) + " lambda=" + format_number(lambda) + " " + describe(p) + " rule=" +
                  rule_name(rule) + " w=" + encode_rle(w.labels),
              dual_log_partition(w, L, lambda, p, rule), enum_dual_partition(w, L, lambda, p, rule), tolerance);
    }
  }
  {  // tilde kappa at one size: unit weights
    Rng rng(seed.child(5));
    for (int i = 0; i < k; ++i) {
      const int L = pick(rng, 1, 12);
      const double lambda = pick_real(rng, 0.0, 2.0);
      const int sizes[1] = {L};
      const MonomerSequence w{std::vector<Label>(static_cast<std::size_t>(L), Label::A), {}};
      const double oracle = enum_dual_partition(w, L, lambda, {0.0, 0.0, Convention::Unshifted}) / L;
      add_log(rep, "tilde_kappa", "L=" + std::to_string(L) + " lambda=" + format_number(lambda),
              tilde_kappa(lambda, sizes).value, oracle, tolerance);
    }
  }
  {  // block pair partition
    Rng rng(seed.child(6));
    const PairLabel pairs[4] = {PairLabel::AA, PairLabel::AB, PairLabel::BA, PairLabel::BB};
    for (int i = 0; i < k; ++i) {
      const int L = pick(rng, 1, 5);
      int steps = 2 * L + 2 * pick(rng, 0, 3);
      while (steps > 16) steps -= 2;
      const double a = static_cast<double>(steps) / L;
      const auto kl = pairs[i % 4];
      const auto p = pick_params(rng, (i / 4) % 2 ? Convention::Shifted : Convention::Unshifted);
      const auto w = sample_monomers(static_cast<std::size_t>(steps), seed.child({6, static_cast<std::uint64_t>(i)}));
      add_log(rep, "blockpair_partition",
              "L=" + std::to_string(L) + " steps=" + std::to_string(steps) + " pair=" + pair_name(kl) + " " +
                  describe(p) + " w=" + encode_rle(w.labels),
              blockpair_log_partition(w, L, a, kl, p), enum_blockpair_partition(w, L, a, kl, p), tolerance);
    }
  }
  {  // corner-constrained emulsion ensemble
    Rng rng(seed.child(7));
    for (int i = 0; i < k; ++i) {
      const int L = pick(rng, 1, 2);
      // Every crossing has an even number of steps; one in ten instances is odd
      // and must come out empty on both sides.
      const int n = 2 * (L == 1 ? pick(rng, 1, 7) : pick(rng, 2, 10)) - (i % 10 == 9 ? 1 : 0);
      const int N = pick(rng, 2, 4);
      const double density = pick_real(rng, 0.3, 1.0);
      const auto field = sample_blocks(N, density, seed.child({7, 1, static_cast<std::uint64_t>(i)}));
      const auto w = sample_monomers(static_cast<std::size_t>(n), seed.child({7, 2, static_cast<std::uint64_t>(i)}));
      const auto p = pick_params(rng, i % 2 ? Convention::Shifted : Convention::Unshifted);
      const Hamiltonian h = (i / 2) % 2 ? Hamiltonian::Mismatch : Hamiltonian::Match;
      add_log(rep, "emulsion_partition",
              "L=" + std::to_string(L) + " n=" + std::to_string(n) + " N=" + std::to_string(N) + " field=" +
                  encode_rle(field.labels) + " " + describe(p) + (h == Hamiltonian::Match ? " match" : " mismatch") +
                  " w=" + encode_rle(w.labels),
              emulsion_log_partition(w, field, n, L, p, h), enum_emulsion_partition(w, field, n, L, p, h), tolerance);
    }
  }
  {  // coarse percolation paths at N = 4
    for (int i = 0; i < k; ++i) {
      const double density = 0.5 + 0.5 * (i % 10) / 9.0;
      const auto field = sample_blocks(4, density, seed.child({8, static_cast<std::uint64_t>(i)}));
      const NeighbourRule rule = i % 2 ? NeighbourRule::Mirrored : NeighbourRule::Standard;
      const int dp = max_ab_crossings(field, rule), brute = enum_max_ab_crossings(field, rule);
      MatrixRecord r{"gamma_paths",
                     "N=4 field=" + encode_rle(field.labels) + (i % 2 ? " mirrored" : " standard"),
                     static_cast<double>(dp), static_cast<double>(brute), std::abs(dp - brute) * 1.0, true,
                     dp == brute};
      if (!r.ok) ++rep.failures;
      rep.records.push_back(r);
    }
  }
  return rep;
}

}  // namespace eplab::oracle
