#pragma once

// Brute-force enumerations used as ground truth for the transfer matrices.
// Every function walks the paths one by one; nothing here shares code with
// the dynamic programs it checks.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "eplab/blockpair.hpp"
#include "eplab/disorder.hpp"
#include "eplab/emulsion.hpp"
#include "eplab/interface.hpp"

namespace eplab::oracle {

/// Refuses inputs beyond max_steps and aborts walks visiting more than
/// max_nodes partial paths.
struct EnumerationBudget {
  int max_steps = 18;
  std::uint64_t max_nodes = 200'000'000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of steps-step paths (0,0) -> (span, L) in the band (-L, L].
std::uint64_t enum_crossing_paths(int L, int steps, int span, const EnumerationBudget& budget = {});
/// Ratio form: aL steps, span bL.
std::uint64_t enum_crossing_paths(int L, double a, double b, const EnumerationBudget& budget = {});

/// Number of steps-step paths (0,0) -> (L, 0), any height.
std::uint64_t enum_interface_returns(int L, int steps, const EnumerationBudget& budget = {});

/// ln Z over muL-step paths (0,0) -> (L, 0) with interface energies.
double enum_interface_partition(const MonomerSequence& w, int L, double mu, const InteractionParams& p,
                                StepRule rule = StepRule::BothEndpoints, const EnumerationBudget& budget = {});

/// ln U_L over L-step paths (0,0) -> (x, 0), 1 <= x <= L, weight e^{-lambda x}.
double enum_dual_partition(const MonomerSequence& w, int L, double lambda, const InteractionParams& p,
                           StepRule rule = StepRule::BothEndpoints, const EnumerationBudget& budget = {});

/// ln Z over aL-step paths (0,0) -> (L, L), x in [0, L], height in (-L, L],
/// upper block labelled k and lower block l of the pair.
double enum_blockpair_partition(const MonomerSequence& w, int L, double a, PairLabel kl, const InteractionParams& p,
                                const EnumerationBudget& budget = {});

/// ln Z over W_{n,L}: concatenations of corner-to-corner crossings, each
/// confined to the crossed block and its neighbour. -inf when empty.
double enum_emulsion_partition(const MonomerSequence& w, const BlockField& field, int n, int L,
                               const InteractionParams& p, Hamiltonian h = Hamiltonian::Match,
                               const EnumerationBudget& budget = {.max_steps = 20});

/// Largest AB pair count over all 2^N N coarse paths; -1 if none is all-A.
int enum_max_ab_crossings(const BlockField& field, NeighbourRule rule = NeighbourRule::Standard);

/// One DP-versus-enumeration comparison.
struct MatrixRecord {
  std::string pair;      // which DP
  std::string instance;  // inputs
  double dp = 0.0;
  double oracle = 0.0;
  double error = 0.0;
  bool exact = false;  // integer comparison
  bool ok = false;
};

struct MatrixReport {
  std::vector<MatrixRecord> records;
  int failures = 0;
  bool ok() const { return failures == 0 && !records.empty(); }
  /// pair,instance,dp,oracle,error,ok
  std::string csv() const;
};

/// Randomised tiny instances, `per_pair` for each DP, drawn from `seed`.
MatrixReport run_oracle_matrix(const SeedSpec& seed, int per_pair = 50, double tolerance = 1e-10);

}  // namespace eplab::oracle
