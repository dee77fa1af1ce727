#include <cmath>

#include "doctest.h"
#include "eplab/constants.hpp"
#include "eplab/oracle.hpp"

using namespace eplab;
using namespace eplab::oracle;

TEST_CASE("enumeration base cases") {
  CHECK(enum_crossing_paths(1, 2.0, 1.0) == 2u);
  CHECK(enum_crossing_paths(1, 3.0, 1.0) == 0u);
  CHECK(enum_crossing_paths(1, 1, 0) == 1u);
  CHECK(enum_interface_returns(5, 5) == 1u);
  CHECK(enum_interface_returns(1, 2) == 0u);
  CHECK_THROWS_AS(enum_crossing_paths(10, 30, 10), BudgetExceeded);
}

TEST_CASE("enumerated partitions at trivial energies") {
  const auto w = sample_monomers(12, {1, {}});
  const InteractionParams zero{0.0, 0.0, Convention::Unshifted};
  CHECK(enum_interface_partition(w, 4, 2.0, zero) == doctest::Approx(std::log(enum_interface_returns(4, 8))));
  // mu = 1: the flat path carries beta for every B monomer.
  const InteractionParams p{1.0, 0.5, Convention::Unshifted};
  CHECK(enum_interface_partition(w, 6, 1.0, p) == doctest::Approx(0.5 * static_cast<double>(w.count(Label::B, 6))));
  CHECK(enum_blockpair_partition(w, 3, 2.0, PairLabel::AA, zero) ==
        doctest::Approx(std::log(static_cast<double>(enum_crossing_paths(3, 6, 3)))));
  const auto all_a = sample_blocks(3, 1.0, {2, {}});
  CHECK(std::isfinite(enum_emulsion_partition(w, all_a, 8, 2, zero)));
  CHECK(enum_emulsion_partition(w, all_a, 7, 2, zero) == kNegInf);
}

TEST_CASE("oracle output obeys the label-swap symmetry") {
  for (std::uint64_t i = 0; i < 6; ++i) {
    const auto w = sample_monomers(10, SeedSpec{4, {i}});
    const auto f = sample_blocks(3, 0.7, SeedSpec{5, {i}});
    const double lhs = enum_emulsion_partition(w, f, 8, 2, {1.2, 0.4, Convention::Unshifted});
    const double rhs = enum_emulsion_partition(w.swapped(), f.swapped(), 8, 2, {0.4, 1.2, Convention::Unshifted});
    if (std::isinf(lhs)) CHECK(lhs == rhs);
    else CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
}

TEST_CASE("small oracle matrix") {
  const auto rep = run_oracle_matrix({3, {}}, 6);
  CHECK(rep.ok());
  CHECK(rep.records.size() == 48);
  CHECK(rep.csv().rfind("pair,instance,dp,oracle,error,ok\n", 0) == 0);
}
