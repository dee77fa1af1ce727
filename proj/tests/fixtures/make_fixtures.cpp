// Regenerates the oracle fixtures in this directory:
//   make_fixtures <dir>
// Every value comes from brute-force enumeration; the unit tests compare the
// transfer matrices against these files.

#include <cstdio>
#include <string>

#include "eplab/io.hpp"
#include "eplab/oracle.hpp"
#include "json.hpp"

using Json = nlohmann::ordered_json;
using namespace eplab;

namespace {

constexpr std::uint64_t kSeed = 20240611;

Json params_json(const InteractionParams& p) {
  return {{"alpha", p.alpha}, {"beta", p.beta}, {"convention", convention_name(p.convention)}};
}

void save(const std::string& dir, const std::string& name, const Json& cases) {
  Json doc{{"seed", kSeed}, {"cases", cases}};
  write_text(dir + "/" + name, doc.dump(2) + "\n");
  std::printf("%s: %zu cases\n", name.c_str(), cases.size());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: make_fixtures <dir>\n");
    return 2;
  }
  const std::string dir = argv[1];
  const SeedSpec seed{kSeed, {}};

  {
    Json cases = Json::array();
    const int specs[][3] = {{1, 2, 1}, {1, 3, 1}, {2, 6, 2}, {2, 4, 1}, {3, 7, 2}, {4, 10, 2}, {6, 15, 6}, {5, 13, 2}};
    for (const auto& s : specs)
      cases.push_back({{"L", s[0]}, {"steps", s[1]}, {"span", s[2]}, {"count", oracle::enum_crossing_paths(s[0], s[1], s[2])}});
    save(dir, "crossing_counts.json", cases);
  }
  {
    Json cases = Json::array();
    const int specs[][2] = {{1, 1}, {1, 3}, {2, 4}, {3, 9}, {4, 12}, {5, 15}, {8, 16}};
    for (const auto& s : specs)
      cases.push_back({{"L", s[0]}, {"steps", s[1]}, {"count", oracle::enum_interface_returns(s[0], s[1])}});
    save(dir, "interface_returns.json", cases);
  }
  {
    Json cases = Json::array();
    const InteractionParams ps[] = {{1.0, 0.5, Convention::Unshifted}, {1.0, 0.5, Convention::Shifted},
                                    {2.0, -1.0, Convention::Shifted}, {0.0, 0.0, Convention::Unshifted}};
    std::uint64_t id = 0;
    for (const auto& p : ps)
      for (int L : {4, 6}) {
        const auto w = sample_monomers(static_cast<std::size_t>(2 * L), seed.child({1, id++}));
        cases.push_back({{"L", L}, {"mu", 2.0}, {"params", params_json(p)}, {"w", encode_rle(w.labels)},
                         {"log_z", oracle::enum_interface_partition(w, L, 2.0, p)}});
      }
    save(dir, "interface_partition.json", cases);
  }
  {
    Json cases = Json::array();
    const InteractionParams ps[] = {{1.0, 0.5, Convention::Shifted}, {1.0, 0.5, Convention::Unshifted},
                                    {0.0, 0.0, Convention::Shifted}};
    std::uint64_t id = 0;
    for (const auto& p : ps)
      for (double lambda : {0.0, 0.5, 2.0}) {
        const auto w = sample_monomers(8, seed.child({2, id++}));
        cases.push_back({{"L", 8}, {"lambda", lambda}, {"params", params_json(p)}, {"w", encode_rle(w.labels)},
                         {"log_u", oracle::enum_dual_partition(w, 8, lambda, p)}});
      }
    save(dir, "dual_partition.json", cases);
  }
  {
    Json cases = Json::array();
    std::uint64_t id = 0;
    for (const char* kl : {"AA", "AB", "BA", "BB"})
      for (const auto& p : {InteractionParams{1.5, 0.75, Convention::Shifted}, InteractionParams{1.0, -0.5, Convention::Unshifted}}) {
        const auto w = sample_monomers(6, seed.child({3, id++}));
        cases.push_back({{"L", 3}, {"a", 2.0}, {"pair", kl}, {"params", params_json(p)}, {"w", encode_rle(w.labels)},
                         {"log_z", oracle::enum_blockpair_partition(w, 3, 2.0, parse_pair(kl), p)}});
      }
    save(dir, "blockpair_partition.json", cases);
  }
  {
    Json cases = Json::array();
    std::uint64_t id = 0;
    for (double density : {1.0, 0.8, 0.5})
      for (const auto& p : {InteractionParams{1.0, 0.5, Convention::Unshifted}, InteractionParams{0.8, -0.3, Convention::Shifted}}) {
        const auto field = sample_blocks(3, density, seed.child({4, 1, id}));
        const auto w = sample_monomers(8, seed.child({4, 2, id}));
        ++id;
        for (const char* h : {"match", "mismatch"})
          cases.push_back({{"n", 8}, {"L", 2}, {"N", 3}, {"field", encode_rle(field.labels)}, {"params", params_json(p)},
                           {"hamiltonian", h}, {"w", encode_rle(w.labels)},
                           {"log_z", oracle::enum_emulsion_partition(w, field, 8, 2, p,
                                                                     h[1] == 'a' ? Hamiltonian::Match : Hamiltonian::Mismatch)}});
      }
    save(dir, "emulsion_partition.json", cases);
  }
  {
    Json cases = Json::array();
    for (std::uint64_t i = 0; i < 12; ++i) {
      const auto field = sample_blocks(4, 0.6 + 0.4 * static_cast<double>(i % 4) / 3.0, seed.child({5, i}));
      cases.push_back({{"N", 4}, {"field", encode_rle(field.labels)}, {"max_ab", oracle::enum_max_ab_crossings(field)}});
    }
    save(dir, "gamma_paths.json", cases);
  }
  return 0;
}
