#pragma once

#include <string>

#include "eplab/disorder.hpp"
#include "eplab/error.hpp"
#include "eplab/interface.hpp"
#include "eplab/io.hpp"
#include "eplab/lattice_paths.hpp"
#include "json.hpp"

namespace eplab::test {

using Json = nlohmann::ordered_json;

inline Json fixture(const std::string& name) {
  return Json::parse(read_text(std::string(EPLAB_FIXTURE_DIR) + "/" + name));
}

inline InteractionParams params_from(const Json& j) {
  return {j.at("alpha").get<double>(), j.at("beta").get<double>(),
          j.at("convention").get<std::string>() == "shifted" ? Convention::Shifted : Convention::Unshifted};
}

inline MonomerSequence monomers_from(const Json& j) { return {decode_rle(j.get<std::string>()), {}}; }

/// Coarse kappa surface covering a <= 12, built once per test binary.
inline const KappaSurface& coarse_kappa() {
  static const KappaSurface s = [] {
    EntropyGrid g;
    g.step = 0.25;
    g.sizes = {16, 32, 48};
    g.with_kappa_hat = false;
    return KappaSurface(build_entropy_table(g, 1));
  }();
  return s;
}

}  // namespace eplab::test
