#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "eplab/disorder.hpp"
#include "eplab/error.hpp"
#include "eplab/io.hpp"

using namespace eplab;

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / (std::string("eplab_test_") + name)).string();
}

}  // namespace

TEST_CASE("monomer sampling") {
  const SeedSpec seed{11, {}};
  CHECK_THROWS_AS(sample_monomers(0, seed), InvalidArgument);
  CHECK(sample_monomers(1, seed).size() == 1);
  CHECK(sample_monomers(500, seed) == sample_monomers(500, seed));
  CHECK_FALSE(sample_monomers(500, seed).labels == sample_monomers(500, seed.child(1)).labels);
  const auto w = sample_monomers(100000, seed);
  const double fa = static_cast<double>(w.count(Label::A, w.size())) / 1e5;
  CHECK(fa >= 0.495);
  CHECK(fa <= 0.505);
  // Prefixes are stable: a longer draw extends a shorter one.
  const auto s = sample_monomers(64, seed);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == w[i]);
}

TEST_CASE("swapping labels") {
  const auto w = sample_monomers(40, {3, {}});
  const auto sw = w.swapped();
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(sw[i] == swap_label(w[i]));
  CHECK(sw.swapped() == w);
}

TEST_CASE("block sampling") {
  const SeedSpec seed{5, {}};
  CHECK(sample_blocks(8, 1.0, seed).density() == 1.0);
  CHECK(sample_blocks(8, 0.0, seed).density() == 0.0);
  const auto f = sample_blocks(64, 0.7, seed);
  const double sigma = std::sqrt(0.7 * 0.3 / (64.0 * 64.0));
  CHECK(std::abs(f.density() - 0.7) <= 3.0 * sigma);
  CHECK(f == sample_blocks(64, 0.7, seed));
  CHECK_THROWS_AS(sample_blocks(4, 1.5, seed), InvalidArgument);
  CHECK(f.swapped().density() == doctest::Approx(1.0 - f.density()));
}

TEST_CASE("seed streams") {
  const SeedSpec s{9, {}};
  CHECK(s.child(1) == s.child({1}));
  CHECK_FALSE(s.child(1) == s.child(2));
  CHECK(s.child({1, 2}) == s.child(1).child(2));
  Rng a(s), b(s);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("run-length encoding") {
  const std::vector<Label> v{Label::A, Label::A, Label::B, Label::A, Label::B, Label::B, Label::B};
  CHECK(decode_rle(encode_rle(v)) == v);
  CHECK(decode_rle(encode_rle({})).empty());
  CHECK_THROWS_AS(decode_rle("3A2C"), CorruptArtifact);
}

TEST_CASE("artifact round trip") {
  const auto w = sample_monomers(257, SeedSpec{17, {2, 3}});
  const auto path = temp_path("monomers.txt");
  store(w, path);
  const auto back = load_monomers(path);
  CHECK(back == w);
  CHECK(back.seed == w.seed);

  const auto f = sample_blocks(9, 0.8, SeedSpec{21, {4}});
  const auto fpath = temp_path("blocks.txt");
  store(f, fpath);
  CHECK(load_blocks(fpath) == f);
  CHECK_THROWS_AS(load_monomers(fpath), CorruptArtifact);

  const auto text = read_text(path);
  write_text(path, text.substr(0, text.size() / 2));
  CHECK_THROWS_AS(load_monomers(path), CorruptArtifact);
  std::remove(path.c_str());
  std::remove(fpath.c_str());
}
