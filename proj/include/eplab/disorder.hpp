#pragma once

// Seeded randomness for the monomer labels and the block field.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace eplab {

enum class Label : std::uint8_t { A = 0, B = 1 };

inline char label_char(Label l) { return l == Label::A ? 'A' : 'B'; }
inline Label swap_label(Label l) { return l == Label::A ? Label::B : Label::A; }

/// A master seed plus a stream path. Streams with different paths are
/// independent; the same (seed, path) always yields the same numbers.
struct SeedSpec {
  std::uint64_t master = 0;
  std::vector<std::uint64_t> stream;

  SeedSpec child(std::uint64_t id) const;
  SeedSpec child(std::initializer_list<std::uint64_t> ids) const;
  bool operator==(const SeedSpec&) const = default;
};

/// Stream tags used to keep the different disorder sources apart.
namespace streams {
inline constexpr std::uint64_t kMonomers = 0x6d6f6e6f;
inline constexpr std::uint64_t kBlocks = 0x626c6b73;
inline constexpr std::uint64_t kSampling = 0x73616d70;
}  // namespace streams

/// SplitMix64 keyed by a SeedSpec.
class Rng {
 public:
  explicit Rng(const SeedSpec& seed);
  std::uint64_t next();
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

struct MonomerSequence {
  std::vector<Label> labels;
  SeedSpec seed;

  std::size_t size() const { return labels.size(); }
  Label operator[](std::size_t i) const { return labels[i]; }
  std::size_t count(Label l, std::size_t prefix) const;
  /// All labels swapped A <-> B.
  MonomerSequence swapped() const;
  bool operator==(const MonomerSequence&) const = default;
};

/// N x N block labels; (i, j) is column i, row j. Access wraps periodically.
struct BlockField {
  int N = 0;
  double p = 0.0;
  std::vector<Label> labels;  // index i * N + j
  SeedSpec seed;

  Label at(int i, int j) const;
  double density() const;
  BlockField swapped() const;
  bool operator==(const BlockField&) const = default;
};

MonomerSequence sample_monomers(std::size_t n, const SeedSpec& seed);
BlockField sample_blocks(int N, double p, const SeedSpec& seed);

/// Artifact format: one JSON header line, then run-length-encoded labels
/// ("A12B3...") on the second line. Loading checks length and checksum.
void store(const MonomerSequence& w, const std::string& path);
void store(const BlockField& f, const std::string& path);
MonomerSequence load_monomers(const std::string& path);
BlockField load_blocks(const std::string& path);

std::string encode_rle(const std::vector<Label>& labels);
std::vector<Label> decode_rle(const std::string& text);

}  // namespace eplab
