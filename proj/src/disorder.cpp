#include "eplab/disorder.hpp"

#include <charconv>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "eplab/error.hpp"

namespace eplab {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::vector<Label>& labels) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Label l : labels) {
    h ^= static_cast<std::uint64_t>(l) + 1;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

SeedSpec SeedSpec::child(std::uint64_t id) const {
  SeedSpec s = *this;
  s.stream.push_back(id);
  return s;
}

SeedSpec SeedSpec::child(std::initializer_list<std::uint64_t> ids) const {
  SeedSpec s = *this;
  s.stream.insert(s.stream.end(), ids.begin(), ids.end());
  return s;
}

Rng::Rng(const SeedSpec& seed) {
  std::uint64_t k = mix(seed.master + kGolden);
  for (std::uint64_t id : seed.stream) k = mix(k ^ mix(id + kGolden));
  state_ = k;
}

std::uint64_t Rng::next() {
  state_ += kGolden;
  return mix(state_);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::size_t MonomerSequence::count(Label l, std::size_t prefix) const {
  require(prefix <= labels.size(), "monomers: prefix longer than the sequence");
  std::size_t c = 0;
  for (std::size_t i = 0; i < prefix; ++i) c += labels[i] == l;
  return c;
}

MonomerSequence MonomerSequence::swapped() const {
  MonomerSequence s = *this;
  for (auto& l : s.labels) l = swap_label(l);
  return s;
}

Label BlockField::at(int i, int j) const {
  const int ii = ((i % N) + N) % N, jj = ((j % N) + N) % N;
  return labels[static_cast<std::size_t>(ii) * static_cast<std::size_t>(N) + static_cast<std::size_t>(jj)];
}

double BlockField::density() const {
  if (labels.empty()) return 0.0;
  std::size_t a = 0;
  for (Label l : labels) a += l == Label::A;
  return static_cast<double>(a) / static_cast<double>(labels.size());
}

BlockField BlockField::swapped() const {
  BlockField f = *this;
  f.p = 1.0 - p;
  for (auto& l : f.labels) l = swap_label(l);
  return f;
}

MonomerSequence sample_monomers(std::size_t n, const SeedSpec& seed) {
  require(n >= 1, "monomers: length must be >= 1");
  MonomerSequence w;
  w.seed = seed;
  w.labels.resize(n);
  Rng rng(seed);
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) bits = rng.next();
    w.labels[i] = (bits & 1u) ? Label::B : Label::A;
    bits >>= 1;
  }
  return w;
}

BlockField sample_blocks(int N, double p, const SeedSpec& seed) {
  require(N >= 1, "blocks: N must be >= 1");
  require(p >= 0.0 && p <= 1.0, "blocks: density must lie in [0, 1]");
  BlockField f;
  f.N = N;
  f.p = p;
  f.seed = seed;
  f.labels.resize(static_cast<std::size_t>(N) * static_cast<std::size_t>(N));
  Rng rng(seed);
  for (auto& l : f.labels) l = rng.bernoulli(p) ? Label::A : Label::B;
  return f;
}

std::string encode_rle(const std::vector<Label>& labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size();) {
    std::size_t j = i;
    while (j < labels.size() && labels[j] == labels[i]) ++j;
    out += label_char(labels[i]);
    out += std::to_string(j - i);
    i = j;
  }
  return out;
}

std::vector<Label> decode_rle(const std::string& text) {
  std::vector<Label> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c != 'A' && c != 'B') throw CorruptArtifact("labels: unexpected character in run-length payload");
    std::size_t run = 0;
    const char* first = text.data() + i + 1;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, run);
    if (ec != std::errc() || ptr == first || run == 0) throw CorruptArtifact("labels: malformed run length");
    out.insert(out.end(), run, c == 'A' ? Label::A : Label::B);
    i = static_cast<std::size_t>(ptr - text.data());
  }
  return out;
}

namespace {

nlohmann::json seed_json(const SeedSpec& s) { return {{"master", s.master}, {"stream", s.stream}}; }

SeedSpec seed_from_json(const nlohmann::json& j) {
  SeedSpec s;
  s.master = j.at("master").get<std::uint64_t>();
  s.stream = j.at("stream").get<std::vector<std::uint64_t>>();
  return s;
}

void write_artifact(const std::string& path, nlohmann::json header, const std::vector<Label>& labels) {
  header["length"] = labels.size();
  header["checksum"] = fnv1a(labels);
  header["format"] = "eplab-labels-1";
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open artifact for writing: " + path);
  f << header.dump() << '\n' << encode_rle(labels) << '\n';
  if (!f) throw ComputationError("failed writing artifact: " + path);
}

std::pair<nlohmann::json, std::vector<Label>> read_artifact(const std::string& path, const char* kind) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open artifact: " + path);
  std::string head, body;
  if (!std::getline(f, head)) throw CorruptArtifact("artifact: missing header");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(head);
  } catch (const nlohmann::json::exception&) {
    throw CorruptArtifact("artifact: header is not valid JSON");
  }
  if (!std::getline(f, body) || f.eof()) throw CorruptArtifact("artifact: payload truncated");
  try {
    if (h.at("format") != "eplab-labels-1" || h.at("kind") != kind)
      throw CorruptArtifact(std::string("artifact: expected kind ") + kind);
    auto labels = decode_rle(body);
    if (labels.size() != h.at("length").get<std::size_t>())
      throw CorruptArtifact("artifact: payload length does not match header");
    if (fnv1a(labels) != h.at("checksum").get<std::uint64_t>())
      throw CorruptArtifact("artifact: checksum mismatch");
    return {h, std::move(labels)};
  } catch (const nlohmann::json::exception&) {
    throw CorruptArtifact("artifact: header fields missing or mistyped");
  }
}

}  // namespace

void store(const MonomerSequence& w, const std::string& path) {
  write_artifact(path, {{"kind", "monomers"}, {"seed", seed_json(w.seed)}}, w.labels);
}

void store(const BlockField& f, const std::string& path) {
  write_artifact(path, {{"kind", "blocks"}, {"N", f.N}, {"p", f.p}, {"seed", seed_json(f.seed)}}, f.labels);
}

MonomerSequence load_monomers(const std::string& path) {
  auto [h, labels] = read_artifact(path, "monomers");
  MonomerSequence w;
  try {
    w.seed = seed_from_json(h.at("seed"));
  } catch (const nlohmann::json::exception&) {
    throw CorruptArtifact("artifact: bad seed record");
  }
  w.labels = std::move(labels);
  return w;
}

BlockField load_blocks(const std::string& path) {
  auto [h, labels] = read_artifact(path, "blocks");
  BlockField f;
  try {
    f.N = h.at("N").get<int>();
    f.p = h.at("p").get<double>();
    f.seed = seed_from_json(h.at("seed"));
  } catch (const nlohmann::json::exception&) {
    throw CorruptArtifact("artifact: bad block header");
  }
  if (static_cast<std::size_t>(f.N) * static_cast<std::size_t>(f.N) != labels.size())
    throw CorruptArtifact("artifact: block count does not match N");
  f.labels = std::move(labels);
  return f;
}

}  // namespace eplab
