#include <cstdio>
#include <filesystem>

#include "cli.hpp"
#include "doctest.h"
#include "eplab/io.hpp"

using namespace eplab;
using namespace eplab::cli;

namespace {

RunConfig args(std::vector<std::string> v) {
  std::vector<const char*> argv{"eplab"};
  for (const auto& s : v) argv.push_back(s.c_str());
  return parse_args(static_cast<int>(argv.size()), argv.data());
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / (std::string("eplab_cli_") + name)).string();
}

int run_main(std::vector<std::string> v) {
  std::vector<const char*> argv{"eplab"};
  for (const auto& s : v) argv.push_back(s.c_str());
  return main_entry(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("grid parsing") {
  CHECK(parse_grid("0:1:0.25") == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(parse_grid("1,2.5,4") == std::vector<double>{1.0, 2.5, 4.0});
  CHECK(parse_grid("0.25:5:0.25").size() == 20);
  CHECK_THROWS(parse_grid("1:0:0.5"));
  CHECK_THROWS(parse_grid("a,b"));
}

TEST_CASE("configuration resolution") {
  const auto c = args({"phi", "--alpha", "3", "--beta", "2.5", "--mu-grid", "1,2"}).resolved();
  CHECK(*c.alpha == 3.0);
  CHECK(*c.seed == 7u);
  CHECK(*c.L == std::vector<int>{48});
  const auto j = c.to_json();
  CHECK(j["command"] == "phi");
  CHECK_FALSE(j.contains("threads"));
  CHECK_FALSE(j.contains("out"));
  CHECK_THROWS_AS(args({"phi", "--alpha", "1", "--beta", "2"}).resolved(), ConfigError);
  CHECK_THROWS_AS(args({"gamma-star", "--p", "1.5"}).resolved(), ConfigError);
  CHECK_THROWS_AS(args({"nope"}).resolved(), ConfigError);
  CHECK_THROWS_AS(args({"phi", "--format", "xml"}).resolved(), ConfigError);
  const auto cc = args({"critical-curve"}).resolved();
  CHECK(cc.alpha_grid->size() == 20);
}

TEST_CASE("config file merge and flag precedence") {
  const auto path = temp_path("config.json");
  write_text(path, R"({"alpha": 2.5, "beta": 1.0, "samples": 4, "seed": 11})");
  const auto c = args({"phi", "--config", path, "--beta", "2"}).resolved();
  CHECK(*c.alpha == 2.5);
  CHECK(*c.beta == 2.0);
  CHECK(*c.samples == 4);
  CHECK(*c.seed == 11u);
  write_text(path, R"({"alpha": "oops"})");
  CHECK_THROWS(args({"phi", "--config", path}).resolved());
  std::remove(path.c_str());
}

TEST_CASE("csv format contract") {
  auto c = args({"phi", "--mu-grid", "1,2", "--L", "16", "--samples", "4"}).resolved();
  const auto out = render(run(c), "csv");
  CHECK(out.find('\r') == std::string::npos);
  CHECK(out.back() == '\n');
  CHECK(out.rfind("# version ", 0) == 0);
  CHECK(out.find("# config {\"command\":\"phi\"") != std::string::npos);
  CHECK(out.find("\nmu,phi,stderr,drift,convention\n") != std::string::npos);
  CHECK(out.find("1,-0.25") == std::string::npos);  // decimals use '.', never ','
  int data = 0;
  for (std::size_t p = out.find("convention\n") + 10; (p = out.find('\n', p + 1)) != std::string::npos;) ++data;
  CHECK(data == 2);
  const auto j = Json::parse(render(run(c), "json"));
  CHECK(j["rows"].size() == 2);
  CHECK(j["config"]["samples"] == 4);
}

TEST_CASE("output bytes do not depend on the thread count") {
  for (const char* t : {"2", "3"}) {
    auto one = args({"phi", "--mu-grid", "1,2,3", "--L", "16", "--samples", "6", "--threads", "1"}).resolved();
    auto many = args({"phi", "--mu-grid", "1,2,3", "--L", "16", "--samples", "6", "--threads", t}).resolved();
    CHECK(render(run(one), "csv") == render(run(many), "csv"));
  }
  auto g1 = args({"gamma-star", "--L", "16,32,48", "--samples", "6", "--threads", "1"}).resolved();
  auto g4 = args({"gamma-star", "--L", "16,32,48", "--samples", "6", "--threads", "4"}).resolved();
  CHECK(render(run(g1), "csv") == render(run(g4), "csv"));
}

TEST_CASE("exit codes") {
  const auto out = temp_path("out.csv");
  CHECK(run_main({"gamma-star", "--p", "1", "--L", "8,16", "--samples", "2", "--out", out}) == 0);
  CHECK(read_text(out).find("gamma_star") != std::string::npos);
  CHECK(run_main({"gamma-star", "--p", "2"}) == 2);
  CHECK(run_main({"frobnicate"}) == 2);
  CHECK(run_main({"validate", "--samples", "2", "--out", out}) == 0);
  std::remove(out.c_str());
}
