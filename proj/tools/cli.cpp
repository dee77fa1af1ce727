#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "eplab/blockpair.hpp"
#include "eplab/constants.hpp"
#include "eplab/dual.hpp"
#include "eplab/emulsion.hpp"
#include "eplab/error.hpp"
#include "eplab/interface.hpp"
#include "eplab/io.hpp"
#include "eplab/lattice_paths.hpp"
#include "eplab/oracle.hpp"
#include "eplab/parallel.hpp"
#include "eplab/phase.hpp"

namespace eplab::cli {

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"entropy",        "phi",     "dual",       "psi",      "gamma-star",
                                          "free-energy",    "critical-curve", "scaling", "smoothness", "validate"};
  return c;
}

std::vector<double> parse_grid(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ConfigError("grid: not a number: '" + s + "'");
    }
    if (used != s.size()) throw ConfigError("grid: not a number: '" + s + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) throw ConfigError("grid: expected start:stop:step, got '" + text + "'");
    const double a = number(parts[0]), b = number(parts[1]), h = number(parts[2]);
    if (!(h > 0.0) || b < a) throw ConfigError("grid: need step > 0 and stop >= start in '" + text + "'");
    const long n = std::lround(std::floor((b - a) / h + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * h);
  } else {
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');)
      if (!item.empty()) out.push_back(number(item));
  }
  if (out.empty()) throw ConfigError("grid: empty grid '" + text + "'");
  return out;
}

namespace {

std::vector<int> to_ints(const std::vector<double>& v, const char* what) {
  std::vector<int> out;
  for (double x : v) {
    if (x != std::floor(x) || x < 1 || x > 1e6) throw ConfigError(std::string(what) + ": sizes must be positive integers");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

template <class T>
void put(Json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
void take(const Json& j, const char* key, std::optional<T>& v) {
  if (!j.contains(key)) return;
  try {
    v = j.at(key).get<T>();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

template <class T>
void fill(std::optional<T>& v, T def) {
  if (!v) v = std::move(def);
}

}  // namespace

Json RunConfig::to_json() const {
  Json j;
  j["command"] = command;
  put(j, "alpha", alpha);
  put(j, "beta", beta);
  put(j, "p", p);
  put(j, "mu_grid", mu_grid);
  put(j, "lambda_grid", lambda_grid);
  put(j, "a_grid", a_grid);
  put(j, "alpha_grid", alpha_grid);
  put(j, "delta_grid", delta_grid);
  put(j, "L", L);
  put(j, "samples", samples);
  put(j, "seed", seed);
  put(j, "mu_max", mu_max);
  put(j, "tolerance", tolerance);
  put(j, "beta_lo", beta_lo);
  put(j, "beta_hi", beta_hi);
  put(j, "contrast_alpha", contrast_alpha);
  put(j, "h", h);
  put(j, "alpha_range", alpha_range);
  put(j, "beta_range", beta_range);
  j["format"] = format;
  return j;
}

void RunConfig::merge(const Json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  static const std::vector<std::string> known{
      "command", "alpha",     "beta",    "p",       "mu_grid",  "lambda_grid",    "a_grid", "alpha_grid",
      "delta_grid", "L",      "samples", "seed",    "mu_max",   "tolerance",      "beta_lo", "beta_hi",
      "contrast_alpha", "h",  "alpha_range", "beta_range", "threads", "out", "format"};
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("config: unknown key '" + k + "'");
  if (j.contains("command")) command = j.at("command").get<std::string>();
  take(j, "alpha", alpha);
  take(j, "beta", beta);
  take(j, "p", p);
  take(j, "mu_grid", mu_grid);
  take(j, "lambda_grid", lambda_grid);
  take(j, "a_grid", a_grid);
  take(j, "alpha_grid", alpha_grid);
  take(j, "delta_grid", delta_grid);
  take(j, "L", L);
  take(j, "samples", samples);
  take(j, "seed", seed);
  take(j, "mu_max", mu_max);
  take(j, "tolerance", tolerance);
  take(j, "beta_lo", beta_lo);
  take(j, "beta_hi", beta_hi);
  take(j, "contrast_alpha", contrast_alpha);
  take(j, "h", h);
  take(j, "alpha_range", alpha_range);
  take(j, "beta_range", beta_range);
  if (j.contains("threads")) threads = j.at("threads").get<int>();
  if (j.contains("out")) out = j.at("out").get<std::string>();
  if (j.contains("format")) format = j.at("format").get<std::string>();
}

RunConfig RunConfig::resolved() const {
  RunConfig c = *this;
  const auto& cmds = commands();
  if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end())
    throw ConfigError("unknown command '" + c.command + "'");
  if (c.format != "csv" && c.format != "json") throw ConfigError("format must be csv or json, got '" + c.format + "'");
  fill(c.seed, std::uint64_t{7});
  const std::string& k = c.command;
  if (k == "entropy") {
    fill(c.a_grid, {2.0, 2.5, 3.0, 4.0});
    fill(c.mu_grid, {1.0, 2.0, 4.0, 8.0});
    fill(c.L, {32, 64, 96});
  } else if (k == "phi") {
    fill(c.alpha, 2.0);
    fill(c.beta, 1.5);
    fill(c.mu_grid, {1.0, 1.5, 2.0, 2.5, 3.0, 4.0});
    fill(c.L, {48});
    fill(c.samples, 32);
  } else if (k == "dual") {
    fill(c.alpha, 2.0);
    fill(c.beta, 1.5);
    fill(c.lambda_grid, parse_grid("0:2:0.25"));
    fill(c.L, {64});
    fill(c.samples, 32);
  } else if (k == "psi") {
    fill(c.alpha, 3.0);
    fill(c.beta, 2.8);
    fill(c.a_grid, parse_grid("2:6:0.5"));
    fill(c.L, {48});
    fill(c.samples, 32);
    fill(c.mu_max, 20.0);
  } else if (k == "gamma-star") {
    fill(c.p, 0.8);
    fill(c.L, {16, 32, 64});
    fill(c.samples, 32);
  } else if (k == "free-energy") {
    fill(c.alpha, 0.0);
    fill(c.beta, 0.0);
    fill(c.p, 0.8);
    fill(c.L, {48});
    fill(c.samples, 32);
    fill(c.mu_max, 20.0);
  } else if (k == "critical-curve") {
    fill(c.alpha_grid, parse_grid("0.25:5:0.25"));
    fill(c.L, {32});
    fill(c.samples, 32);
    fill(c.mu_max, 6.0);
    fill(c.tolerance, 0.02);
  } else if (k == "scaling") {
    fill(c.alpha, 3.0);
    fill(c.p, 0.8);
    fill(c.delta_grid, {0.05, 0.1, 0.2, 0.4});
    fill(c.L, {48});
    fill(c.samples, 32);
    fill(c.mu_max, 20.0);
    fill(c.beta_lo, 0.0);
    fill(c.beta_hi, *c.alpha);
    fill(c.tolerance, 1e-4);
    fill(c.contrast_alpha, 0.5);
  } else if (k == "smoothness") {
    fill(c.p, 0.8);
    fill(c.alpha_range, {3.0, 3.5});
    fill(c.beta_range, {2.6, 3.0});
    fill(c.h, 0.1);
    fill(c.L, {32});
    fill(c.samples, 32);
    fill(c.mu_max, 20.0);
  } else if (k == "validate") {
    fill(c.samples, 50);
  }
  auto nonempty = [](const auto& g, const char* what) {
    if (g && g->empty()) throw ConfigError(std::string(what) + ": grid must be nonempty");
  };
  nonempty(c.mu_grid, "mu_grid");
  nonempty(c.lambda_grid, "lambda_grid");
  nonempty(c.a_grid, "a_grid");
  nonempty(c.alpha_grid, "alpha_grid");
  nonempty(c.delta_grid, "delta_grid");
  nonempty(c.L, "L");
  if (c.L)
    for (int L : *c.L)
      if (L < 1) throw ConfigError("L: sizes must be positive");
  if (c.p && !(*c.p > 0.0 && *c.p <= 1.0)) throw ConfigError("p must lie in (0, 1]");
  if (c.samples && *c.samples < 2) throw ConfigError("samples must be >= 2");
  if (c.threads < 0) throw ConfigError("threads must be >= 0");
  for (const auto* r : {&c.alpha_range, &c.beta_range})
    if (*r && ((*r)->size() != 2 || (**r)[1] < (**r)[0])) throw ConfigError("ranges must be [lo, hi] with lo <= hi");
  if (c.alpha && c.beta && k != "scaling" && !(*c.alpha >= std::abs(*c.beta)))
    throw ConfigError("need alpha >= |beta|");
  return c;
}

RunConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"Numerical lab for a directed copolymer in a random emulsion"};
  app.set_help_flag("-h,--help");
  std::string command, config_path;
  std::optional<double> alpha, beta, p, mu_max, tolerance, beta_lo, beta_hi, contrast_alpha, h;
  std::optional<std::string> mu_grid, lambda_grid, a_grid, alpha_grid, delta_grid, L, alpha_range, beta_range;
  std::optional<int> samples, threads;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, format;
  app.add_option("command", command, "Subcommand")->required()->check(CLI::IsMember(commands()));
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  app.add_option("--alpha", alpha);
  app.add_option("--beta", beta);
  app.add_option("--p", p, "Density of A blocks");
  app.add_option("--mu-grid", mu_grid, "start:stop:step or comma list");
  app.add_option("--lambda-grid", lambda_grid);
  app.add_option("--a-grid", a_grid);
  app.add_option("--alpha-grid", alpha_grid);
  app.add_option("--delta-grid", delta_grid);
  app.add_option("--L", L, "Size schedule, comma list");
  app.add_option("--samples", samples, "Replicas m");
  app.add_option("--seed", seed);
  app.add_option("--threads", threads, "Worker threads (EPLAB_THREADS if unset)");
  app.add_option("--out", out, "Output path, - for stdout");
  app.add_option("--format", format, "csv or json");
  app.add_option("--mu-max", mu_max);
  app.add_option("--tolerance", tolerance);
  app.add_option("--beta-lo", beta_lo);
  app.add_option("--beta-hi", beta_hi);
  app.add_option("--contrast-alpha", contrast_alpha);
  app.add_option("--spacing", h, "Smoothness grid spacing h");
  app.add_option("--alpha-range", alpha_range, "lo,hi");
  app.add_option("--beta-range", beta_range, "lo,hi");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  RunConfig c;
  if (!config_path.empty()) {
    Json j;
    try {
      j = Json::parse(read_text(config_path));
    } catch (const Json::exception& e) {
      throw ConfigError("config: " + std::string(e.what()));
    } catch (const std::exception& e) {
      throw ConfigError("config: cannot read '" + config_path + "': " + e.what());
    }
    c.merge(j);
  }
  c.command = command;
  auto over = [](auto& dst, const auto& src) {
    if (src) dst = *src;
  };
  over(c.alpha, alpha);
  over(c.beta, beta);
  over(c.p, p);
  over(c.mu_max, mu_max);
  over(c.tolerance, tolerance);
  over(c.beta_lo, beta_lo);
  over(c.beta_hi, beta_hi);
  over(c.contrast_alpha, contrast_alpha);
  over(c.h, h);
  over(c.samples, samples);
  over(c.seed, seed);
  over(c.threads, threads);
  over(c.out, out);
  over(c.format, format);
  if (mu_grid) c.mu_grid = parse_grid(*mu_grid);
  if (lambda_grid) c.lambda_grid = parse_grid(*lambda_grid);
  if (a_grid) c.a_grid = parse_grid(*a_grid);
  if (alpha_grid) c.alpha_grid = parse_grid(*alpha_grid);
  if (delta_grid) c.delta_grid = parse_grid(*delta_grid);
  if (L) c.L = to_ints(parse_grid(*L), "L");
  if (alpha_range) c.alpha_range = parse_grid(*alpha_range);
  if (beta_range) c.beta_range = parse_grid(*beta_range);
  return c;
}

namespace {

Json num(double v) {
  if (!std::isfinite(v)) return Json(nullptr);
  return Json(v);
}

SeedSpec seed_of(const RunConfig& c) { return SeedSpec{*c.seed, {}}; }

Output run_entropy(const RunConfig& c) {
  Output o;
  o.columns = {"kind", "x", "L", "value", "error_bound", "closed_form"};
  for (double a : *c.a_grid) {
    const auto e = kappa_estimate(a, 1.0, *c.L);
    for (std::size_t i = 0; i < e.sizes.size(); ++i)
      o.rows.push_back({"kappa_b1", a, e.sizes[i], num(e.finite_values[i]), nullptr, num(kappa_closed_b1(a))});
    o.rows.push_back({"kappa_b1", a, "inf", num(e.value), num(e.error_bound), num(kappa_closed_b1(a))});
  }
  for (double mu : *c.mu_grid) {
    const auto e = kappa_hat_estimate(mu, *c.L);
    for (std::size_t i = 0; i < e.sizes.size(); ++i)
      o.rows.push_back({"kappa_hat", mu, e.sizes[i], num(e.finite_values[i]), nullptr, nullptr});
    o.rows.push_back({"kappa_hat", mu, "inf", num(e.value), num(e.error_bound), nullptr});
  }
  o.summary["varpi"] = kVarpi;
  o.summary["varsigma"] = kVarsigma;
  return o;
}

Output run_phi(const RunConfig& c, int threads) {
  Output o;
  o.columns = {"mu", "phi", "stderr", "drift", "convention"};
  const InteractionParams p{*c.alpha, *c.beta, Convention::Shifted};
  for (double mu : *c.mu_grid) {
    const auto e = phi_estimate(p, mu, *c.L, *c.samples, seed_of(c), threads);
    o.rows.push_back({mu, num(e.mean), num(e.stderr_), num(e.drift), "shifted"});
  }
  return o;
}

Output run_dual(const RunConfig& c, int threads) {
  Output o;
  o.columns = {"lambda", "u", "stderr", "tilde_kappa"};
  const InteractionParams p{*c.alpha, *c.beta, Convention::Shifted};
  const auto curve = dual_curve(p, *c.lambda_grid, *c.L, *c.samples, seed_of(c), threads, true);
  for (std::size_t i = 0; i < curve.lambda.size(); ++i)
    o.rows.push_back({curve.lambda[i], num(curve.u[i].value), num(curve.u[i].stderr_),
                      curve.tilde_kappa.empty() ? Json(nullptr) : num(curve.tilde_kappa[i])});
  std::vector<double> u;
  for (const auto& e : curve.u) u.push_back(e.value);
  o.summary["convex"] = convex_on_grid(curve.lambda, u, 1e-9);
  return o;
}

KappaSurface default_kappa(int threads) {
  EntropyGrid g;
  g.with_kappa_hat = false;
  return KappaSurface(build_entropy_table(g, threads));
}

Output run_psi(const RunConfig& c, int threads) {
  Output o;
  o.columns = {"a", "psi_aa", "psi_ab", "psi_ab_stderr", "psi_ba", "psi_bb", "c", "b", "mu", "interface_branch"};
  const InteractionParams p{*c.alpha, *c.beta, Convention::Shifted};
  const auto kappa = default_kappa(threads);
  const auto curve = PhiCurve::compute(p, {c.L->back(), *c.mu_max, *c.samples}, seed_of(c), threads);
  const auto phi = phi_function(curve);
  PsiOptions opt;
  opt.mu_cap = std::min(opt.mu_cap, curve.mu_max());
  const auto& grid = *c.a_grid;
  const auto rows = parallel_map(grid.size(), threads, [&](std::size_t i) {
    const double a = grid[i];
    const auto ab = psi_AB(a, p, phi, kappa, opt);
    const auto ba = psi_BA(a, p, phi, kappa, opt);
    const double se = ab.interface_branch ? ab.c / a * phi.stderr_(ab.mu) : 0.0;
    return std::vector<Json>{a,          num(psi_diag(PairLabel::AA, a, p)), num(ab.value), num(se),
                             num(ba.value), num(psi_diag(PairLabel::BB, a, p)), num(ab.c),  num(ab.b),
                             num(ab.mu),  ab.interface_branch};
  });
  o.rows = rows;
  o.summary["convention"] = "shifted";
  return o;
}

Output run_gamma(const RunConfig& c, int threads) {
  Output o;
  o.columns = {"N", "gamma", "stderr", "infeasible"};
  const auto g = gamma_star(*c.p, *c.L, *c.samples, seed_of(c), threads);
  for (std::size_t i = 0; i < g.sizes.size(); ++i)
    o.rows.push_back({g.sizes[i], num(g.per_size[i].mean), num(g.per_size[i].stderr_), g.infeasible[i]});
  o.rows.push_back({"inf", num(g.value), num(g.stderr_), 0});
  o.summary["gamma_star"] = num(g.value);
  o.summary["ci_lo"] = num(g.ci_lo);
  o.summary["ci_hi"] = num(g.ci_hi);
  return o;
}

FreeEnergyContext context_of(const RunConfig& c, int threads) {
  FreeEnergyContext ctx;
  ctx.kappa = default_kappa(threads);
  const int sizes[3] = {16, 32, 64};
  ctx.gamma = gamma_star(*c.p, sizes, 32, seed_of(c), threads);
  ctx.phi = {c.L->back(), *c.mu_max, *c.samples};
  ctx.seed = seed_of(c);
  ctx.p = *c.p;
  ctx.threads = threads;
  return ctx;
}

Output run_free_energy(const RunConfig& c, int threads) {
  Output o;
  o.columns = {"alpha", "beta", "p", "f_shifted", "f_unshifted", "stderr", "gamma", "x", "y", "localized"};
  if (*c.p < kPercolationThreshold)
    throw InvalidArgument("free energy needs p >= " + format_number(kPercolationThreshold));
  const auto ctx = context_of(c, threads);
  const auto f = emulsion_point(ctx, {*c.alpha, *c.beta, Convention::Shifted});
  o.rows.push_back({*c.alpha, *c.beta, *c.p, num(f.shifted), num(f.shifted + 0.5 * *c.alpha), num(f.stderr_),
                    num(f.gamma), num(f.x), num(f.y), f.localized});
  o.summary["gamma_star"] = num(ctx.gamma.value);
  o.summary["gamma_star_stderr"] = num(ctx.gamma.stderr_);
  o.summary["varpi"] = kVarpi;
  return o;
}

Output run_critical(const RunConfig& c, int threads) {
  Output o;
  o.columns = {"alpha", "beta_c", "ci_lo", "ci_hi", "diagonal", "flagged", "probes", "max_replicas"};
  CriticalSpec spec;
  spec.criterion = {c.L->back(), *c.samples, *c.mu_max, true};
  spec.tolerance = *c.tolerance;
  const auto t = trace_curve(*c.alpha_grid, spec, seed_of(c), threads);
  for (const auto& s : t.samples)
    o.rows.push_back({s.alpha, s.beta_c, s.ci_lo(), s.ci_hi(), s.diagonal, s.flagged, s.probes, s.max_replicas});
  o.summary["alpha_star_found"] = t.alpha_star_found;
  o.summary["alpha_star_lo"] = num(t.alpha_star_lo);
  o.summary["alpha_star_hi"] = num(t.alpha_star_hi);
  o.summary["beta_star"] = num(t.beta_star);
  o.summary["monotone"] = t.monotone;
  o.summary["concave"] = t.concave;
  o.summary["alpha_star_below_beta_star"] = t.alpha_star_below_beta_star;
  return o;
}

Output run_scaling(const RunConfig& c, int threads) {
  Output o;
  o.columns = {"kind", "alpha", "delta", "value", "stderr", "ratio"};
  const auto ctx = context_of(c, threads);
  const auto t = transition_scaling(ctx, *c.alpha, *c.delta_grid, *c.beta_lo, *c.beta_hi, *c.tolerance);
  for (std::size_t i = 0; i < t.deltas.size(); ++i)
    o.rows.push_back({"T", t.alpha, t.deltas[i], num(t.T[i]), num(t.T_stderr[i]), num(t.ratio[i])});
  const auto d = diagonal_contrast(ctx, *c.contrast_alpha, *c.delta_grid);
  for (std::size_t i = 0; i < d.deltas.size(); ++i)
    o.rows.push_back({"D", d.alpha, d.deltas[i], num(d.D[i]), num(d.D_stderr[i]), num(d.D[i] / d.deltas[i])});
  o.summary["beta_c"] = num(t.beta_c);
  o.summary["slope"] = num(t.slope);
  o.summary["slope_stderr"] = num(t.slope_stderr);
  o.summary["ratio_lo"] = num(t.ratio_lo);
  o.summary["ratio_hi"] = num(t.ratio_hi);
  o.summary["positive"] = t.positive;
  o.summary["diagonal_slope"] = num(d.slope);
  o.summary["diagonal_slope_stderr"] = num(d.slope_stderr);
  return o;
}

Output run_smoothness(const RunConfig& c, int threads) {
  Output o;
  o.columns = {"alpha", "beta", "f_shifted", "noise_bound"};
  const auto ctx = context_of(c, threads);
  const auto& ar = *c.alpha_range;
  const auto& br = *c.beta_range;
  const auto r = smoothness_scan(ctx, ar[0], ar[1], br[0], br[1], *c.h);
  for (std::size_t i = 0; i < r.alphas.size(); ++i)
    for (std::size_t j = 0; j < r.betas.size(); ++j)
      o.rows.push_back({r.alphas[i], r.betas[j], num(r.f[i][j]), num(r.noise_bound)});
  o.summary["max_second_difference"] = num(r.max_second_difference);
  o.summary["max_jump"] = num(r.max_jump);
  o.summary["smooth"] = r.smooth;
  o.summary["flagged"] = r.flagged;
  return o;
}

Output run_validate(const RunConfig& c) {
  Output o;
  o.columns = {"pair", "instance", "dp", "oracle", "error", "ok"};
  const auto rep = oracle::run_oracle_matrix(seed_of(c), *c.samples);
  for (const auto& r : rep.records) o.rows.push_back({r.pair, r.instance, num(r.dp), num(r.oracle), num(r.error), r.ok});
  o.summary["records"] = rep.records.size();
  o.summary["failures"] = rep.failures;
  o.summary["passed"] = rep.ok();
  o.exit_code = rep.ok() ? 0 : 1;
  return o;
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return format_number(v.get<long long>());
  if (v.is_number_unsigned()) return format_number(static_cast<long long>(v.get<std::uint64_t>()));
  return format_number(v.get<double>());
}

}  // namespace

Output run(const RunConfig& c) {
  const int threads = resolve_threads(c.threads);
  Output o;
  const auto& k = c.command;
  if (k == "entropy") o = run_entropy(c);
  else if (k == "phi") o = run_phi(c, threads);
  else if (k == "dual") o = run_dual(c, threads);
  else if (k == "psi") o = run_psi(c, threads);
  else if (k == "gamma-star") o = run_gamma(c, threads);
  else if (k == "free-energy") o = run_free_energy(c, threads);
  else if (k == "critical-curve") o = run_critical(c, threads);
  else if (k == "scaling") o = run_scaling(c, threads);
  else if (k == "smoothness") o = run_smoothness(c, threads);
  else if (k == "validate") o = run_validate(c);
  else throw ConfigError("unknown command '" + k + "'");
  o.config = c.to_json();
  return o;
}

std::string render(const Output& out, const std::string& format) {
  if (format == "json") {
    Json j;
    j["version"] = EPLAB_VERSION;
    j["config"] = out.config;
    j["columns"] = out.columns;
    Json rows = Json::array();
    for (const auto& r : out.rows) {
      Json obj;
      for (std::size_t i = 0; i < r.size(); ++i) obj[out.columns[i]] = r[i];
      rows.push_back(std::move(obj));
    }
    j["rows"] = std::move(rows);
    j["summary"] = out.summary;
    return j.dump(2) + "\n";
  }
  CsvWriter w(out.columns);
  w.comment("version " + std::string(EPLAB_VERSION));
  w.comment("config " + out.config.dump());
  if (!out.summary.empty()) w.comment("summary " + out.summary.dump());
  for (const auto& r : out.rows) {
    std::vector<std::string> cells;
    for (const auto& v : r) cells.push_back(csv_cell(v));
    w.add(std::move(cells));
  }
  return w.str();
}

int main_entry(int argc, const char* const* argv) {
  auto diagnostic = [](const char* kind, const std::string& what) {
    Json j;
    j["error"] = kind;
    j["message"] = what;
    std::cerr << j.dump() << "\n";
  };
  RunConfig c;
  try {
    c = parse_args(argc, argv).resolved();
  } catch (const CLI::CallForHelp&) {
    std::cout << "usage: eplab <command> [--config file.json] [--alpha A] [--beta B] [--p P]\n"
                 "             [--mu-grid G] [--lambda-grid G] [--L sizes] [--samples M] [--seed S]\n"
                 "             [--threads T] [--out PATH] [--format csv|json]\n"
                 "commands:";
    for (const auto& k : commands()) std::cout << " " << k;
    std::cout << "\ngrids: start:stop:step or v1,v2,...\n";
    return 0;
  } catch (const ConfigError& e) {
    diagnostic("invalid_config", e.what());
    return 2;
  } catch (const std::exception& e) {
    diagnostic("invalid_config", e.what());
    return 2;
  }
  try {
    const auto out = run(c);
    write_text(c.out, render(out, c.format));
    return out.exit_code;
  } catch (const InvalidArgument& e) {
    diagnostic("invalid_argument", e.what());
    return 2;
  } catch (const std::exception& e) {
    diagnostic("computation_failed", e.what());
    return 3;
  }
}

}  // namespace eplab::cli
