#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <exception>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "construction.hpp"
#include "error.hpp"
#include "io.hpp"
#include "semigroup.hpp"
#include "sequences.hpp"
#include "starnorm.hpp"

namespace jamison {

enum class command_kind { analyze, construct, verify, semigroup, starnorm, report };

inline const char* to_string(command_kind c) {
  switch (c) {
    case command_kind::analyze: return "analyze";
    case command_kind::construct: return "construct";
    case command_kind::verify: return "verify";
    case command_kind::semigroup: return "semigroup";
    case command_kind::starnorm: return "starnorm";
    case command_kind::report: return "report";
  }
  return "analyze";
}

inline command_kind parse_command(const std::string& s) {
  for (auto c : {command_kind::analyze, command_kind::construct, command_kind::verify, command_kind::semigroup,
                 command_kind::starnorm, command_kind::report})
    if (s == to_string(c)) return c;
  throw error(errc::config_invalid, "unknown command " + s);
}

struct run_config {
  command_kind command = command_kind::analyze;
  std::string sequence_path;
  std::string real_sequence_path;
  std::string construction_path;
  std::string out_path;  // construct: construction file (default out_dir/construction.json)
  std::filesystem::path out_dir = ".";

  // analyze
  std::vector<std::size_t> horizons{10, 100, 1000};
  double resolution = 1e-6;
  int refine_steps = 20;

  // construct / verify / semigroup / report
  std::optional<int> levels;
  std::optional<int> fibers;
  std::string weights = "linear";
  std::size_t horizon = 8;
  int search_budget = 8;
  norm_kind p = norm_kind::two;
  std::optional<std::size_t> powers;

  // starnorm
  std::string mode = "bound";
  int J = 8;
  std::optional<std::size_t> K;
  std::size_t beam_width = 32;
  std::size_t samples = 8;
  std::optional<std::size_t> depth;

  std::uint64_t seed = 0;
  std::optional<std::string> timestamp;  // fixed value for reproducible reports
};

inline json config_to_json(const run_config& c) {
  json j{{"command", to_string(c.command)}, {"out_dir", c.out_dir.string()}, {"seed", c.seed}};
  auto opt = [&j](const char* key, const auto& v) {
    if (v) j[key] = *v;
  };
  switch (c.command) {
    case command_kind::analyze:
      j["sequence"] = c.sequence_path;
      j["horizons"] = c.horizons;
      j["resolution"] = c.resolution;
      j["refine_steps"] = c.refine_steps;
      break;
    case command_kind::construct:
      j["sequence"] = c.sequence_path;
      opt("levels", c.levels);
      opt("fibers", c.fibers);
      j["weights"] = c.weights;
      j["horizon"] = c.horizon;
      j["search_budget"] = c.search_budget;
      j["out"] = c.out_path;
      break;
    case command_kind::verify:
      j["construction"] = c.construction_path;
      j["p"] = to_string(c.p);
      opt("powers", c.powers);
      opt("levels", c.levels);
      opt("fibers", c.fibers);
      break;
    case command_kind::semigroup:
      j["construction"] = c.construction_path;
      j["real_sequence"] = c.real_sequence_path;
      opt("powers", c.powers);
      opt("levels", c.levels);
      opt("fibers", c.fibers);
      break;
    case command_kind::starnorm:
      j["sequence"] = c.sequence_path;
      j["mode"] = c.mode;
      j["J"] = c.J;
      opt("K", c.K);
      j["beam_width"] = c.beam_width;
      j["samples"] = c.samples;
      opt("depth", c.depth);
      break;
    case command_kind::report:
      j["construction"] = c.construction_path;
      opt("fibers", c.fibers);
      break;
  }
  return j;
}

/// Reads {J, K, beam_width} overrides for starnorm.
inline void apply_star_config(run_config& c, const json& j) {
  try {
    if (j.contains("J")) c.J = j.at("J").get<int>();
    if (j.contains("K")) c.K = j.at("K").get<std::size_t>();
    if (j.contains("beam_width")) c.beam_width = j.at("beam_width").get<std::size_t>();
  } catch (const json::exception& e) {
    throw error(errc::config_invalid, std::string("starnorm config: ") + e.what());
  }
}

struct run_result {
  int exit_code = 0;
  json report;
  std::vector<std::filesystem::path> artifacts;
};

namespace detail {

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Uniform [0,1) from 53 generator bits (same stream on every standard library).
inline double unit_uniform(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

inline std::string fmt(double x) { return format_double(x); }
inline std::string fmt(bool b) { return b ? "true" : "false"; }
template <class Int>
  requires std::is_integral_v<Int>
inline std::string fmt(Int v) { return std::to_string(v); }

struct context {
  const run_config& cfg;
  json result = json::object();
  json failures = json::array();
  std::vector<std::filesystem::path> artifacts;

  void write_csv(const std::string& name, const csv_table& t) {
    const auto path = cfg.out_dir / name;
    t.write(path);
    artifacts.push_back(path);
  }
  void fail(const std::string& invariant, json detail) {
    failures.push_back(json{{"invariant", invariant}, {"detail", std::move(detail)}});
  }
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw error(errc::config_invalid, what);
}

inline weight_schedule load_weights(const std::string& spec, int levels) {
  if (spec == "linear") return weight_schedule::linear(levels);
  const json j = read_json_file(spec);
  weight_schedule w;
  try {
    if (j.is_array()) {
      w.w = j.get<std::vector<double>>();
    } else {
      w.w = j.at("w").get<std::vector<double>>();
      w.model_C = j.value("model_C", 1.0);
      w.model_M = j.value("model_M", std::vector<double>{});
    }
  } catch (const json::exception& e) {
    throw error(errc::config_invalid, std::string("weights: ") + e.what());
  }
  return w;
}

inline json budgets_json(const shift_construction& c) {
  json a = json::array();
  for (const auto& b : c.budgets) a.push_back(budget_to_json(b));
  return a;
}

inline csv_table budgets_csv(const shift_construction& c) {
  csv_table t({"level", "gap", "gap_bound", "gap_ratio_ok", "a_norm", "b_norm", "eigvec_budget", "eigvec_budget_ok",
               "tail_sum_max", "tail_budget", "tail_sum_ok", "search_eta", "attempts"});
  for (const auto& b : c.budgets)
    t.row({fmt(b.level), fmt(b.gap), fmt(b.gap_bound), fmt(b.gap_ratio_ok), fmt(b.a_norm), fmt(b.b_norm),
           fmt(b.eigvec_budget), fmt(b.eigvec_budget_ok), fmt(b.tail_sum_max), fmt(b.tail_budget), fmt(b.tail_sum_ok),
           fmt(b.search_eta), fmt(b.attempts)});
  return t;
}

inline void report_budget_failures(context& ctx, const shift_construction& c) {
  for (const auto& b : c.budgets)
    if (!b.certified()) ctx.fail("budget_" + b.failing_predicate(), budget_to_json(b));
}

struct loaded_construction {
  shift_construction c;
  int fibers = 2;
};

inline loaded_construction open_construction(const run_config& cfg) {
  require(!cfg.construction_path.empty(), "--construction is required");
  const json j = read_json_file(cfg.construction_path);
  loaded_construction lc{construction_from_json(j), 2};
  lc.fibers = cfg.fibers ? *cfg.fibers : j.value("fibers", 2);
  require(lc.fibers >= 1, "fibers must be >= 1");
  return lc;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline void run_analyze(context& ctx) {
  const auto& cfg = ctx.cfg;
  require(!cfg.sequence_path.empty(), "--sequence is required");
  require(cfg.resolution > 0.0, "resolution must be positive");
  const auto seq = load_sequence(cfg.sequence_path);
  classify_options opts;
  opts.resolution = cfg.resolution;
  opts.refine_steps = cfg.refine_steps;
  const auto cls = classify_jamison(seq, cfg.horizons, opts);
  csv_table t({"horizon", "epsilon_hat_torus", "epsilon_hat_chord", "witness", "certified_lower_torus", "domain_floor",
               "grid_resolution", "boundary_limited"});
  json rows = json::array();
  for (const auto& r : cls.table) {
    t.row({fmt(r.horizon), fmt(r.epsilon_hat_torus), fmt(r.epsilon_hat), fmt(r.witness.theta()),
           fmt(r.certified_lower_torus), fmt(r.domain_floor), fmt(r.grid_resolution), fmt(r.boundary_limited)});
    rows.push_back(json{{"horizon", r.horizon},
                        {"epsilon_hat_torus", r.epsilon_hat_torus},
                        {"epsilon_hat_chord", r.epsilon_hat},
                        {"witness", r.witness.theta()},
                        {"certified_lower_torus", r.certified_lower_torus},
                        {"domain_floor", r.domain_floor},
                        {"boundary_limited", r.boundary_limited}});
  }
  ctx.write_csv("separation.csv", t);
  ctx.result = json{{"verdict", to_string(cls.verdict)},
                    {"heuristic", cls.heuristic},
                    {"floor", cls.floor},
                    {"decay_exponent", cls.decay_exponent},
                    {"separation", rows}};
}

inline void run_construct(context& ctx) {
  const auto& cfg = ctx.cfg;
  require(!cfg.sequence_path.empty(), "--sequence is required");
  const int L = cfg.levels.value_or(8);
  const int I = cfg.fibers.value_or(2);
  require(L >= 2, "levels must be >= 2");
  require(I >= 1, "fibers must be >= 1");
  require(cfg.search_budget >= 0, "search budget must be >= 0");
  const auto seq = load_sequence(cfg.sequence_path);
  const auto w = load_weights(cfg.weights, L);
  construction_options opts;
  opts.search_budget = cfg.search_budget;
  const auto c = build_construction(seq, L, cfg.horizon, w, opts);
  const std::filesystem::path out = cfg.out_path.empty() ? cfg.out_dir / "construction.json" : std::filesystem::path(cfg.out_path);
  save_construction(out, c, I);
  ctx.artifacts.push_back(out);
  ctx.write_csv("budgets.csv", budgets_csv(c));
  report_budget_failures(ctx, c);
  ctx.result = json{{"construction", out.string()},
                    {"levels", L},
                    {"fibers", I},
                    {"certified", c.certified()},
                    {"gaps", c.gaps},
                    {"budgets", budgets_json(c)}};
}

inline void run_verify(context& ctx) {
  const auto& cfg = ctx.cfg;
  auto lc = open_construction(cfg);
  const auto& c = lc.c;
  const int L = cfg.levels.value_or(c.levels());
  const std::size_t P = cfg.powers.value_or(c.horizon);
  if (!c.certified()) {
    report_budget_failures(ctx, c);
    ctx.result = json{{"certified", false}, {"budgets", budgets_json(c)}};
    return;
  }
  const auto rep = verify_partial_power_bound(c, L, lc.fibers, P, cfg.p);
  csv_table t({"k", "n_k", "norm_diff", "norm_T", "analytic_bound", "pass"});
  json rows = json::array();
  for (const auto& r : rep.rows) {
    t.row({fmt(r.k), fmt(r.n_k), fmt(r.norm_diff), fmt(r.norm_T), fmt(r.analytic_bound), fmt(r.pass)});
    json row{{"k", r.k}, {"n_k", r.n_k}, {"norm_diff", r.norm_diff}, {"norm_T", r.norm_T},
             {"analytic_bound", r.analytic_bound}, {"pass", r.pass}};
    if (!r.pass) ctx.fail("power_bound", row);
    rows.push_back(std::move(row));
  }
  ctx.write_csv("norms.csv", t);

  csv_table e({"n", "j", "distance", "budget", "pass"});
  json chain = json::array();
  for (int n = 3; n <= L; ++n) {
    const double dist = eigenvector_increment(c, n).total;
    const double budget = std::ldexp(1.0, -n);
    const bool ok = dist <= budget;
    e.row({fmt(n), fmt(fiber_map(n)), fmt(dist), fmt(budget), fmt(ok)});
    json row{{"n", n}, {"j", fiber_map(n)}, {"distance", dist}, {"budget", budget}, {"pass", ok}};
    if (!ok) ctx.fail("eigenvector_cauchy", row);
    chain.push_back(std::move(row));
  }
  ctx.write_csv("eigenvectors.csv", e);
  ctx.result = json{{"p", to_string(cfg.p)},
                    {"levels", L},
                    {"fibers", lc.fibers},
                    {"powers", P},
                    {"all_pass", rep.all_pass},
                    {"anomaly", rep.anomaly},
                    {"fiber_truncation_bound", rep.fiber_truncation_bound},
                    {"norms", rows},
                    {"eigenvector_cauchy", chain}};
}

inline void run_semigroup(context& ctx) {
  const auto& cfg = ctx.cfg;
  auto lc = open_construction(cfg);
  const auto& c = lc.c;
  const int L = cfg.levels.value_or(c.levels());
  const std::size_t P = cfg.powers.value_or(c.horizon);
  index_sequence realseq = [&] {
    if (!cfg.real_sequence_path.empty()) return load_sequence(cfg.real_sequence_path);
    std::vector<double> t{1.0};
    for (std::size_t k = 1; k < c.seq.size(); ++k) t.push_back(c.seq[k] + 0.5);
    return index_sequence(t, sequence_kind::real);
  }();
  require(P <= c.seq.size() && P <= realseq.size(), "powers exceed the sequence length");
  const auto op = assemble_operator(c, L, lc.fibers);
  const auto sg = principal_log(op);

  const matrix T = op.dense();
  const double roundtrip = spectral_norm(expm(sg.generator()) - T).upper / spectral_norm(T).value;
  if (!(roundtrip <= 1e-10)) ctx.fail("exp_log_roundtrip", json{{"relative_error", roundtrip}});

  const auto lat = check_lattice(sg, c.seq, P);
  csv_table lt({"k", "n_k", "relative_error", "pass"});
  json lrows = json::array();
  for (const auto& r : lat.rows) {
    lt.row({fmt(r.k), fmt(r.n_k), fmt(r.relative_error), fmt(r.pass)});
    json row{{"k", r.k}, {"n_k", r.n_k}, {"relative_error", r.relative_error}, {"pass", r.pass}};
    if (!r.pass) ctx.fail("lattice", row);
    lrows.push_back(std::move(row));
  }
  ctx.write_csv("lattice.csv", lt);

  const auto spec = generator_spectrum_check(sg);
  if (!spec.pass)
    ctx.fail("generator_spectrum", json{{"max_real_part", spec.max_real_part}, {"max_deviation", spec.max_deviation},
                                        {"spectral_mapping_deviation", spec.spectral_mapping_deviation}});
  const double bnorm = shift_norm(op);
  if (!(bnorm < 1.0 / 3.0)) ctx.fail("shift_norm", json{{"norm", bnorm}});

  const auto bd = bounded_along(sg, realseq, P);
  csv_table bt({"k", "t_k", "n_k", "norm_t", "norm_n", "ratio", "pass"});
  json brows = json::array();
  for (const auto& r : bd.rows) {
    bt.row({fmt(r.k), fmt(r.t_k), fmt(r.n_k), fmt(r.norm_t), fmt(r.norm_n), fmt(r.ratio), fmt(r.pass)});
    json row{{"k", r.k}, {"t_k", r.t_k}, {"n_k", r.n_k}, {"norm_t", r.norm_t}, {"norm_n", r.norm_n},
             {"ratio", r.ratio}, {"pass", r.pass}};
    if (!r.pass) ctx.fail("bounded_along", row);
    brows.push_back(std::move(row));
  }
  ctx.write_csv("boundedness.csv", bt);

  ctx.result = json{{"levels", L},
                    {"fibers", lc.fibers},
                    {"log_method", to_string(sg.method())},
                    {"eig_cond", sg.eig_cond()},
                    {"roundtrip_relative_error", roundtrip},
                    {"lattice", lrows},
                    {"generator_max_real_part", spec.max_real_part},
                    {"generator_max_deviation", spec.max_deviation},
                    {"spectral_mapping_deviation", spec.spectral_mapping_deviation},
                    {"shift_norm", bnorm},
                    {"M0", bd.M0},
                    {"M0_grid", bd.M0_grid},
                    {"lipschitz", bd.lipschitz},
                    {"boundedness", brows}};
}

inline void run_starnorm(context& ctx) {
  const auto& cfg = ctx.cfg;
  require(!cfg.sequence_path.empty(), "--sequence is required");
  require(cfg.J >= 0, "J must be >= 0");
  require(cfg.beam_width >= 1, "beam width must be >= 1");
  require(cfg.samples >= 1, "samples must be >= 1");
  const auto seq = load_sequence(cfg.sequence_path);
  const std::size_t K = cfg.K.value_or(std::min<std::size_t>(seq.size(), 12));
  check_horizon(seq, K);
  star_options opts;
  opts.search.beam_width = cfg.beam_width;
  std::mt19937_64 gen(cfg.seed);
  const double two_pi = 2.0 * std::numbers::pi;
  json summary{{"mode", cfg.mode}, {"J", cfg.J}, {"K", K}, {"beam_width", cfg.beam_width}};

  if (cfg.mode == "bound") {
    const std::size_t P = std::min<std::size_t>(7, seq.size());
    std::vector<exp_span> samples;
    for (std::size_t s = 0; s < cfg.samples; ++s) samples.push_back(exp_span::single(two_pi * unit_uniform(gen)));
    for (std::size_t s = 0; s < cfg.samples; ++s) {
      const double eta = two_pi * unit_uniform(gen);
      const double offset = two_pi * unit_uniform(gen) * std::pow(10.0, -static_cast<double>(s % 4));
      samples.push_back(exp_span::difference(eta, eta + offset));
    }
    samples.emplace_back();
    const auto rep = verify_translation_bound(seq, samples, cfg.J, K, P, opts);
    csv_table t({"sample", "terms", "k", "n_k", "left_upper", "right", "ratio", "asserted", "pass"});
    for (const auto& r : rep.rows) {
      t.row({fmt(r.sample), fmt(samples[r.sample].size()), fmt(r.k), fmt(r.n_k), fmt(r.left), fmt(r.right), fmt(r.ratio),
             fmt(r.asserted), fmt(r.pass)});
      if (!r.pass)
        ctx.fail("translation_bound", json{{"sample", r.sample}, {"k", r.k}, {"left", r.left}, {"right", r.right}});
    }
    ctx.write_csv("translation.csv", t);
    summary["powers"] = P;
    summary["max_ratio"] = rep.max_ratio;
    summary["all_pass"] = rep.all_pass;
    summary["rows"] = rep.rows.size();
  } else if (cfg.mode == "pairs") {
    tuple_search_options topts;
    topts.beam_width = cfg.beam_width;
    csv_table t({"eta", "xi", "d_metric", "j", "d_j", "bound", "exhaustive", "pass"});
    bool all = true;
    for (std::size_t s = 0; s < cfg.samples; ++s) {
      const double eta = two_pi * unit_uniform(gen), xi = two_pi * unit_uniform(gen);
      const auto rep = dj_bound_check(eta, xi, seq, cfg.J, K, topts);
      for (const auto& r : rep.rows) {
        t.row({fmt(eta), fmt(xi), fmt(rep.d), fmt(r.j), fmt(r.d_j), fmt(r.bound), fmt(r.exhaustive), fmt(r.pass)});
        if (!r.pass) ctx.fail("dj_bound", json{{"eta", eta}, {"xi", xi}, {"j", r.j}, {"d_j", r.d_j}, {"bound", r.bound}});
      }
      all = all && rep.all_pass;
    }
    ctx.write_csv("dj.csv", t);
    summary["pairs"] = cfg.samples;
    summary["all_pass"] = all;
  } else if (cfg.mode == "field") {
    require(cfg.samples >= 2, "field mode needs at least two samples");
    const std::size_t depth = cfg.depth.value_or(std::min<std::size_t>(seq.size() - 1, 8));
    std::vector<double> thetas;
    for (const auto& p : lacunary_digit_points(seq, depth, cfg.samples, cfg.seed)) thetas.push_back(p.theta());
    const auto rep = eigenfield_modulus(seq, thetas, cfg.J, K, opts);
    csv_table t({"eta", "xi", "base", "d_metric", "star_searched", "star_upper", "ratio"});
    for (const auto& r : rep.rows) {
      t.row({fmt(r.eta), fmt(r.xi), fmt(r.base), fmt(r.d_metric), fmt(r.star_searched), fmt(r.star_upper), fmt(r.ratio)});
      if (!r.pass) ctx.fail("eigenfield_ratio", json{{"eta", r.eta}, {"xi", r.xi}, {"ratio", r.ratio}});
    }
    ctx.write_csv("eigenfield.csv", t);
    summary["depth"] = depth;
    summary["C_impl"] = rep.C_impl;
    summary["max_ratio"] = rep.max_ratio;
    summary["all_pass"] = rep.all_pass;
  } else {
    throw error(errc::config_invalid, "mode must be bound, pairs or field");
  }
  ctx.result = summary;
}

inline void run_report(context& ctx) {
  auto lc = open_construction(ctx.cfg);
  const auto& c = lc.c;
  csv_table g({"level", "theta", "anchor", "gap"});
  for (int l = 1; l <= c.levels(); ++l)
    g.row({fmt(l), precise_to_string(c.thetas[l - 1]), fmt(c.anchors[l - 1]), fmt(c.gap(l))});
  ctx.write_csv("gaps.csv", g);
  csv_table a({"i", "level", "alpha"});
  json alphas = json::array();
  for (int i = 1; i <= lc.fibers; ++i)
    for (int l = 1; l < c.levels(); ++l) {
      a.row({fmt(i), fmt(l), fmt(c.alpha(i, l))});
      alphas.push_back(json{{"i", i}, {"level", l}, {"alpha", c.alpha(i, l)}});
    }
  ctx.write_csv("alpha.csv", a);
  ctx.write_csv("budgets.csv", budgets_csv(c));
  report_budget_failures(ctx, c);
  ctx.result = json{{"levels", c.levels()},
                    {"fibers", lc.fibers},
                    {"horizon", c.horizon},
                    {"certified", c.certified()},
                    {"gaps", c.gaps},
                    {"alphas", alphas},
                    {"nuclear_partial_sum", c.nuclear_partial_sum()},
                    {"budgets", budgets_json(c)}};
}

}  // namespace detail

/// Runs one command, writes out_dir/report.json and returns the exit code:
/// 0 success, 1 configuration or I/O error, 2 failed invariant, 3 infeasible construction.
inline run_result run(const run_config& cfg, std::ostream& log = std::cerr) {
  run_result out;
  detail::context ctx{cfg};
  std::string status = "ok";
  json problem;
  try {
    switch (cfg.command) {
      case command_kind::analyze: detail::run_analyze(ctx); break;
      case command_kind::construct: detail::run_construct(ctx); break;
      case command_kind::verify: detail::run_verify(ctx); break;
      case command_kind::semigroup: detail::run_semigroup(ctx); break;
      case command_kind::starnorm: detail::run_starnorm(ctx); break;
      case command_kind::report: detail::run_report(ctx); break;
    }
    out.exit_code = ctx.failures.empty() ? 0 : 2;
    if (out.exit_code == 2) status = "assertion_failed";
  } catch (const budget_infeasible& e) {
    out.exit_code = 3;
    status = "infeasible";
    problem = json{{"error", to_string(e.code())}, {"level", e.level()}, {"predicate", e.predicate()}, {"message", e.what()}};
  } catch (const error& e) {
    out.exit_code = e.code() == errc::budgets_not_certified ? 2 : 1;
    status = out.exit_code == 2 ? "assertion_failed" : "config_error";
    problem = json{{"error", to_string(e.code())}, {"message", e.what()}};
  } catch (const std::exception& e) {
    out.exit_code = 2;
    status = "internal_error";
    problem = json{{"error", "Internal"}, {"message", e.what()}};
  }

  out.report = json{{"command", to_string(cfg.command)},
                    {"status", status},
                    {"exit_code", out.exit_code},
                    {"config", config_to_json(cfg)},
                    {"result", ctx.result},
                    {"failures", ctx.failures}};
  if (!problem.is_null()) out.report["problem"] = problem;
  out.report["timestamp"] = cfg.timestamp ? *cfg.timestamp : detail::utc_timestamp();

  if (!problem.is_null()) log << "jamison " << to_string(cfg.command) << ": " << problem.at("message").get<std::string>() << '\n';
  for (const auto& f : ctx.failures) log << "failed invariant: " << f.dump() << '\n';
  try {
    const auto path = cfg.out_dir / "report.json";
    write_json_file(path, out.report);
    ctx.artifacts.push_back(path);
  } catch (const std::exception& e) {
    log << "jamison: " << e.what() << '\n';
    if (out.exit_code == 0) out.exit_code = 1;
  }
  out.artifacts = std::move(ctx.artifacts);
  return out;
}

}  // namespace jamison
