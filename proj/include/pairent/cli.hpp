#pragma once

// Command-line front end. Every subcommand is a deterministic function of
// its input file, flags and seed.
//
// Exit codes: 0 success, 1 usage or I/O, 2 validation, 3 certification.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pairent/bounds.hpp"
#include "pairent/convexity.hpp"
#include "pairent/ensembles.hpp"
#include "pairent/error.hpp"
#include "pairent/io.hpp"
#include "pairent/measures.hpp"
#include "pairent/oracle.hpp"
#include "pairent/squeezed.hpp"

namespace pairent::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

enum Exit : int { ok = 0, usage = 1, validation = 2, certification = 3 };

/// Flags shared by all subcommands, with their documented defaults.
struct RunConfig {
  std::string log_base = "2";
  std::uint64_t seed = 1;
  std::string input;
  std::string out;
  std::string svg;
  std::size_t dim = 3;
  std::size_t num = 10'000;
  std::string members = "auto";
  std::size_t grid = 400;
  double eps = 1e-6;
  std::size_t restarts = 16;
  std::size_t iters = 2000;
  double r_min = 0.0;
  double r_max = 3.0;
  std::size_t steps = 300;

  LogBase base() const { return log_base == "e" ? LogBase::natural : LogBase::two; }
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline nlohmann::json envelope(const std::string& command, const RunConfig& cfg, bool seeded) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["tool"] = "pairent";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["log_base"] = to_string(cfg.base());
  j["seed"] = seeded ? nlohmann::json(cfg.seed) : nlohmann::json(nullptr);
  return j;
}

inline int cmd_measure(const RunConfig& cfg, std::ostream& out) {
  const auto state = io::load_state(cfg.input);
  auto j = envelope("measure", cfg, false);
  MeasureReport m;
  if (const auto* p = std::get_if<PurePairState>(&state)) {
    m = measure(*p, cfg.base());
    j["kind"] = "pure";
  } else {
    m = measure(std::get<PairDensityMatrix>(state), cfg.base());
    j["kind"] = "mixed";
  }
  j["dim"] = io::dim_of(state);
  j["S"] = m.entropy ? nlohmann::json(*m.entropy) : nlohmann::json(nullptr);
  j["D"] = m.concurrence_sum_D ? nlohmann::json(*m.concurrence_sum_D) : nlohmann::json(nullptr);
  j["N"] = m.negativity;
  j["E_N"] = m.log_negativity;
  out << j.dump(2) << '\n';
  return ok;
}

inline std::string dominant_of(const BoundReport& b) {
  if (b.F >= b.best - kTieSlack) return "F";
  if (b.G >= b.best - kTieSlack) return "G";
  return "s";
}

inline int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
  const auto state = io::load_state(cfg.input);
  const auto rho = io::as_density(state);
  const auto b = best_bound(rho, cfg.base());
  auto j = envelope("bounds", cfg, false);
  j["dim"] = rho.dim();
  j["F"] = b.F;
  j["G"] = b.G;
  j["s"] = b.s;
  j["best"] = b.best;
  j["dominant"] = dominant_of(b);
  j["N"] = b.negativity;
  out << j.dump(2) << '\n';
  return ok;
}

inline int cmd_verify_convexity(const RunConfig& cfg, std::ostream& out) {
  if (cfg.grid < 100) throw UsageError("--grid must be at least 100");
  if (!(cfg.eps > 0.0 && cfg.eps <= 1e-3)) throw UsageError("--eps must lie in (0, 1e-3]");
  std::vector<ConvexityPoint> dump;
  const auto c = scan_grid(cfg.grid, cfg.eps, cfg.base(), cfg.out.empty() ? nullptr : &dump);
  if (!cfg.out.empty()) {
    io::CsvWriter csv({"r", "g2", "alpha", "eta", "det"});
    for (const auto& p : dump) csv.row(p.r, p.g2, p.alpha, p.eta, p.det);
    io::write_text(cfg.out, csv.str());
  }
  auto j = envelope("verify-convexity", cfg, false);
  j["grid_size"] = c.grid_size;
  j["margin"] = c.margin;
  j["min_alpha"] = c.min_alpha;
  j["min_eta"] = c.min_eta;
  j["min_det"] = c.min_det;
  j["min_G10"] = c.min_G10;
  j["min_G01"] = c.min_G01;
  j["det_monotone_in_r"] = c.det_monotone_in_r;
  j["pass"] = c.pass;
  j["failures"] = nlohmann::json::array();
  for (const auto& [r, g2] : c.failures) j["failures"].push_back({r, g2});
  out << j.dump(2) << '\n';
  return c.pass ? ok : certification;
}

inline KPolicy parse_policy(const std::string& s) {
  if (s == "auto" || s == "1..d") return KPolicy::up_to_dim();
  if (s == "d..2d") return KPolicy::dim_to_twice_dim();
  try {
    std::size_t pos = 0;
    const auto k = std::stoul(s, &pos);
    if (pos == s.size() && k >= 1) return KPolicy::fixed(k);
  } catch (const std::exception&) {
  }
  throw UsageError("--members must be auto, 1..d, d..2d or a positive integer");
}

inline int cmd_sample(const RunConfig& cfg, std::ostream& out) {
  if (cfg.dim < 2) throw UsageError("--dim must be at least 2");
  if (cfg.out.empty()) throw UsageError("sample needs --out for the CSV");
  const auto policy = parse_policy(cfg.members);
  const auto res = run_fig1_experiment(cfg.dim, cfg.num, policy, cfg.seed, cfg.base());

  io::CsvWriter csv({"dim", "seed", "K", "N", "avg_entropy", "F", "G", "s", "best"});
  for (const auto& r : res.records)
    csv.row(r.dim, static_cast<unsigned long long>(r.seed), r.members, r.negativity, r.avg_entropy, r.F, r.G, r.s,
            r.best);
  io::write_text(cfg.out, csv.str());

  double fF = 0, fG = 0, fs = 0;
  dominance_fractions(res.records, fF, fG, fs);
  auto j = envelope("sample", cfg, true);
  j["dim"] = cfg.dim;
  j["num"] = cfg.num;
  j["k_policy"] = policy.describe();
  j["measure"] = "flat-dirichlet";
  j["g_violations"] = res.g_violations;
  j["f_violations"] = res.f_violations;
  j["frac_F"] = fF;
  j["frac_G"] = fG;
  j["frac_s"] = fs;
  out << j.dump(2) << '\n';

  if (!cfg.svg.empty()) {
    io::Series g{"G", "#1f77b4", {}, false}, f{"F", "#d62728", {}, false};
    for (const auto& r : res.records) {
      g.points.emplace_back(r.avg_entropy, r.G);
      f.points.emplace_back(r.avg_entropy, r.F);
    }
    io::write_text(cfg.svg, io::render_svg({g, f}, "average entropy", "bound", true));
  }
  return ok;
}

inline int cmd_squeezed(const RunConfig& cfg, std::ostream& out) {
  if (!(cfg.r_min >= 0.0) || !(cfg.r_min < cfg.r_max)) throw UsageError("need 0 <= --r-min < --r-max");
  if (cfg.steps < 2) throw UsageError("--steps must be at least 2");
  const auto rows = sweep_curve(cfg.r_min, cfg.r_max, cfg.steps, cfg.base());
  io::CsvWriter csv({"r", "S", "F", "N", "n_max", "tail_weight"});
  for (const auto& r : rows) csv.row(r.r, r.S, r.F, r.N, r.n_max, r.tail_weight);
  if (cfg.out.empty()) {
    out << csv.str();
  } else {
    io::write_text(cfg.out, csv.str());
  }
  if (!cfg.svg.empty()) {
    io::Series s{"S", "#1f77b4", {}, true}, f{"F", "#d62728", {}, true};
    for (const auto& r : rows) {
      s.points.emplace_back(r.r, r.S);
      f.points.emplace_back(r.r, r.F);
    }
    io::write_text(cfg.svg, io::render_svg({s, f}, "r", "entropy"));
  }
  return ok;
}

inline int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  const auto state = io::load_state(cfg.input);
  const auto rho = io::as_density(state);
  RoofSettings st;
  st.members = 0;
  if (cfg.members != "auto") {
    try {
      std::size_t pos = 0;
      st.members = std::stoul(cfg.members, &pos);
      if (pos != cfg.members.size()) throw UsageError("");
    } catch (const std::exception&) {
      throw UsageError("--members must be auto or a non-negative integer for oracle");
    }
  }
  st.restarts = cfg.restarts;
  st.iters = cfg.iters;
  st.seed = cfg.seed;
  st.log_base = cfg.base();

  auto j = envelope("oracle", cfg, true);
  const auto emit = [&](const RoofResult& roof) {
    j["dim"] = rho.dim();
    j["rank"] = roof.rank;
    j["members"] = roof.members;
    j["restarts_used"] = roof.restarts_used;
    j["converged"] = roof.converged;
    j["eof_estimate"] = roof.eof_estimate;
    auto& dec = j["decomposition"] = nlohmann::json::array();
    for (std::size_t k = 0; k < roof.best_decomposition.members(); ++k) {
      const auto& psi = roof.best_decomposition.states[k];
      nlohmann::json m;
      m["p"] = roof.best_decomposition.weights[k];
      for (const auto& z : psi.coeffs()) {
        m["coeffs_re"].push_back(z.real());
        m["coeffs_im"].push_back(z.imag());
      }
      dec.push_back(std::move(m));
    }
  };
  try {
    const auto rep = certify_bounds(rho, st);
    emit(rep.roof);
    j["F"] = rep.F;
    j["G"] = rep.G;
    j["s"] = rep.s;
    j["best"] = rep.best;
    j["certified"] = true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::certification_failure) throw;
    j["certified"] = false;
    j["reason"] = std::string(e.reason());
    j["message"] = e.what();
    out << j.dump(2) << '\n';
    return certification;
  }
  out << j.dump(2) << '\n';
  return ok;
}

inline int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::certification_failure:
    case ErrorKind::tolerance_exceeded: return certification;
    default: return validation;
  }
}

/// Parses `args` (without the program name) and runs one subcommand.
/// Results go to `out`; diagnostics, including the machine-readable
/// failure JSON, go to `err`.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement measures and EOF lower bounds for pair-basis states", "pairent"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  RunConfig cfg;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--log-base", cfg.log_base, "Logarithm base: 2 (bits) or e (nats)")
        ->check(CLI::IsMember({"2", "e"}));
  };
  const auto with_input = [&](CLI::App* sub) { sub->add_option("--input", cfg.input, "State file (JSON)")->required(); };

  auto* measure_cmd = app.add_subcommand("measure", "Entropy, concurrence sum, negativity, log-negativity");
  common(measure_cmd);
  with_input(measure_cmd);

  auto* bounds_cmd = app.add_subcommand("bounds", "F, G and s lower bounds on the EOF");
  common(bounds_cmd);
  with_input(bounds_cmd);

  auto* conv_cmd = app.add_subcommand("verify-convexity", "Grid certificate of the 2x2 Hessian signs");
  common(conv_cmd);
  conv_cmd->add_option("--grid", cfg.grid, "Grid points per axis (>= 100)")->capture_default_str();
  conv_cmd->add_option("--eps", cfg.eps, "Boundary margin")->capture_default_str();
  conv_cmd->add_option("--out", cfg.out, "Optional CSV heatmap (r, g2, alpha, eta, det)");

  auto* sample_cmd = app.add_subcommand("sample", "Random decompositions against the bounds");
  common(sample_cmd);
  sample_cmd->add_option("--dim", cfg.dim, "Pair dimension d")->capture_default_str();
  sample_cmd->add_option("--num", cfg.num, "Number of decompositions")->capture_default_str();
  sample_cmd->add_option("--members", cfg.members, "K policy: auto (= 1..d), d..2d, or a fixed K")
      ->capture_default_str();
  sample_cmd->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  sample_cmd->add_option("--out", cfg.out, "CSV output path")->required();
  sample_cmd->add_option("--svg", cfg.svg, "Optional scatter plot");

  auto* sq_cmd = app.add_subcommand("squeezed", "Two-mode squeezed vacuum sweep");
  common(sq_cmd);
  sq_cmd->add_option("--r-min", cfg.r_min, "Smallest squeezing")->capture_default_str();
  sq_cmd->add_option("--r-max", cfg.r_max, "Largest squeezing")->capture_default_str();
  sq_cmd->add_option("--steps", cfg.steps, "Number of r values")->capture_default_str();
  sq_cmd->add_option("--out", cfg.out, "CSV output path (stdout if omitted)");
  sq_cmd->add_option("--svg", cfg.svg, "Optional line plot");

  auto* oracle_cmd = app.add_subcommand("oracle", "Convex-roof search for the EOF (d <= 4)");
  common(oracle_cmd);
  with_input(oracle_cmd);
  oracle_cmd->add_option("--restarts", cfg.restarts, "Independent restarts")->capture_default_str();
  oracle_cmd->add_option("--iters", cfg.iters, "Passes per restart")->capture_default_str();
  oracle_cmd->add_option("--members", cfg.members, "Decomposition length K (auto = rank + 2)");
  oracle_cmd->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return usage;
  }

  const auto fail = [&](int code, std::string_view reason, const std::string& message) {
    nlohmann::json j;
    j["error"] = std::string(reason);
    j["message"] = message;
    err << j.dump() << '\n';
    return code;
  };

  try {
    if (measure_cmd->parsed()) return cmd_measure(cfg, out);
    if (bounds_cmd->parsed()) return cmd_bounds(cfg, out);
    if (conv_cmd->parsed()) return cmd_verify_convexity(cfg, out);
    if (sample_cmd->parsed()) return cmd_sample(cfg, out);
    if (sq_cmd->parsed()) return cmd_squeezed(cfg, out);
    if (oracle_cmd->parsed()) return cmd_oracle(cfg, out);
  } catch (const UsageError& e) {
    return fail(usage, "usage", e.what());
  } catch (const io::IoError& e) {
    return fail(usage, "io_error", e.what());
  } catch (const Error& e) {
    return fail(exit_for(e.kind()), e.reason(), e.what());
  }
  return usage;
}

}  // namespace pairent::cli
