#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "locus/calibrate.hpp"
#include "locus/coeffs.hpp"
#include "locus/energy.hpp"
#include "locus/errors.hpp"
#include "locus/exponents.hpp"
#include "locus/grid.hpp"
#include "locus/io.hpp"
#include "locus/localization.hpp"
#include "locus/solver.hpp"

namespace locus {

using Json = nlohmann::ordered_json;

inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return Complex{j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2)
    return Complex{j[0].get<double>(), j[1].get<double>()};
  throw ConfigInvalid("complex values must be a number or an [re, im] pair");
}

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

struct ExperimentConfig {
  CoefficientPair pair{Complex{1, 0}, Complex{1, 0}, 0.5};
  Domain domain = Domain::interval(-1.0, 1.0);
  BoundaryKind bc = BoundaryKind::kDirichlet;
  double h = 0.01;
  Json forcing;  // descriptor, resolved by make_forcing
  SolverConfig solver;
  std::vector<Point> centers;
  double rho0 = 0.0, rho1 = 0.0;
  int n_rho_samples = 64;
  double c_eff = 1.0;
  bool calibrate_c_eff = false;
  std::string outputs = ".";
  uint64_t seed = 0;
};

inline Domain domain_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const auto& b = j.at("bounds");
  if (kind == "interval") return Domain::interval(b.at(0), b.at(1));
  if (kind == "rectangle") return Domain::rectangle(b.at(0), b.at(1), b.at(2), b.at(3));
  if (kind == "radial") return Domain::radial(b.at(b.size() - 1), j.at("N").get<int>());
  throw ConfigInvalid("unknown domain kind: " + kind);
}

inline ExperimentConfig parse_config(const Json& j) {
  ExperimentConfig cfg;
  try {
    const Json& p = j.at("problem");
    const Complex a = complex_from_json(p.at("a"));
    const Complex b = complex_from_json(p.at("b"));
    const Complex c = p.contains("c") ? complex_from_json(p.at("c")) : Complex{0, 0};
    cfg.pair = CoefficientPair(a, b, p.at("m").get<double>(), c);
    cfg.domain = domain_from_json(p.at("domain"));
    const std::string bc = p.at("bc").get<std::string>();
    if (bc == "dirichlet")
      cfg.bc = BoundaryKind::kDirichlet;
    else if (bc == "neumann")
      cfg.bc = BoundaryKind::kNeumann;
    else
      throw ConfigInvalid("bc must be dirichlet or neumann");
    cfg.h = p.at("h").get<double>();
    cfg.forcing = p.at("forcing");

    if (j.contains("solver")) {
      const Json& s = j.at("solver");
      if (s.contains("eps_start")) cfg.solver.eps_start = s.at("eps_start");
      if (s.contains("eps_min")) cfg.solver.eps_min = s.at("eps_min");
      if (s.contains("eps_factor")) cfg.solver.eps_factor = s.at("eps_factor");
      if (s.contains("newton_tol")) cfg.solver.newton_tol = s.at("newton_tol");
      if (s.contains("max_newton")) cfg.solver.max_newton = s.at("max_newton");
    }
    if (!(cfg.solver.eps_min < cfg.solver.eps_start) ||
        !(cfg.solver.eps_factor > 0.0 && cfg.solver.eps_factor < 1.0) ||
        !(cfg.solver.newton_tol > 0.0))
      throw ConfigInvalid("solver config: need eps_min < eps_start, factor in (0,1), positive tolerances");

    if (j.contains("analysis")) {
      const Json& an = j.at("analysis");
      for (const Json& pt : an.at("x0")) {
        if (pt.is_number())
          cfg.centers.push_back({pt.get<double>(), 0.0});
        else
          cfg.centers.push_back({pt.at(0).get<double>(),
                                 pt.size() > 1 ? pt.at(1).get<double>() : 0.0});
      }
      cfg.rho0 = an.at("rho0").get<double>();
      cfg.rho1 = an.at("rho1").get<double>();
      if (!(cfg.rho0 > 0.0 && cfg.rho0 < cfg.rho1))
        throw ConfigInvalid("analysis: need 0 < rho0 < rho1");
      if (an.contains("rho_samples")) cfg.n_rho_samples = an.at("rho_samples");
      if (an.contains("C_eff")) {
        if (an.at("C_eff").is_string() && an.at("C_eff") == "calibrate")
          cfg.calibrate_c_eff = true;
        else
          cfg.c_eff = an.at("C_eff").get<double>();
      }
    }
    if (j.contains("outputs")) cfg.outputs = j.at("outputs").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
  } catch (const Json::exception& e) {
    throw ConfigInvalid(std::string("config parse error: ") + e.what());
  }
  return cfg;
}

inline Field make_forcing(const ExperimentConfig& cfg) {
  try {
    Field F(cfg.domain, cfg.h, cfg.bc);
    const std::string type = cfg.forcing.at("type").get<std::string>();
    if (type == "zero") return F;
    if (type == "file") return read_field_file(cfg.forcing.at("path").get<std::string>());
    if (type != "bump" && type != "gaussian")
      throw ConfigInvalid("unknown forcing type: " + type);
    Point center{0.0, 0.0};
    if (cfg.forcing.contains("center")) {
      const Json& c = cfg.forcing.at("center");
      if (c.is_number())
        center = {c.get<double>(), 0.0};
      else
        center = {c.at(0).get<double>(), c.size() > 1 ? c.at(1).get<double>() : 0.0};
    }
    const Complex amp = complex_from_json(cfg.forcing.at("amp"));
    const ExactSolution ex =
        type == "bump"
            ? bump_solution(cfg.domain, amp, center, cfg.forcing.at("width").get<double>())
            : gaussian_solution(cfg.domain, amp, center,
                                cfg.forcing.at("decay").get<double>());
    F.fill([&](double x, double y) { return ex.value(x, y); });
    return F;
  } catch (const Json::exception& e) {
    throw ConfigInvalid(std::string("forcing descriptor: ") + e.what());
  }
}

/// Profile CSV with identity residuals and the coercive-inequality margin.
inline void write_profile_csv(std::ostream& os, const EnergyProfile& pr,
                              const IdentityResiduals& res,
                              const InequalityMargin& mar) {
  os << "rho,E,b,a,J,w_re,w_im,Fu_re,Fu_im,Eprime,residual_re,residual_im,margin\n";
  for (size_t i = 0; i < pr.rho.size(); ++i) {
    os << format_g17(pr.rho[i]) << "," << format_g17(pr.E[i]) << ","
       << format_g17(pr.bmass[i]) << "," << format_g17(pr.amass[i]) << ","
       << format_g17(pr.J[i]) << "," << format_g17(pr.w_re[i]) << ","
       << format_g17(pr.w_im[i]) << "," << format_g17(pr.Fu_re[i]) << ","
       << format_g17(pr.Fu_im[i]) << "," << format_g17(pr.Eprime[i]) << ","
       << format_g17(res.residual_re[i]) << "," << format_g17(res.residual_im[i])
       << "," << format_g17(mar.margin[i]) << "\n";
  }
}

inline void write_atlas_csv(std::ostream& os, const std::vector<AtlasPoint>& pts) {
  os << "re_b,im_b,label\n";
  for (const AtlasPoint& p : pts)
    os << format_g17(p.re_b) << "," << format_g17(p.im_b) << ","
       << int(p.label) << "\n";
}

inline Json verdict_to_json(const Verdict& v, double c_eff) {
  Json j;
  j["hypothesis_ok"] = v.hypothesis_ok;
  j["observed_ok"] = v.observed_ok;
  j["x0"] = Json::array({v.x0.x, v.x0.y});
  j["rho0"] = v.rho0;
  j["rho1"] = v.rho1;
  j["details"] = {
      {"inequality_ok", v.inequality_ok},
      {"energy_small", v.energy_small},
      {"decay_ok", v.decay_ok},
      {"E_rho1", v.E_rho1},
      {"E_star", v.E_star},
      {"eps_star", v.eps_star},
      {"min_margin", v.min_margin},
      {"decay_worst_ratio", v.decay_worst_ratio},
      {"inner_vanishing_radius", v.inner_vanishing},
      {"support_threshold", v.threshold},
      {"conditional_on_uniqueness", v.conditional_on_uniqueness},
      // thresholds are relative to the configured effective constant
      {"C_eff", c_eff},
  };
  return j;
}

struct ExperimentResult {
  int exit_code = 0;
  std::vector<Verdict> verdicts;
  SolveResult solve;
  std::string message;
};

/// Runs the full pipeline: admissibility gate, coercivity constants, solve,
/// per-center profiles and verdicts. Writes the field snapshot, profile CSVs,
/// verdict JSON and a manifest into cfg.outputs.
inline ExperimentResult run_experiment(const Json& config_json) {
  namespace fs = std::filesystem;
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = parse_config(config_json);

  ExperimentResult result;
  if (!admissible_existence(cfg.pair)) {
    result.exit_code = 2;
    result.message =
        "coefficient pair violates the existence condition (ab): both a and b "
        "must avoid the ray {Re<=0, Im=0} and the segment [a,b] must avoid it";
    return result;
  }

  const CoercivityCertificate cert = coercivity_constants(cfg.pair);
  const ExponentSet exps = exponent_set(cfg.pair.m, cfg.domain.ambient_N);
  double c_eff = cfg.c_eff;
  if (cfg.calibrate_c_eff) {
    const TraceEstimate est =
        trace_constant_estimate(cfg.pair.m, cfg.domain.ambient_N,
                                cfg.rho1 > 0.0 ? cfg.rho1 : 1.0);
    c_eff = recommended_c_eff(est);
  }

  Field F = make_forcing(cfg);
  const ProblemSpec spec(cfg.pair, cfg.domain, cfg.bc, F);
  result.solve = continuation_solve(spec, cfg.solver);

  fs::create_directories(cfg.outputs);
  write_field_file(cfg.outputs + "/field.dat", result.solve.u);

  Json verdicts = Json::array();
  bool all_observed = true, any_violation = false;
  for (size_t ci = 0; ci < cfg.centers.size(); ++ci) {
    const Point x0 = cfg.centers[ci];
    const Verdict v = localization_verdict(result.solve, spec, cert, exps, x0,
                                           cfg.rho0, cfg.rho1, c_eff, cfg.solver);
    result.verdicts.push_back(v);
    verdicts.push_back(verdict_to_json(v, c_eff));
    all_observed = all_observed && v.observed_ok;
    any_violation = any_violation || (v.hypothesis_ok && !v.observed_ok);

    const std::vector<double> rs =
        rho_samples(cfg.h, cfg.rho1, cfg.n_rho_samples);
    const EnergyProfile pr = compute_profile(result.solve.u, F, x0, rs, cfg.pair.m);
    const IdentityResiduals res = verify_identities(pr, cfg.pair);
    const InequalityMargin mar = verify_inequality(
        pr, cert, true, tol_id(cfg.h, h1_norm_sq(result.solve.u)));
    std::ofstream pcsv(cfg.outputs + "/profile_" + std::to_string(ci) + ".csv");
    write_profile_csv(pcsv, pr, res, mar);
  }

  Json summary;
  summary["converged"] = result.solve.converged;
  summary["residual_norm"] = result.solve.residual_norm;
  summary["eps_final"] = result.solve.eps_final;
  summary["newton_iterations_total"] = result.solve.newton_iterations_total;
  summary["apriori_ratio"] = result.solve.apriori_ratio;
  summary["coercivity"] = {{"lambda", cert.lambda}, {"L", cert.L}, {"M", cert.M},
                           {"objective", cert.objective}};
  summary["C_eff"] = c_eff;
  summary["verdicts"] = verdicts;
  {
    std::ofstream vj(cfg.outputs + "/verdict.json");
    vj << summary.dump(2) << "\n";
  }

  // manifest: input hash, versions, wall time (not part of the deterministic
  // artifact set)
  const auto t1 = std::chrono::steady_clock::now();
  Json manifest;
  manifest["config_hash"] = std::hash<std::string>{}(config_json.dump());
  manifest["seed"] = cfg.seed;
  manifest["format_version"] = 1;
  manifest["wall_time_s"] =
      std::chrono::duration<double>(t1 - t0).count();
  {
    std::ofstream mj(cfg.outputs + "/manifest.json");
    mj << manifest.dump(2) << "\n";
  }

  if (any_violation)
    result.exit_code = 1;  // soundness violation
  else if (cfg.centers.empty() || all_observed)
    result.exit_code = 0;
  else
    result.exit_code = 2;  // vanishing not observed, hypotheses not applicable
  return result;
}

}  // namespace locus
