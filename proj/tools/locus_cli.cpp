// Command-line front end: admissibility checks, coercivity constants,
// exponent tables, localization-radius and threshold formulas, the PDE
// solver, energy-profile analysis, localization verdicts, coefficient-plane
// atlases and trace-constant calibration.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "locus/pipeline.hpp"

namespace {

using locus::Complex;
using Json = locus::Json;

Complex parse_complex(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return Complex{std::stod(s), 0.0};
  return Complex{std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

Json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw locus::ConfigInvalid("cannot open config: " + path);
  return Json::parse(is);
}

void print(const Json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"locus: localization analysis for singular stationary Schrodinger equations"};
  app.require_subcommand(1);

  std::string out_dir;
  uint64_t seed = 0;
  int threads = 1;
  app.add_option("--out", out_dir, "output directory override");
  app.add_option("--seed", seed, "seed override");
  app.add_option("--threads", threads, "worker threads (runs are deterministic)");

  std::string a_str = "1", b_str = "1", c_str = "0";
  double m = 0.5;
  int N = 1;

  auto* adm = app.add_subcommand("admissible", "existence/uniqueness admissibility of (a, b)");
  adm->add_option("--a", a_str, "a as re[,im]")->required();
  adm->add_option("--b", b_str, "b as re[,im]")->required();
  adm->add_option("--m", m, "nonlinearity exponent in (0,1)")->required();

  auto* cons = app.add_subcommand("constants", "coercivity constants L, M and the feasible interval");
  cons->add_option("--a", a_str)->required();
  cons->add_option("--b", b_str)->required();
  cons->add_option("--m", m)->required();

  double tau = 1.0;
  bool tau_given = false;
  auto* exps = app.add_subcommand("exponents", "exponent table for (m, N)");
  exps->add_option("--m", m)->required();
  exps->add_option("--N", N)->required();
  exps->add_option("--tau", tau)->each([&](const std::string&) { tau_given = true; });

  double rho0 = 0.5, rho1 = 1.0, E0 = 0.0, b0 = 0.0, b1 = 0.0, Lc = 1.0, Mc = 1.0,
         c_eff = 1.0;
  auto* rmx = app.add_subcommand("rhomax", "localization radius formula");
  rmx->add_option("--m", m)->required();
  rmx->add_option("--N", N)->required();
  rmx->add_option("--rho0", rho0)->required();
  rmx->add_option("--E0", E0)->required();
  rmx->add_option("--b0", b0)->required();
  rmx->add_option("--L", Lc)->required();
  rmx->add_option("--M", Mc)->required();
  rmx->add_option("--C_eff", c_eff);

  auto* thr = app.add_subcommand("thresholds", "energy/forcing smallness thresholds");
  thr->add_option("--m", m)->required();
  thr->add_option("--N", N)->required();
  thr->add_option("--rho0", rho0)->required();
  thr->add_option("--rho1", rho1)->required();
  thr->add_option("--L", Lc)->required();
  thr->add_option("--M", Mc)->required();
  thr->add_option("--b1", b1)->required();
  thr->add_option("--C_eff", c_eff);

  std::string config_path;
  auto* slv = app.add_subcommand("solve", "solve the PDE from a JSON problem description");
  slv->add_option("--config", config_path, "JSON config")->required();

  std::string field_path, forcing_path;
  double x0x = 0.0, x0y = 0.0;
  int n_samples = 64;
  auto* ana = app.add_subcommand("analyze", "energy profile of a stored field");
  ana->add_option("--field", field_path)->required();
  ana->add_option("--forcing", forcing_path)->required();
  ana->add_option("--a", a_str)->required();
  ana->add_option("--b", b_str)->required();
  ana->add_option("--c", c_str);
  ana->add_option("--m", m)->required();
  ana->add_option("--x0", x0x)->required();
  ana->add_option("--y0", x0y);
  ana->add_option("--rho1", rho1)->required();
  ana->add_option("--samples", n_samples);

  auto* loc = app.add_subcommand("localize", "end-to-end localization verdict");
  loc->add_option("--config", config_path)->required();

  double re_lo = -2, re_hi = 2, im_lo = -2, im_hi = 2;
  int n_atlas = 101;
  auto* atl = app.add_subcommand("atlas", "classify a b-plane grid against a fixed a");
  atl->add_option("--a", a_str)->required();
  atl->add_option("--m", m)->required();
  atl->add_option("--re-lo", re_lo);
  atl->add_option("--re-hi", re_hi);
  atl->add_option("--im-lo", im_lo);
  atl->add_option("--im-hi", im_hi);
  atl->add_option("--n", n_atlas, "samples per axis");

  double rho_cal = 1.0;
  auto* cal = app.add_subcommand("calibrate", "interpolation-trace constant estimate");
  cal->add_option("--m", m)->required();
  cal->add_option("--N", N)->required();
  cal->add_option("--rho", rho_cal);

  auto* run = app.add_subcommand("run", "full experiment pipeline from a JSON config");
  run->add_option("--config", config_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (adm->parsed()) {
      const locus::CoefficientPair p(parse_complex(a_str), parse_complex(b_str), m);
      print({{"existence", locus::admissible_existence(p)},
             {"uniqueness", locus::admissible_uniqueness(p)}});
      return 0;
    }
    if (cons->parsed()) {
      const locus::CoefficientPair p(parse_complex(a_str), parse_complex(b_str), m);
      const auto cert = locus::coercivity_constants(p);
      print({{"lambda", cert.lambda},
             {"L", cert.L},
             {"M", cert.M},
             {"objective", cert.objective},
             {"interval", {{"lo", cert.interval.lo}, {"hi", cert.interval.hi}}}});
      return 0;
    }
    if (exps->parsed()) {
      const auto s = locus::exponent_set(m, N);
      Json j{{"m", s.m},       {"N", s.N},     {"k", s.k},
             {"nu", s.nu},     {"theta", s.theta}, {"ell", s.ell},
             {"delta", s.delta}, {"p", s.p}};
      if (tau_given) {
        const auto t = locus::tau_exponents(s, tau);
        j["tau"] = tau;
        j["gamma"] = t.gamma;
        j["mu"] = t.mu;
        j["eta"] = t.eta;
      }
      print(j);
      return 0;
    }
    if (rmx->parsed()) {
      const auto s = locus::exponent_set(m, N);
      const auto lb = locus::rho_max(s, rho0, E0, b0, Lc, Mc, c_eff);
      print({{"rho_max", lb.rho_max}, {"tau_star", lb.tau_star}, {"rho0", lb.rho0}});
      return 0;
    }
    if (thr->parsed()) {
      const auto s = locus::exponent_set(m, N);
      const auto th = locus::thresholds(s, rho0, rho1, Lc, Mc, b1, c_eff);
      print({{"E_star", th.E_star}, {"eps_star", th.eps_star}, {"K", th.K},
             {"gamma", th.gamma}});
      return 0;
    }
    if (slv->parsed() || run->parsed() || loc->parsed()) {
      Json cfg = load_json(config_path);
      if (!out_dir.empty()) cfg["outputs"] = out_dir;
      if (seed != 0) cfg["seed"] = seed;
      const auto result = locus::run_experiment(cfg);
      if (!result.message.empty()) std::cerr << result.message << "\n";
      std::cout << (result.exit_code == 0
                        ? "ok"
                        : result.exit_code == 1 ? "soundness violation" : "not applicable")
                << "\n";
      return result.exit_code;
    }
    if (ana->parsed()) {
      const locus::Field u = locus::read_field_file(field_path);
      const locus::Field F = locus::read_field_file(forcing_path);
      const locus::CoefficientPair p(parse_complex(a_str), parse_complex(b_str), m,
                                     parse_complex(c_str));
      const auto rs = locus::rho_samples(u.h(), rho1, n_samples);
      const auto pr = locus::compute_profile(u, F, {x0x, x0y}, rs, m);
      const auto res = locus::verify_identities(pr, p);
      const auto cert = locus::coercivity_constants(p);
      const auto mar = locus::verify_inequality(
          pr, cert, true, locus::tol_id(u.h(), locus::h1_norm_sq(u)));
      locus::write_profile_csv(std::cout, pr, res, mar);
      return 0;
    }
    if (atl->parsed()) {
      const auto pts = locus::atlas_classify(parse_complex(a_str), m, re_lo, re_hi,
                                             n_atlas, im_lo, im_hi, n_atlas);
      locus::write_atlas_csv(std::cout, pts);
      return 0;
    }
    if (cal->parsed()) {
      const auto est = locus::trace_constant_estimate(m, N, rho_cal);
      print({{"m", est.m}, {"N", est.N}, {"rho", est.rho},
             {"C_lower", est.C_lower}, {"family_size", est.family_size},
             {"argmax", est.argmax},
             {"recommended_C_eff", locus::recommended_c_eff(est)}});
      return 0;
    }
  } catch (const locus::ConfigInvalid& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const locus::EmptyInterval& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
