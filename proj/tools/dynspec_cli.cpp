// Command-line front end: Bessel spectra, closed-form bounds and criteria,
// enclosure boundary data, norm-plane comparison grids, discretized spectra,
// Stefani sweeps, and per-eigenvalue enclosure verification.
//
// Exit codes: 0 success, 1 usage/domain error, 2 numerical non-convergence.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynspec/comparison.hpp"
#include "dynspec/constspec.hpp"
#include "dynspec/criteria.hpp"
#include "dynspec/dspec.hpp"

using nlohmann::json;
using namespace dynspec;

namespace {

// 12 significant digits, locale-independent.
std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string kind_name(SweepEventKind k) {
  switch (k) {
    case SweepEventKind::Merge: return "MERGE";
    case SweepEventKind::Cross: return "CROSS";
    case SweepEventKind::Realize: return "REALIZE";
  }
  return "?";
}

std::string case_name(BoundCase c) {
  switch (c) {
    case BoundCase::I: return "i";
    case BoundCase::II: return "ii";
    case BoundCase::III: return "iii";
  }
  return "?";
}

std::string relation_name(Relation r) {
  switch (r) {
    case Relation::A_SMALLER: return "A_SMALLER";
    case Relation::EQUAL: return "EQUAL";
    case Relation::B_SMALLER: return "B_SMALLER";
  }
  return "?";
}

std::string region_name(ExRegion r) {
  switch (r) {
    case ExRegion::OUTSIDE: return "OUTSIDE";
    case ExRegion::ON_GAMMA_EX: return "ON_GAMMA_EX";
    case ExRegion::IN_DELTA_EX: return "IN_DELTA_EX";
    case ExRegion::DEGENERATE: return "DEGENERATE";
  }
  return "?";
}

BoundaryParam parse_theta(const std::string& spec, int l) {
  if (spec == "l") return BoundaryParam::finite(static_cast<double>(l));
  if (spec == "inf" || spec == "infinity" || spec == "oo")
    return BoundaryParam::infinite();
  std::size_t pos = 0;
  const double v = std::stod(spec, &pos);
  if (pos != spec.size())
    throw std::invalid_argument("bad --theta value '" + spec + "'");
  return BoundaryParam::finite(v);
}

// Shared flags: mode index, boundary parameter, and either a profile spec or
// a pair of norms.
struct ProblemArgs {
  int l = 1;
  std::string theta_spec = "l";
  std::string profile_spec;
  double alpha_norm = -1.0;
  double alpha_prime_norm = -1.0;

  void attach(CLI::App* cmd, bool need_alpha) {
    cmd->add_option("--l", l, "spherical harmonic degree (>= 1)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--theta", theta_spec,
                    "boundary parameter: l | inf | <float>");
    if (need_alpha) {
      cmd->add_option("--profile", profile_spec,
                      "alpha profile: const:V | poly:c0,c1,... | stefani:C | @file");
      cmd->add_option("--alpha-norm", alpha_norm, "||alpha|| (with --alpha-prime-norm)");
      cmd->add_option("--alpha-prime-norm", alpha_prime_norm, "||alpha'||");
    }
  }

  ModeIndex mode() const { return ModeIndex(l); }
  BoundaryParam theta() const { return parse_theta(theta_spec, l); }

  AlphaProfile profile() const {
    if (profile_spec.empty())
      throw std::invalid_argument("this command requires --profile");
    return parse_profile_spec(profile_spec);
  }

  ProblemConstants constants() const {
    if (!profile_spec.empty())
      return make_constants(mode(), theta(), profile());
    if (alpha_norm < 0.0 || alpha_prime_norm < 0.0)
      throw std::invalid_argument(
          "provide --profile or both --alpha-norm and --alpha-prime-norm");
    return make_constants(mode(), theta(), alpha_norm, alpha_prime_norm);
  }
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  return out;
}

json constants_json(const ProblemConstants& c) {
  const auto rb = right_bound_a(c);
  return json{{"a", rb.a_theta},
              {"s", rb.s_theta},
              {"b", rb.b_theta},
              {"case", case_name(rb.case_tag)},
              {"alpha_norm", c.alpha_norm},
              {"alpha_prime_norm", c.alpha_prime_norm},
              {"lam1_theta", c.lam1_theta},
              {"lam1_inf", c.lam1_inf}};
}

int run_bessel_zeros(const ProblemArgs& pa, int count) {
  for (int k = 1; k <= count; ++k)
    std::cout << fmt12(operator_eigenvalue(pa.mode(), pa.theta(), k)) << "\n";
  return 0;
}

int run_bounds(const ProblemArgs& pa) {
  const auto c = pa.constants();
  const auto rb = right_bound_a(c);
  const auto v = classify_pair({c.alpha_norm, c.alpha_prime_norm}, c);
  std::cout << "lam1_theta = " << fmt12(c.lam1_theta) << "\n"
            << "lam1_inf = " << fmt12(c.lam1_inf) << "\n"
            << "alpha_norm = " << fmt12(c.alpha_norm) << "\n"
            << "alpha_prime_norm = " << fmt12(c.alpha_prime_norm) << "\n"
            << "a_theta = " << fmt12(rb.a_theta) << "\n"
            << "s_theta = " << fmt12(rb.s_theta) << "\n"
            << "b_theta = " << fmt12(rb.b_theta) << "\n"
            << "case = " << case_name(rb.case_tag) << "\n"
            << "relation = " << relation_name(v.relation) << "\n"
            << "subcritical_split = " << (v.subcritical_split ? "yes" : "no")
            << "\n"
            << "region = " << region_name(v.region) << "\n";
  return 0;
}

int run_enclosure(const ProblemArgs& pa, double xi_min, int points,
                  const std::string& out_path, std::string strip_path) {
  const auto c = pa.constants();
  {
    auto out = open_out(out_path);
    out << "xi,eta\n";
    const auto pts = boundary_polyline(c, xi_min, points);
    for (const auto& [xi, eta] : pts)
      out << fmt12(xi) << "," << fmt12(eta) << "\n";
    for (auto it = pts.rbegin(); it != pts.rend(); ++it)
      out << fmt12(it->first) << "," << fmt12(-it->second) << "\n";
  }
  if (strip_path.empty()) {
    strip_path = out_path;
    const auto dot = strip_path.rfind(".csv");
    if (dot != std::string::npos) strip_path.erase(dot);
    strip_path += "_strip.csv";
  }
  {
    auto out = open_out(strip_path);
    out << "xi,eta\n";
    const auto pts = strip_outline(c, xi_min, points);
    for (const auto& [xi, eta] : pts)
      out << fmt12(xi) << "," << fmt12(eta) << "\n";
    for (auto it = pts.rbegin(); it != pts.rend(); ++it)
      out << fmt12(it->first) << "," << fmt12(-it->second) << "\n";
  }
  std::cout << "wrote " << out_path << " and " << strip_path << "\n";
  return 0;
}

int run_compare(const ProblemArgs& pa, const std::string& grid_spec,
                double t_max, double s_max, const std::string& out_path) {
  const auto c = pa.constants();
  const double lt = c.lam1_theta, li = c.lam1_inf;
  int nt = 60, ns = 60;
  if (!grid_spec.empty()) {
    const auto x = grid_spec.find('x');
    if (x == std::string::npos)
      throw std::invalid_argument("--grid must look like 60x60");
    nt = std::stoi(grid_spec.substr(0, x));
    ns = std::stoi(grid_spec.substr(x + 1));
    if (nt < 1 || ns < 1) throw std::invalid_argument("--grid must be positive");
  }
  if (t_max <= 0.0) t_max = 1.2 * std::sqrt(li + lt);
  if (s_max <= 0.0) s_max = 1.2 * delta_ex_height(lt, li);

  auto curve_or_nan = [&](KCurve k, double t) {
    try {
      return k_curve(k, t, lt, li);
    } catch (const std::domain_error&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  auto out = open_out(out_path);
  out << "t,s,k1,k2,k3,k4minus,k4plus,k5,verdict\n";
  for (int i = 1; i <= nt; ++i) {
    const double t = t_max * i / nt;
    const double k1 = curve_or_nan(KCurve::K1, t);
    const double k2 = curve_or_nan(KCurve::K2, t);
    const double k3 = curve_or_nan(KCurve::K3, t);
    const double k4m = curve_or_nan(KCurve::K4Minus, t);
    const double k4p = curve_or_nan(KCurve::K4Plus, t);
    const double k5 = curve_or_nan(KCurve::K5, t);
    for (int j = 1; j <= ns; ++j) {
      const double s = s_max * j / ns;
      const auto v = classify_pair({t, s}, c);
      out << fmt12(t) << "," << fmt12(s) << "," << fmt12(k1) << ","
          << fmt12(k2) << "," << fmt12(k3) << "," << fmt12(k4m) << ","
          << fmt12(k4p) << "," << fmt12(k5) << "," << region_name(v.region)
          << "\n";
    }
  }
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

void print_report(const std::string& name, const CriterionReport& r,
                  bool as_json, json* sink) {
  if (as_json) {
    (*sink)[name] = json{{"lhs", r.lhs},
                         {"rhs", r.rhs},
                         {"margin", r.margin},
                         {"satisfied", r.satisfied}};
    return;
  }
  std::cout << name << " lhs=" << fmt12(r.lhs) << " rhs=" << fmt12(r.rhs)
            << " margin=" << fmt12(r.margin)
            << " verdict=" << (r.satisfied ? "satisfied" : "violated") << "\n";
}

int run_check(const ProblemArgs& pa, bool anti, bool st2, bool meet,
              std::optional<double> local_lam0, bool as_json) {
  const auto c = pa.constants();
  json sink;
  if (anti) print_report("anti-dynamo", anti_dynamo(c), as_json, &sink);
  if (st2) print_report("stable2", stable2(c), as_json, &sink);
  if (meet) print_report("meet", meet_criterion(c), as_json, &sink);
  if (local_lam0) {
    const double lam0 = *local_lam0;
    if (lam0 >= 0.0)
      throw std::invalid_argument("--local expects a negative unperturbed eigenvalue");
    const auto window =
        diagonal_spectrum(pa.mode(), pa.theta(), 4.0 * lam0 - 1.0);
    print_report("local", local_nonoscillation(lam0, c, window), as_json, &sink);
  }
  if (!anti && !st2 && !meet && !local_lam0)
    throw std::invalid_argument(
        "check: pick at least one of --anti-dynamo --stable2 --meet --local");
  if (as_json) std::cout << sink.dump(2) << "\n";
  return 0;
}

json spectrum_json(const ProblemArgs& pa, int grid, const SpectrumResult& r,
                   const VerifyReport* verify) {
  json eigs = json::array();
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    const auto& e = r.eigenvalues[i];
    json je{{"re", e.value.real()},
            {"im", e.value.imag()},
            {"converged", e.converged}};
    je["err"] = std::isnan(e.convergence_err) ? json() : json(e.convergence_err);
    eigs.push_back(std::move(je));
  }
  json out{{"l", pa.l},
           {"theta", pa.theta_spec},
           {"profile", pa.profile().describe()},
           {"N", grid},
           {"eigenvalues", std::move(eigs)},
           {"bounds", constants_json(pa.constants())}};
  out["events"] = json::array();
  if (verify) {
    json flags = json::array();
    for (const auto& f : verify->flags)
      flags.push_back(json{{"re", f.value.real()},
                           {"im", f.value.imag()},
                           {"tau", f.tau},
                           {"in_sigma", f.in_sigma},
                           {"strip", f.strip},
                           {"disc", f.disc},
                           {"combined", f.combined}});
    out["verify"] = json{{"flags", std::move(flags)},
                         {"all_pass", verify->all_pass}};
  }
  return out;
}

void write_spectrum_csv(std::ostream& out, const SpectrumResult& r) {
  out << "re,im,err,converged\n";
  for (const auto& e : r.eigenvalues)
    out << fmt12(e.value.real()) << "," << fmt12(e.value.imag()) << ","
        << fmt12(e.convergence_err) << "," << (e.converged ? 1 : 0) << "\n";
}

int run_spectrum(const ProblemArgs& pa, int grid, int count,
                 const std::string& format, const std::string& out_path) {
  if (grid % 2 != 0) throw std::invalid_argument("--grid must be even");
  const auto r =
      spectrum(pa.mode(), pa.theta(), pa.profile(), grid / 2, count);
  if (format == "records") {
    const json doc = spectrum_json(pa, grid, r, nullptr);
    if (out_path.empty())
      std::cout << doc.dump(2) << "\n";
    else
      open_out(out_path) << doc.dump(2) << "\n";
  } else if (format == "csv") {
    if (out_path.empty())
      write_spectrum_csv(std::cout, r);
    else {
      auto out = open_out(out_path);
      write_spectrum_csv(out, r);
    }
  } else {
    throw std::invalid_argument("--format must be csv or records");
  }
  return 0;
}

int run_verify(const ProblemArgs& pa, int grid, int count,
               const std::string& format, const std::string& out_path) {
  if (grid % 2 != 0) throw std::invalid_argument("--grid must be even");
  const auto c = pa.constants();
  const auto r =
      spectrum(pa.mode(), pa.theta(), pa.profile(), grid / 2, count);
  const auto s = assemble_selfadjoint(pa.mode(), pa.theta(), pa.profile(), grid);
  const auto ws = eig_symmetric(s.m);
  const auto rep = verify_enclosure(r, c, ws);

  if (format == "records") {
    const json doc = spectrum_json(pa, grid, r, &rep);
    if (out_path.empty())
      std::cout << doc.dump(2) << "\n";
    else
      open_out(out_path) << doc.dump(2) << "\n";
    return 0;
  }
  const auto rb = rep.bounds;
  std::cout << "a_theta = " << fmt12(rb.a_theta)
            << "  s_theta = " << fmt12(rb.s_theta)
            << "  b_theta = " << fmt12(rb.b_theta) << "\n";
  for (const auto& f : rep.flags)
    std::cout << "lambda = " << fmt12(f.value.real()) << " + "
              << fmt12(f.value.imag()) << "i  tau = " << fmt12(f.tau)
              << "  in_sigma=" << f.in_sigma << " strip=" << f.strip
              << " disc=" << f.disc << " combined=" << f.combined
              << (f.pass() ? "  PASS" : "  FAIL") << "\n";
  std::cout << "verified " << rep.flags.size() << " converged eigenvalues: "
            << (rep.all_pass ? "all pass" : "FAILURES present") << "\n";
  return 0;
}

int run_sweep(const ProblemArgs& pa, double c_from, double c_to, double c_step,
              int grid, int count, int jobs, const std::string& out_path,
              const std::string& format) {
  if (!(c_step > 0.0) || !(c_from <= c_to))
    throw std::invalid_argument("sweep: need c-from <= c-to and c-step > 0");
  if (!pa.profile_spec.empty() && pa.profile_spec != "stefani" &&
      pa.profile_spec.rfind("stefani:", 0) != 0)
    throw std::invalid_argument("sweep: only the Stefani profile family is swept");
  std::vector<double> cs;
  for (double x = c_from; x <= c_to + 1e-12; x += c_step) cs.push_back(x);
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  const auto sw =
      sweep_stefani(pa.mode(), pa.theta(), cs, grid, std::max(2, count), jobs);

  if (!out_path.empty()) {
    auto out = open_out(out_path);
    out << "c,re1,im1,err1,re2,im2,err2\n";
    for (const auto& p : sw.points) {
      const auto& e = p.spec.eigenvalues;
      out << fmt12(p.C);
      for (int i = 0; i < 2; ++i)
        out << "," << fmt12(e[i].value.real()) << "," << fmt12(e[i].value.imag())
            << "," << fmt12(e[i].convergence_err);
      out << "\n";
    }
  }
  if (format == "records") {
    json points = json::array();
    for (const auto& p : sw.points) {
      json eigs = json::array();
      for (int i = 0; i < std::min<std::size_t>(4, p.spec.eigenvalues.size());
           ++i) {
        const auto& e = p.spec.eigenvalues[i];
        eigs.push_back(json{{"re", e.value.real()},
                            {"im", e.value.imag()},
                            {"converged", e.converged}});
      }
      points.push_back(json{{"c", p.C}, {"eigenvalues", std::move(eigs)}});
    }
    json events = json::array();
    for (const auto& e : sw.events)
      events.push_back(json{{"kind", kind_name(e.kind)},
                            {"c", e.c_refined},
                            {"window", {e.c_lo, e.c_hi}}});
    std::cout << json{{"l", pa.l},
                      {"theta", pa.theta_spec},
                      {"N", grid},
                      {"points", std::move(points)},
                      {"events", std::move(events)}}
                     .dump(2)
              << "\n";
  } else {
    for (const auto& e : sw.events)
      std::cout << "event=" << kind_name(e.kind) << " c=" << fmt12(e.c_refined)
                << " window=[" << fmt12(e.c_lo) << "," << fmt12(e.c_hi) << "]\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral analysis of the mean-field alpha^2-dynamo operator"};
  app.require_subcommand(1);

  ProblemArgs pa_zeros, pa_bounds, pa_encl, pa_cmp, pa_check, pa_spec, pa_sweep,
      pa_verify;

  auto* zeros = app.add_subcommand("bessel-zeros",
                                   "eigenvalues lambda_k(theta) of the Bessel operator");
  int count_zeros = 5;
  pa_zeros.attach(zeros, false);
  zeros->add_option("--count", count_zeros, "how many")->check(CLI::PositiveNumber);

  auto* bounds = app.add_subcommand("bounds", "closed-form right bounds a, s, b");
  pa_bounds.attach(bounds, true);

  auto* encl = app.add_subcommand("enclosure", "boundary polylines as CSV");
  pa_encl.attach(encl, true);
  double xi_min = -100.0;
  int points = 200;
  std::string encl_out, strip_out;
  encl->add_option("--xi-min", xi_min, "left end of the sampled boundary");
  encl->add_option("--points", points, "samples per polyline")->check(CLI::PositiveNumber);
  encl->add_option("--out", encl_out, "output CSV (Sigma boundary)")->required();
  encl->add_option("--strip-out", strip_out, "output CSV (strip outline)");

  auto* cmp = app.add_subcommand("compare", "k-curves and Delta_ex grid as CSV");
  pa_cmp.attach(cmp, true);
  std::string grid_spec = "60x60", cmp_out;
  double t_max = 0.0, s_max = 0.0;
  cmp->add_option("--grid", grid_spec, "grid as TxS, e.g. 60x60");
  cmp->add_option("--t-max", t_max, "norm-plane t range (default from constants)");
  cmp->add_option("--s-max", s_max, "norm-plane s range (default from constants)");
  cmp->add_option("--out", cmp_out, "output CSV")->required();

  auto* check = app.add_subcommand("check", "criterion reports");
  pa_check.attach(check, true);
  bool f_anti = false, f_st2 = false, f_meet = false, f_json = false;
  std::optional<double> f_local;
  double local_val = 0.0;
  check->add_flag("--anti-dynamo", f_anti, "anti-dynamo condition");
  check->add_flag("--stable2", f_st2, "strip-bound stability condition");
  check->add_flag("--meet", f_meet, "non-oscillation at the largest unperturbed eigenvalue");
  auto* local_opt =
      check->add_option("--local", local_val, "local non-oscillation at lam0 (< 0)");
  check->add_flag("--json", f_json, "machine-readable output");

  auto* spec = app.add_subcommand("spectrum", "discretized dynamo spectrum");
  pa_spec.attach(spec, true);
  int grid_n = 800, count_spec = 12;
  std::string spec_format = "csv", spec_out;
  spec->add_option("--grid", grid_n, "fine grid N (convergence vs N/2)");
  spec->add_option("--count", count_spec, "leading eigenvalues to track");
  spec->add_option("--format", spec_format, "csv | records");
  spec->add_option("--out", spec_out, "output file (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "Stefani amplitude sweep with events");
  pa_sweep.attach(sweep, true);
  double c_from = 0.7, c_to = 1.2, c_step = 0.01;
  int sweep_grid = 800, sweep_count = 4, jobs = 0;
  std::string sweep_out, sweep_format = "events";
  sweep->add_option("--c-from", c_from, "first C");
  sweep->add_option("--c-to", c_to, "last C");
  sweep->add_option("--c-step", c_step, "C increment");
  sweep->add_option("--grid", sweep_grid, "fine grid N");
  sweep->add_option("--count", sweep_count, "leading eigenvalues per C");
  sweep->add_option("--jobs", jobs, "parallel workers (0 = hardware)");
  sweep->add_option("--out", sweep_out, "trajectory CSV");
  sweep->add_option("--format", sweep_format, "events | records");

  auto* verify = app.add_subcommand("verify", "spectrum + enclosure flags");
  pa_verify.attach(verify, true);
  int verify_grid = 800, verify_count = 12;
  std::string verify_format = "text", verify_out;
  verify->add_option("--grid", verify_grid, "fine grid N");
  verify->add_option("--count", verify_count, "leading eigenvalues to verify");
  verify->add_option("--format", verify_format, "text | records");
  verify->add_option("--out", verify_out, "output file (records only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors exit 1, --help exits 0
  }

  try {
    if (zeros->parsed()) return run_bessel_zeros(pa_zeros, count_zeros);
    if (bounds->parsed()) return run_bounds(pa_bounds);
    if (encl->parsed())
      return run_enclosure(pa_encl, xi_min, points, encl_out, strip_out);
    if (cmp->parsed())
      return run_compare(pa_cmp, grid_spec, t_max, s_max, cmp_out);
    if (check->parsed()) {
      if (local_opt->count() > 0) f_local = local_val;
      return run_check(pa_check, f_anti, f_st2, f_meet, f_local, f_json);
    }
    if (spec->parsed())
      return run_spectrum(pa_spec, grid_n, count_spec, spec_format, spec_out);
    if (sweep->parsed())
      return run_sweep(pa_sweep, c_from, c_to, c_step, sweep_grid, sweep_count,
                       jobs, sweep_out, sweep_format);
    if (verify->parsed())
      return run_verify(pa_verify, verify_grid, verify_count, verify_format,
                        verify_out);
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const MatchingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
