// kkwres: identity suites, residue statements, boundary terms and the
// flat-torus heat-trace oracle from the command line.
//
// Exit codes: 0 no mismatch, 1 mismatch or failed numerical run, 2 usage
// error or invalid request.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "kkw/boundary.hpp"
#include "kkw/errors.hpp"
#include "kkw/heat_wres.hpp"
#include "kkw/torus.hpp"
#include "kkw/verify.hpp"

namespace {

using json = nlohmann::json;
using namespace kkw;

constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

struct Globals {
  std::string fixtures;
  bool no_timing = false;
};

BoundaryFixtures fixtures_from(const Globals& g) {
  return load_fixtures(g.fixtures.empty() ? default_fixture_path() : g.fixtures);
}

void strip_timing(std::vector<CheckRecord>& records, const Globals& g) {
  if (g.no_timing)
    for (auto& r : records) r.wall_seconds = 0.0;
}

int exit_for(const std::vector<CheckRecord>& records) {
  return summarize(records).mismatch == 0 ? 0 : kExitMismatch;
}

std::vector<int> all_grades(int n) {
  std::vector<int> out;
  for (int k = 0; k <= n; ++k) out.push_back(k);
  return out;
}

PerturbationSpec boundary_spec(const std::string& name) {
  if (name == "scalar") return PerturbationSpec::scalar();
  if (name == "one-form") return PerturbationSpec::one_form();
  if (name == "two-form") return PerturbationSpec::two_form();
  return PerturbationSpec::general(all_grades(kBoundaryDim));
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite = "all";
  int dim = 4;
  std::string format = "json";
  int curvature_sign = -1;
};

int run_verify(const VerifyArgs& a, const Globals& g) {
  VerifyOptions opt;
  opt.dim = a.dim;
  opt.curvature_sign = a.curvature_sign;
  opt.fixtures = fixtures_from(g);
  opt.catalog = load_catalog(default_catalog_path());
  auto records = run_suite(a.suite, opt);
  strip_timing(records, g);
  std::cout << (a.format == "json" ? render_json(records) : render_text(records));
  return exit_for(records);
}

// ---------------------------------------------------------------- wres

struct WresArgs {
  std::string perturbation = "scalar";
  int dim = 4;
  std::vector<int> grades;
  std::string format = "text";
};

int run_wres(const WresArgs& a) {
  const GaugeContext ctx{a.dim, -1};
  std::string statement;
  ScalarPoly density;
  const auto& p = a.perturbation;
  if (p == "product" || p == "conformal") {
    if (a.dim != 4) throw DomainError("--perturbation " + p + " is four-dimensional; use --dim 4");
  }
  if (p == "conformal") {
    const auto w = wres_conformal(ctx);
    statement = w.statement;
    density = w.integrated;
  } else {
    PerturbationSpec spec;
    if (p == "scalar") spec = PerturbationSpec::scalar();
    else if (p == "one-form") spec = PerturbationSpec::one_form_imaginary();
    else if (p == "two-form") spec = PerturbationSpec::two_form();
    else spec = PerturbationSpec::general(a.grades.empty() ? all_grades(std::min(a.dim, 4)) : a.grades);
    const WresDensity w = p == "product" ? wres_product_interior(spec, ctx) : wres_interior(spec, ctx);
    statement = w.statement;
    density = w.density;
  }
  if (a.format == "json") {
    std::cout << json{{"perturbation", p}, {"dim", a.dim}, {"statement", statement},
                      {"density", density.to_string()}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << statement << "\n" << "density: " << density.to_string() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- boundary

struct BoundaryArgs {
  std::string which;
  std::string perturbation;
  std::string format = "text";
};

int run_boundary(const BoundaryArgs& a, const Globals& g) {
  const BoundaryCase which = parse_boundary_case(a.which);
  std::string pert = a.perturbation;
  if (pert.empty()) pert = which == BoundaryCase::Proposition215 ? "one-form" : "general";
  const BoundaryResult res = boundary_phi(which, boundary_spec(pert), fixtures_from(g));
  if (a.format == "json") {
    json terms = json::array();
    for (const auto& t : res.terms)
      terms.push_back({{"name", t.name}, {"value", t.value.to_string()}, {"origin", t.origin}});
    std::cout << json{{"case", boundary_case_name(which)},
                      {"perturbation", which == BoundaryCase::Theorem32 ? "two-function" : pert},
                      {"phi", res.phi.to_string()},
                      {"terms", terms}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "Phi = " << res.phi.to_string() << "\n";
    for (const auto& t : res.terms) std::cout << "  " << t.name << " [" << t.origin << "]: " << t.value.to_string() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- torus

struct TorusArgs {
  std::string perturbation = "none";
  TorusConfig cfg;
};

int run_torus(TorusArgs a, const Globals& g) {
  a.cfg.perturbation = parse_torus_perturbation(a.perturbation);
  const TorusComparison cmp = fit_and_compare(a.cfg);
  json samples = json::array();
  for (const auto& s : cmp.samples) samples.push_back({{"t", s.t}, {"value", s.value}, {"tail_bound", s.tail_bound}});
  const json out{{"perturbation", torus_perturbation_name(a.cfg.perturbation)},
                 {"value", a.cfg.value},
                 {"cutoff", a.cfg.cutoff},
                 {"t_min", a.cfg.t_min},
                 {"t_max", a.cfg.t_max},
                 {"steps", a.cfg.steps},
                 {"representation", a.cfg.representation},
                 {"fit",
                  {{"a0", cmp.fit.a0},
                   {"a2", cmp.fit.a2},
                   {"a4", cmp.fit.a4},
                   {"max_relative_residual", cmp.fit.max_relative_residual},
                   {"condition", cmp.fit.condition}}},
                 {"predicted", {{"a0", cmp.a0_predicted}, {"a2", cmp.a2_predicted}}},
                 {"relative_error", {{"a0", cmp.a0_relative_error}, {"a2", cmp.a2_relative_error}}},
                 {"a2_symbolic", cmp.a2_symbolic},
                 {"samples", samples},
                 {"wall_time_s", g.no_timing ? 0.0 : cmp.wall_seconds}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  std::string out;
  bool no_torus = false;
};

int run_report(const ReportArgs& a, const Globals& g) {
  VerifyOptions opt;
  opt.fixtures = fixtures_from(g);
  opt.catalog = load_catalog(default_catalog_path());
  auto records = run_suite("all", opt);
  if (!a.no_torus) {
    auto torus = torus_records(opt.catalog);
    records.insert(records.end(), torus.begin(), torus.end());
  }
  strip_timing(records, g);
  const std::string body = render_json(records);
  if (a.out.empty() || a.out == "-") {
    std::cout << body;
  } else {
    std::ofstream f(a.out);
    if (!f) throw ConfigurationError("cannot write '" + a.out + "'");
    f << body;
    const ReportSummary s = summarize(records);
    std::cerr << "wrote " << a.out << ": " << s.match << " match, " << s.mismatch << " mismatch, " << s.flagged
              << " flagged-convention\n";
  }
  return exit_for(records);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Residue, heat-coefficient and boundary-term checks for perturbed Dirac operators"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--fixtures", g.fixtures, "Boundary fixture file (default: bundled)");
  app.add_flag("--no-timing", g.no_timing, "Zero all wall-time fields for byte-stable output");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run identity suites");
  verify->add_option("--suite", va.suite)->check(CLI::IsMember({"lichnerowicz", "traces", "wres", "boundary", "heat", "all"}));
  verify->add_option("--dim", va.dim, "Dimension for the dimension-generic checks (even, 4..8)");
  verify->add_option("--format", va.format)->check(CLI::IsMember({"json", "text"}));
  verify->add_option("--curvature-sign", va.curvature_sign, "Dictionary sum R_ijij = sign * s")
      ->check(CLI::IsMember({-1, 1}));

  WresArgs wa;
  auto* wres = app.add_subcommand("wres", "Residue density and statement");
  wres->add_option("--perturbation", wa.perturbation)
      ->check(CLI::IsMember({"scalar", "one-form", "two-form", "general", "product", "conformal"}));
  wres->add_option("--dim", wa.dim);
  wres->add_option("--grades", wa.grades, "Form degrees for general/product (default: all up to 4)")->delimiter(',');
  wres->add_option("--format", wa.format)->check(CLI::IsMember({"json", "text"}));

  BoundaryArgs ba;
  auto* boundary = app.add_subcommand("boundary", "Boundary term Phi");
  boundary->add_option("--case", ba.which)->required()->check(CLI::IsMember({"thm-2.10", "prop-2.15", "thm-3.2"}));
  boundary->add_option("--perturbation", ba.perturbation, "Psi for the one-operator cases (default per case)")
      ->check(CLI::IsMember({"scalar", "one-form", "two-form", "general"}));
  boundary->add_option("--format", ba.format)->check(CLI::IsMember({"json", "text"}));

  TorusArgs ta;
  auto* torus = app.add_subcommand("torus", "Flat-torus heat-trace oracle");
  torus->add_option("--perturbation", ta.perturbation)->check(CLI::IsMember({"none", "scalar", "two-form"}));
  torus->add_option("--value", ta.cfg.value, "f, or a_12 of the two-form");
  torus->add_option("--cutoff", ta.cfg.cutoff);
  torus->add_option("--tmin", ta.cfg.t_min);
  torus->add_option("--tmax", ta.cfg.t_max);
  torus->add_option("--steps", ta.cfg.steps);
  torus->add_option("--representation", ta.cfg.representation)->check(CLI::IsMember({0, 1}));

  ReportArgs ra;
  auto* report = app.add_subcommand("report", "Full JSON verification report");
  report->add_option("--out", ra.out, "Output path (default: stdout)");
  report->add_flag("--no-torus", ra.no_torus, "Skip the torus oracle records");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*verify) return run_verify(va, g);
    if (*wres) return run_wres(wa);
    if (*boundary) return run_boundary(ba, g);
    if (*torus) return run_torus(ta, g);
    if (*report) return run_report(ra, g);
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
