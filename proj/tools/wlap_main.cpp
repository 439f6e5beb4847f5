// wlap: spectra of weighted Laplacians on model metric measure spaces.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wlap/cli.hpp"
#include "wlap/error.hpp"

namespace {

struct Overrides {
  std::string config, out, space, basis, checks, polytope, expect, report;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> eigs;
};

void common_flags(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "JSON experiment config");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--seed", o.seed, "random seed");
  app->add_option("--tol", o.tol, "eigen-residual tolerance");
  app->add_option("--eigs", o.eigs, "number of eigenvalues");
  app->add_option("--space", o.space, "space descriptor, e.g. gaussian:n=2,lambda=0.5");
  app->add_option("--basis", o.basis, "basis descriptor, e.g. hermite:deg=30");
}

wlap::ExperimentConfig build_config(const Overrides& o, const std::vector<std::string>& forced_checks) {
  wlap::ExperimentConfig c = o.config.empty() ? wlap::ExperimentConfig{} : wlap::load_config(o.config);
  if (!o.out.empty()) c.out = o.out;
  if (o.seed) c.seed = *o.seed;
  if (o.tol) c.tol = *o.tol;
  if (o.eigs) c.eigs = *o.eigs;
  if (!o.space.empty()) c.space = o.space;
  if (!o.basis.empty()) c.basis = o.basis;
  if (!o.polytope.empty()) c.polytope = o.polytope;
  if (!o.expect.empty()) c.expect_futaki = o.expect;
  if (!o.checks.empty()) {
    c.checks.clear();
    std::stringstream ss(o.checks);
    for (std::string item; std::getline(ss, item, ',');) c.checks.push_back(item);
  }
  if (!forced_checks.empty()) c.checks = forced_checks;
  wlap::validate(c);
  return c;
}

int execute(const wlap::ExperimentConfig& c) {
  const wlap::RunReport r = wlap::run(c);
  for (const auto& path : wlap::write_outputs(r, c)) std::cout << "wrote " << path << '\n';
  for (const auto& ch : r.json["checks"]) {
    std::cout << ch["name"].get<std::string>() << ": " << ch["status"].get<std::string>();
    const auto& d = ch["details"];
    if (d.contains("statement")) std::cout << "  (" << d["statement"].get<std::string>() << ')';
    if (d.contains("verdict")) std::cout << "  (" << d["verdict"].get<std::string>() << ')';
    if (d.contains("error")) std::cout << "  (" << d["error"].get<std::string>() << ')';
    std::cout << '\n';
  }
  return r.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral checks for weighted Laplacians on model metric measure spaces"};
  app.require_subcommand(1);
  Overrides o;

  auto* spectrum = app.add_subcommand("spectrum", "assemble and solve; write report.json and spectrum.csv");
  common_flags(spectrum, o);
  auto* verify = app.add_subcommand("verify", "run the configured checks");
  common_flags(verify, o);
  verify->add_option("--checks", o.checks, "comma list of spectrum,bounds,identities,holomorphy,toric,all");
  verify->add_option("--polytope", o.polytope, "polytope JSON file for the toric check");
  auto* toric = app.add_subcommand("toric", "barycenter test of a moment polytope");
  common_flags(toric, o);
  toric->add_option("--polytope", o.polytope, "polytope JSON file");
  toric->add_option("--expect", o.expect, "expected verdict: vanishes or nonzero");
  auto* list = app.add_subcommand("list-spaces", "print the catalog of model spaces");
  auto* plot = app.add_subcommand("plot", "SVG eigenvalue ladder (and multiplicity staircase)");
  common_flags(plot, o);
  plot->add_option("--report", o.report, "existing report.json; otherwise the config is run first");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      std::cout << wlap::catalog_text();
      return 0;
    }
    if (spectrum->parsed()) return execute(build_config(o, {"spectrum"}));
    if (verify->parsed()) return execute(build_config(o, {}));
    if (toric->parsed()) {
      Overrides t = o;
      if (t.space.empty() && t.config.empty()) t.space = "toric";
      return execute(build_config(t, {"toric"}));
    }
    if (plot->parsed()) {
      nlohmann::ordered_json report;
      std::string dir = o.out.empty() ? "." : o.out;
      if (!o.report.empty()) {
        std::ifstream in(o.report);
        if (!in) wlap::fail(wlap::ErrorCode::ConfigInvalid, "cannot read report " + o.report);
        try {
          report = nlohmann::ordered_json::parse(in);
        } catch (const nlohmann::json::exception& e) {
          wlap::fail(wlap::ErrorCode::ConfigInvalid, std::string("report is not valid JSON: ") + e.what());
        }
      } else {
        const wlap::ExperimentConfig c = build_config(o, {"spectrum"});
        dir = c.out;
        const wlap::RunReport r = wlap::run(c);
        wlap::write_outputs(r, c);
        report = r.json;
      }
      for (const auto& path : wlap::emit_plots(report, dir)) std::cout << "wrote " << path << '\n';
      return 0;
    }
  } catch (const wlap::Error& e) {
    std::cerr << "wlap: " << e.what() << '\n';
    return e.code() == wlap::ErrorCode::ConfigInvalid ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "wlap: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
