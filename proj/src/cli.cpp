#include "wlap/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include "wlap/eigensolve.hpp"
#include "wlap/error.hpp"
#include "wlap/holomorphic.hpp"
#include "wlap/identities.hpp"
#include "wlap/operators.hpp"
#include "wlap/toric.hpp"

namespace wlap {
namespace {

using ojson = nlohmann::ordered_json;

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

[[noreturn]] void invalid(const std::string& what) { fail(ErrorCode::ConfigInvalid, what); }

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ojson identity_json(const IdentityReport& r) {
  ojson j;
  j["identity_name"] = r.identity_name;
  j["max_residual"] = r.max_residual;
  j["l2_residual"] = r.l2_residual;
  j["tolerance"] = r.tolerance;
  j["sample_description"] = r.sample_description;
  j["verdict"] = r.pass ? "PASS" : "FAIL";
  if (!r.values.empty()) j["values"] = r.values;
  return j;
}

ojson holomorphy_json(const HolomorphyReport& r) {
  return ojson{{"dbar_defect", r.dbar_defect}, {"eigen_residual", r.eigen_residual}, {"norm", r.norm},
               {"tolerance", r.tolerance},     {"verdict", r.pass ? "PASS" : "FAIL"}, {"description", r.description}};
}

// State shared by the checks of one run.
class Runner {
 public:
  explicit Runner(const ExperimentConfig& c) : cfg_(c) {
    if (cfg_.space != "toric") {
      space_ = make_space(cfg_.space);
      basis_ = make_basis(*space_, cfg_.basis);
    }
  }

  const SpectrumResult& spectrum_result() {
    if (!result_) {
      op_ = assemble(*space_, *basis_);
      SpectrumOptions opt;
      opt.tol = cfg_.tol;
      opt.cluster_tol = cfg_.cluster_tol;
      opt.seed = cfg_.seed;
      std::size_t largest = 0;
      for (const auto& b : op_->blocks) largest = std::max(largest, b.size());
      if (op_->blocks.empty()) largest = sz(op_->size());
      const bool dense = largest <= sz(opt.dense_limit);
      const int count = cfg_.eigs ? std::min(*cfg_.eigs, op_->size()) : dense ? op_->size() : std::min(24, op_->size());
      result_ = spectrum(*op_, count, opt);
    }
    return *result_;
  }

  ojson spectrum_json() {
    const SpectrumResult& r = spectrum_result();
    ojson j;
    j["space"] = space_->descriptor();
    j["basis"] = basis_->descriptor();
    j["convention"] = r.convention == WeightConvention::Real ? "real" : "complex";
    j["size"] = op_->size();
    j["path"] = r.path;
    j["iterations"] = r.iterations;
    j["spectral_radius"] = r.spectral_radius;
    j["min_eigenvalue"] = r.min_eigenvalue;
    j["eigenvalues"] = r.eigenvalues;
    j["residuals"] = r.residuals;
    ojson clusters = ojson::array();
    for (const auto& c : r.clusters)
      clusters.push_back({{"value", c.value}, {"multiplicity", c.multiplicity}, {"members", c.members}});
    j["clusters"] = clusters;
    return j;
  }

  ojson check_spectrum(bool& pass, ojson& report) {
    const SpectrumResult& r = spectrum_result();
    report["spectrum"] = spectrum_json();
    ojson d;
    const double max_res = r.residuals.empty() ? 0 : *std::max_element(r.residuals.begin(), r.residuals.end());
    d["max_residual"] = max_res;
    d["residual_tolerance"] = cfg_.tol;
    const IdentityReport sa = selfadjointness_report(*op_, 100, cfg_.seed);
    d["selfadjointness"] = identity_json(sa);
    const double floor = -1e-10 * r.spectral_radius;
    d["positivity"] = {{"min_eigenvalue", r.min_eigenvalue}, {"floor", floor}};
    pass = max_res <= cfg_.tol && sa.pass && r.min_eigenvalue >= floor;
    if (!cfg_.sweep_degrees.empty()) {
      ojson sweep = ojson::array();
      int previous = -1;
      bool monotone = true;
      for (int deg : cfg_.sweep_degrees) {
        const DiscreteBasis b = fock_basis(*space_, deg);
        const AssembledOperator op = assemble(*space_, b);
        SpectrumOptions opt;
        opt.cluster_tol = cfg_.cluster_tol;
        const SpectrumResult sr = spectrum(op, op.size(), opt);
        int mult = 0;
        for (const auto& c : sr.clusters)
          if (std::abs(c.value - 1) <= cfg_.cluster_tol) mult = c.multiplicity;
        monotone = monotone && mult >= previous;
        previous = mult;
        sweep.push_back({{"degree", deg}, {"size", op.size()}, {"multiplicity_at_1", mult}});
      }
      report["spectrum"]["sweep"] = sweep;
      d["sweep_nondecreasing"] = monotone;
      pass = pass && monotone;
    }
    return d;
  }

  ojson check_bounds(bool& pass) {
    const BoundReport b = check_lower_bound(spectrum_result(), *space_, cfg_.bound_slack);
    pass = b.pass;
    return ojson{{"lambda1", b.lambda1}, {"multiplicity", b.multiplicity}, {"bound", b.bound},
                 {"slack", b.slack},     {"statement", b.statement}};
  }

  ojson check_identities(bool& pass, bool& skipped) {
    const ModelSpace& s = *space_;
    ojson reports = ojson::array();
    pass = true;
    auto add = [&](const IdentityReport& r) {
      reports.push_back(identity_json(r));
      pass = pass && r.pass;
    };
    switch (s.kind) {
      case SpaceKind::GaussianEuclidean:
      case SpaceKind::RoundSphere:
      case SpaceKind::SphereGaussianProduct: {
        double worst = 0;
        std::size_t count = 0;
        for (const auto& u : bochner_family(s)) {
          const IdentityReport r = bochner_residual_real(s, u, cfg_.identity_tol);
          worst = std::max(worst, r.max_residual);
          ++count;
        }
        IdentityReport family;
        family.identity_name = "bochner_real";
        family.max_residual = family.l2_residual = worst;
        family.tolerance = cfg_.identity_tol;
        family.sample_description = std::to_string(count) + " test functions on " + s.descriptor();
        family.decide();
        add(family);
        if (s.kind == SpaceKind::GaussianEuclidean) add(soliton_identity_residual(s));
        TestFunction linear = s.kind == SpaceKind::RoundSphere
                                  ? ambient_monomial(s, [&] {
                                      std::vector<int> e(sz(s.n + 1), 0);
                                      e[0] = 1;
                                      return e;
                                    }(), s.radius)
                                  : coordinate_function(s.kind == SpaceKind::GaussianEuclidean ? 0 : s.sphere_dimension());
        for (double eps : cfg_.lsi_eps) {
          char name[64];
          std::snprintf(name, sizeof name, "1 + %g %s", eps, linear.name.c_str());
          const TestFunction u = normalize_in_measure(
              s, combine(name, {{1.0, chart_monomial(std::vector<int>(sz(s.chart_dimension()), 0))}, {eps, linear}}));
          add(lsi_deficit(s, u, std::nullopt, cfg_.identity_tol));
        }
        break;
      }
      case SpaceKind::ComplexGaussian: {
        const int max_degree = s.n <= 2 ? 4 : 3;
        double worst = 0;
        std::size_t count = 0;
        for (int d = 0; d <= max_degree; ++d)
          for (int p = 0; p <= d; ++p)
            for (const auto& a : compositions(s.n, p))
              for (const auto& b : compositions(s.n, d - p)) {
                const IdentityReport r =
                    complex_identity_residual(s, ComplexPolynomial::monomial(a, b), cfg_.identity_tol);
                worst = std::max(worst, r.max_residual);
                ++count;
              }
        IdentityReport family;
        family.identity_name = "complex_integral_identity";
        family.max_residual = family.l2_residual = worst;
        family.tolerance = cfg_.identity_tol;
        family.sample_description =
            std::to_string(count) + " monomials of total degree <= " + std::to_string(max_degree) + " on " + s.descriptor();
        family.decide();
        add(family);
        break;
      }
      case SpaceKind::FanoCP1: {
        IdentityReport r;
        r.identity_name = "ricci_potential";
        r.max_residual = r.l2_residual = s.cp1->potential_residual;
        r.tolerance = cfg_.identity_tol;
        r.sample_description = "max |Delta F / 2 - (K - 1)| at latitude nodes";
        r.decide();
        add(r);
        break;
      }
    }
    skipped = reports.empty();
    return ojson{{"reports", reports}};
  }

  ojson check_holomorphy(bool& pass, bool& skipped) {
    const ModelSpace& s = *space_;
    if (s.convention != WeightConvention::Complex) {
      skipped = true;
      return ojson{{"reason", "holomorphy applies to complex-convention spaces"}};
    }
    const SpectrumResult& r = spectrum_result();
    const FirstNonzero f = first_nonzero(r, cfg_.zero_tol);
    const Cluster& cl = r.clusters[sz(f.cluster_index)];
    ojson d;
    d["lambda1"] = f.lambda1;
    d["multiplicity"] = f.multiplicity;
    pass = std::abs(f.lambda1 - 1) <= 1e-6;
    ojson members = ojson::array();
    if (s.kind == SpaceKind::ComplexGaussian) {
      for (int m : cl.members) {
        const ComplexPolynomial u = fock_polynomial(*basis_, r.eigenvectors.col(m));
        const HolomorphyReport h = holomorphy_defect(s, u, 1e-6);
        members.push_back(holomorphy_json(h));
        pass = pass && h.pass;
      }
    } else {
      std::vector<Cp1Function> fields;
      double worst_gap = 0, worst_value = 0;
      for (int m : cl.members) {
        Cp1Function u{&*basis_, r.eigenvectors.col(m)};
        const HolomorphyReport h = holomorphy_defect(s, u, 1e-6);
        ojson mj = holomorphy_json(h);
        if (h.pass) {
          const cplx f1 = futaki_from_eigenfunction(s, u);
          const cplx f2 = futaki_from_potential(s, u);
          mj["futaki_eigenfunction"] = {f1.real(), f1.imag()};
          mj["futaki_potential"] = {f2.real(), f2.imag()};
          worst_gap = std::max(worst_gap, std::abs(f1 - f2));
          worst_value = std::max({worst_value, std::abs(f1), std::abs(f2)});
        }
        members.push_back(mj);
        pass = pass && h.pass;
        fields.push_back(std::move(u));
      }
      const Eigen::MatrixXcd G = vector_field_gram(s, fields);
      const double det = std::abs(G.determinant());
      d["field_gram_determinant"] = det;
      d["futaki_route_gap"] = worst_gap;
      d["futaki_max_abs"] = worst_value;
      pass = pass && f.multiplicity == 3 && det > 1e-3 && worst_gap <= 1e-6 && worst_value <= 1e-6;
    }
    d["members"] = members;
    return d;
  }

  ojson check_toric(bool& pass) {
    const Polytope p = load_polytope_file(cfg_.polytope);
    const VolumeBarycenter vb = volume_barycenter(p);
    const FutakiVerdict v = futaki_vanishes(p);
    ojson d;
    d["polytope"] = cfg_.polytope;
    ojson verts = ojson::array();
    for (const auto& x : p.vertices) {
      ojson row = ojson::array();
      for (const auto& q : x) row.push_back(to_string(q));
      verts.push_back(row);
    }
    d["vertices"] = verts;
    d["volume"] = to_string(vb.volume);
    ojson bc = ojson::array();
    for (const auto& q : vb.barycenter) bc.push_back(to_string(q));
    d["barycenter"] = bc;
    d["barycenter_float"] = to_doubles(vb.barycenter);
    d["verdict"] = v.vanishes ? "VANISHES" : "NONZERO";
    if (!v.vanishes) d["direction"] = v.direction;
    pass = true;
    if (cfg_.expect_futaki) {
      d["expected"] = *cfg_.expect_futaki;
      pass = (*cfg_.expect_futaki == "vanishes") == v.vanishes;
    }
    return d;
  }

 private:
  const ExperimentConfig& cfg_;
  std::optional<ModelSpace> space_;
  std::optional<DiscreteBasis> basis_;
  std::optional<AssembledOperator> op_;
  std::optional<SpectrumResult> result_;
};

template <class T>
T get(const nlohmann::json& j, const char* key, const char* type) {
  const auto& v = j.at(key);
  if constexpr (std::is_same_v<T, int>) {
    if (!v.is_number_integer()) invalid(std::string("config key '") + key + "' must be " + type);
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    if (!v.is_number_unsigned()) invalid(std::string("config key '") + key + "' must be " + type);
  } else if constexpr (std::is_same_v<T, std::vector<int>>) {
    if (!v.is_array()) invalid(std::string("config key '") + key + "' must be " + type);
    for (const auto& e : v)
      if (!e.is_number_integer()) invalid(std::string("config key '") + key + "' must be " + type);
  }
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    invalid(std::string("config key '") + key + "' must be " + type);
  }
}

}  // namespace

nlohmann::ordered_json ExperimentConfig::to_json() const {
  ojson j;
  j["space"] = space;
  j["basis"] = basis;
  if (eigs) j["eigs"] = *eigs;
  j["tolerances"] = {{"solver", tol}, {"cluster", cluster_tol}, {"identity", identity_tol}, {"bound_slack", bound_slack}};
  if (zero_tol) j["tolerances"]["zero"] = *zero_tol;
  j["checks"] = checks;
  j["seed"] = seed;
  if (!polytope.empty()) j["polytope"] = polytope;
  if (expect_futaki) j["expect_futaki"] = *expect_futaki;
  if (!sweep_degrees.empty()) j["sweep_degrees"] = sweep_degrees;
  j["lsi_eps"] = lsi_eps;
  return j;
}

ExperimentConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    invalid(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) invalid("config must be a JSON object");
  static const std::set<std::string> known{"space",  "basis", "eigs",     "tolerances",    "checks",        "out",
                                           "csv",    "seed",  "polytope", "expect_futaki", "sweep_degrees", "lsi_eps"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) invalid("unknown config key '" + k + "'");
  ExperimentConfig c;
  if (j.contains("space")) c.space = get<std::string>(j, "space", "a string");
  if (j.contains("basis")) c.basis = get<std::string>(j, "basis", "a string");
  if (j.contains("eigs")) c.eigs = get<int>(j, "eigs", "an integer");
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (!t.is_object()) invalid("config key 'tolerances' must be an object");
    for (const auto& [k, v] : t.items()) {
      if (!v.is_number()) invalid("tolerance '" + k + "' must be a number");
      const double x = v.get<double>();
      if (k == "solver") c.tol = x;
      else if (k == "cluster") c.cluster_tol = x;
      else if (k == "zero") c.zero_tol = x;
      else if (k == "identity") c.identity_tol = x;
      else if (k == "bound_slack") c.bound_slack = x;
      else invalid("unknown tolerance '" + k + "'");
    }
  }
  if (j.contains("checks")) {
    if (j["checks"].is_string()) {
      c.checks.clear();
      std::stringstream ss(j["checks"].get<std::string>());
      for (std::string item; std::getline(ss, item, ',');) c.checks.push_back(item);
    } else {
      c.checks = get<std::vector<std::string>>(j, "checks", "a list of strings");
    }
  }
  if (j.contains("out")) c.out = get<std::string>(j, "out", "a string");
  if (j.contains("csv")) c.csv = get<bool>(j, "csv", "a boolean");
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed", "an unsigned integer");
  if (j.contains("polytope")) c.polytope = get<std::string>(j, "polytope", "a string");
  if (j.contains("expect_futaki")) c.expect_futaki = get<std::string>(j, "expect_futaki", "a string");
  if (j.contains("sweep_degrees")) c.sweep_degrees = get<std::vector<int>>(j, "sweep_degrees", "a list of integers");
  if (j.contains("lsi_eps")) c.lsi_eps = get<std::vector<double>>(j, "lsi_eps", "a list of numbers");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  ExperimentConfig c = parse_config(ss.str());
  c.config_path = path;
  // Relative polytope paths resolve against the config file.
  if (!c.polytope.empty() && std::filesystem::path(c.polytope).is_relative()) {
    const auto candidate = std::filesystem::path(path).parent_path() / c.polytope;
    if (std::filesystem::exists(candidate)) c.polytope = candidate.string();
  }
  return c;
}

void validate(ExperimentConfig& c) {
  if (c.space.empty()) invalid("config needs a 'space' (a catalog descriptor or \"toric\")");
  if (c.eigs && *c.eigs < 1) invalid("eigs must be >= 1");
  for (double t : {c.tol, c.cluster_tol, c.identity_tol, c.bound_slack})
    if (!(t > 0)) invalid("tolerances must be positive");
  if (c.zero_tol && !(*c.zero_tol > 0)) invalid("tolerances must be positive");
  if (c.expect_futaki && *c.expect_futaki != "vanishes" && *c.expect_futaki != "nonzero")
    invalid("expect_futaki must be \"vanishes\" or \"nonzero\"");
  for (int d : c.sweep_degrees)
    if (d < 1 || d > 12) invalid("sweep degrees must lie in [1, 12]");
  std::set<std::string> requested;
  for (const auto& ch : c.checks) {
    if (ch == "all") {
      if (c.space == "toric") {
        requested.insert("toric");
      } else {
        requested.insert({"spectrum", "bounds", "identities", "holomorphy"});
        if (!c.polytope.empty()) requested.insert("toric");
      }
    } else if (std::find(check_order().begin(), check_order().end(), ch) != check_order().end()) {
      requested.insert(ch);
    } else {
      invalid("unknown check '" + ch + "'");
    }
  }
  if (requested.empty()) invalid("no checks requested");
  c.checks.clear();
  for (const auto& ch : check_order())
    if (requested.count(ch)) c.checks.push_back(ch);
  if (requested.count("toric") && c.polytope.empty()) invalid("the toric check needs a 'polytope' file");
  if (c.space == "toric") {
    if (c.checks != std::vector<std::string>{"toric"}) invalid("space \"toric\" supports only the toric check");
    return;
  }
  try {
    const ModelSpace s = make_space(c.space);
    make_basis(s, c.basis);
    if (!c.sweep_degrees.empty() && s.kind != SpaceKind::ComplexGaussian)
      invalid("sweep_degrees applies to complex-gaussian spaces");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) throw;
    invalid(std::string("bad space or basis: ") + e.what());
  }
}

RunReport run(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport out;
  ojson& j = out.json;
  j["schema_version"] = kSchemaVersion;
  j["tool"] = "wlap";
  j["tool_version"] = kToolVersion;
  j["config"] = cfg.to_json();
  ojson checks = ojson::array();
  Runner runner(cfg);
  int passed = 0, failed = 0, skipped_count = 0;
  for (const auto& name : check_order()) {
    if (std::find(cfg.checks.begin(), cfg.checks.end(), name) == cfg.checks.end()) continue;
    ojson c;
    c["name"] = name;
    bool pass = false, skipped = false;
    ojson details;
    try {
      if (name == "spectrum") details = runner.check_spectrum(pass, j);
      else if (name == "bounds") details = runner.check_bounds(pass);
      else if (name == "identities") details = runner.check_identities(pass, skipped);
      else if (name == "holomorphy") details = runner.check_holomorphy(pass, skipped);
      else details = runner.check_toric(pass);
    } catch (const std::exception& e) {
      pass = false;
      skipped = false;
      details["error"] = e.what();
    }
    c["status"] = skipped ? "SKIPPED" : pass ? "PASS" : "FAIL";
    c["details"] = details;
    if (skipped) ++skipped_count;
    else if (pass) ++passed;
    else ++failed;
    checks.push_back(c);
  }
  // Bounds/holomorphy may have triggered a solve without the spectrum check.
  if (!j.contains("spectrum") && cfg.space != "toric") {
    const auto wants = [&](const char* n) { return std::find(cfg.checks.begin(), cfg.checks.end(), n) != cfg.checks.end(); };
    if (wants("bounds") || wants("holomorphy")) {
      try {
        j["spectrum"] = runner.spectrum_json();
      } catch (const std::exception&) {
        // The failing check already carries the error.
      }
    }
  }
  j["checks"] = checks;
  out.all_pass = failed == 0;
  j["summary"] = {{"passed", passed}, {"failed", failed}, {"skipped", skipped_count},
                  {"status", out.all_pass ? "PASS" : "FAIL"}};
  j["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

nlohmann::ordered_json deterministic_part(const nlohmann::ordered_json& report) {
  ojson j = report;
  j.erase("wall_time_seconds");
  j.erase("tool_version");
  return j;
}

std::string spectrum_csv(const nlohmann::ordered_json& report) {
  if (!report.contains("spectrum") || report["spectrum"]["eigenvalues"].empty())
    fail(ErrorCode::NoSpectrumData, "report has no eigenvalues");
  const auto& s = report["spectrum"];
  const auto& ev = s["eigenvalues"];
  std::vector<int> cluster_of(ev.size(), 0), mult(ev.size(), 0);
  int cid = 0;
  for (const auto& c : s["clusters"]) {
    for (const auto& m : c["members"]) {
      cluster_of[m.get<std::size_t>()] = cid;
      mult[m.get<std::size_t>()] = c["multiplicity"].get<int>();
    }
    ++cid;
  }
  std::ostringstream os;
  os << "index,eigenvalue,cluster_id,multiplicity,residual\n";
  for (std::size_t i = 0; i < ev.size(); ++i)
    os << i << ',' << fmt(ev[i].get<double>()) << ',' << cluster_of[i] << ',' << mult[i] << ','
       << fmt(s["residuals"][i].get<double>()) << '\n';
  return os.str();
}

std::vector<std::string> write_outputs(const RunReport& report, const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out);
  std::vector<std::string> paths;
  const auto json_path = (std::filesystem::path(cfg.out) / "report.json").string();
  std::ofstream(json_path) << report.json.dump(2) << '\n';
  paths.push_back(json_path);
  if (cfg.csv && report.json.contains("spectrum")) {
    const auto csv_path = (std::filesystem::path(cfg.out) / "spectrum.csv").string();
    std::ofstream(csv_path) << spectrum_csv(report.json);
    paths.push_back(csv_path);
  }
  return paths;
}

std::string catalog_text() {
  std::ostringstream os;
  for (const auto& e : catalog()) {
    os << e.name << '\n'
       << "  parameters: " << e.parameters << '\n'
       << "  bound:      " << e.bound << '\n'
       << "  spectrum:   " << e.spectrum << '\n';
  }
  return os.str();
}

namespace {

struct SvgFrame {
  double width = 640, height = 420, left = 70, right = 30, top = 40, bottom = 50;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  double X(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
  double Y(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

std::string svg_header(const SvgFrame& f, const std::string& title, const std::string& xlabel,
                       const std::string& ylabel) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\"" << f.height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << f.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n"
     << "<line x1=\"" << f.left << "\" y1=\"" << f.Y(f.y0) << "\" x2=\"" << f.width - f.right << "\" y2=\"" << f.Y(f.y0)
     << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << f.left << "\" y1=\"" << f.top << "\" x2=\"" << f.left << "\" y2=\"" << f.Y(f.y0)
     << "\" stroke=\"black\"/>\n"
     << "<text x=\"" << f.width / 2 << "\" y=\"" << f.height - 12 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n"
     << "<text x=\"16\" y=\"" << f.height / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << f.height / 2
     << ")\">" << ylabel << "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = f.y0 + (f.y1 - f.y0) * i / 4;
    os << "<text x=\"" << f.left - 6 << "\" y=\"" << f.Y(y) + 4 << "\" text-anchor=\"end\">" << fmt(std::round(y * 1e4) / 1e4)
       << "</text>\n";
  }
  return os.str();
}

}  // namespace

std::vector<std::string> emit_plots(const nlohmann::ordered_json& report, const std::string& dir) {
  if (!report.contains("spectrum") || !report["spectrum"].contains("clusters") ||
      report["spectrum"]["clusters"].empty())
    fail(ErrorCode::NoSpectrumData, "report has no spectrum data to plot");
  std::filesystem::create_directories(dir);
  std::vector<std::string> paths;
  const auto& s = report["spectrum"];
  {
    SvgFrame f;
    double top = 0;
    for (const auto& c : s["clusters"]) top = std::max(top, c["value"].get<double>());
    f.y1 = top > 0 ? top * 1.05 : 1;
    std::ostringstream os;
    os << svg_header(f, "Eigenvalue ladder: " + s.value("space", std::string()), "clusters (label: multiplicity)",
                     "eigenvalue");
    for (const auto& c : s["clusters"]) {
      const double v = c["value"].get<double>();
      os << "<line x1=\"" << f.X(0.15) << "\" y1=\"" << f.Y(v) << "\" x2=\"" << f.X(0.75) << "\" y2=\"" << f.Y(v)
         << "\" stroke=\"steelblue\" stroke-width=\"2\"/>\n"
         << "<text x=\"" << f.X(0.78) << "\" y=\"" << f.Y(v) + 4 << "\">x" << c["multiplicity"].get<int>() << "  ("
         << fmt(std::round(v * 1e8) / 1e8) << ")</text>\n";
    }
    os << "</svg>\n";
    const auto path = (std::filesystem::path(dir) / "spectrum_ladder.svg").string();
    std::ofstream(path) << os.str();
    paths.push_back(path);
  }
  if (s.contains("sweep") && !s["sweep"].empty()) {
    SvgFrame f;
    const auto& sw = s["sweep"];
    f.x0 = sw.front()["degree"].get<double>() - 0.5;
    f.x1 = sw.back()["degree"].get<double>() + 0.5;
    double top = 1;
    for (const auto& e : sw) top = std::max(top, e["multiplicity_at_1"].get<double>());
    f.y1 = top * 1.1;
    std::ostringstream os;
    os << svg_header(f, "Multiplicity of the eigenvalue 1 vs truncation degree", "Fock degree", "multiplicity");
    os << "<polyline fill=\"none\" stroke=\"firebrick\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < sw.size(); ++i) {
      const double d = sw[i]["degree"].get<double>(), m = sw[i]["multiplicity_at_1"].get<double>();
      os << f.X(d - 0.5) << ',' << f.Y(m) << ' ' << f.X(d + 0.5) << ',' << f.Y(m) << ' ';
    }
    os << "\"/>\n";
    for (const auto& e : sw) {
      const double d = e["degree"].get<double>(), m = e["multiplicity_at_1"].get<double>();
      os << "<circle cx=\"" << f.X(d) << "\" cy=\"" << f.Y(m) << "\" r=\"3\" fill=\"firebrick\"/>\n"
         << "<text x=\"" << f.X(d) << "\" y=\"" << f.Y(f.y0) + 16 << "\" text-anchor=\"middle\">" << d << "</text>\n";
    }
    os << "</svg>\n";
    const auto path = (std::filesystem::path(dir) / "multiplicity_staircase.svg").string();
    std::ofstream(path) << os.str();
    paths.push_back(path);
  }
  return paths;
}

}  // namespace wlap
