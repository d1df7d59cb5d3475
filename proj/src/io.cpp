#include "billiards/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace billiards {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const Json& j) {
  Vector v(static_cast<long>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<long>(i)] = j[i].get<double>();
  return v;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << content;
}

std::shared_ptr<const ConvexBody> body_from_json(const Json& j) {
  if (!j.contains("kind")) throw ConfigError("body: missing \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  const double tol = j.value("tolerance", kind == "implicit" ? 1e-10 : 1e-12);
  try {
    if (kind == "sphere") {
      const int m = j.at("dim").get<int>();
      const double r = j.at("radius").get<double>();
      return make_sphere(m, r, tol);
    }
    if (kind == "ellipsoid") {
      std::vector<double> axes = j.at("semi_axes").get<std::vector<double>>();
      return make_ellipsoid(std::move(axes), tol);
    }
    if (kind == "implicit") {
      std::vector<PolyTerm> terms;
      for (const auto& tj : j.at("terms")) {
        PolyTerm t;
        t.coeff = tj.at("coeff").get<double>();
        t.powers = tj.at("powers").get<std::vector<int>>();
        terms.push_back(std::move(t));
      }
      if (terms.empty()) throw ConfigError("body: implicit needs terms");
      const int m = static_cast<int>(terms.front().powers.size()) - 1;
      return make_implicit(m, polynomial_implicit(std::move(terms)), tol);
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("body: malformed definition: ") + e.what());
  }
  throw ConfigError("body: unknown kind \"" + kind + "\"");
}

std::shared_ptr<const ConvexBody> load_body(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text_file(path));
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("body file parse error: ") + e.what());
  }
  return body_from_json(j);
}

Json body_to_json(const ConvexBody& body) {
  Json j;
  j["kind"] = body.kind_name();
  j["dim"] = body.dim_m();
  j["tolerance"] = body.tolerance();
  j["diameter"] = body.diameter();
  return j;
}

Json configuration_to_json(const Configuration& c, const std::string& body_ref) {
  Json j;
  if (!body_ref.empty()) j["body_ref"] = body_ref;
  j["kind"] = c.is_closed_string() ? "closed-string" : "cyclic";
  if (c.is_closed_string()) j["anchor"] = vector_to_json(c.anchor());
  Json pts = Json::array();
  for (const auto& p : c.points()) pts.push_back(vector_to_json(p));
  j["points"] = pts;
  return j;
}

Configuration configuration_from_json(const Json& j,
                                      std::shared_ptr<const ConvexBody> body) {
  const std::string kind = j.at("kind").get<std::string>();
  std::vector<Vector> pts;
  for (const auto& pj : j.at("points")) pts.push_back(vector_from_json(pj));
  if (kind == "closed-string")
    return Configuration::closed_string(std::move(body),
                                        vector_from_json(j.at("anchor")), std::move(pts));
  if (kind == "cyclic") return Configuration::cyclic(std::move(body), std::move(pts));
  throw ConfigError("configuration: unknown kind \"" + kind + "\"");
}

namespace {

Json settings_to_json(const SolverSettings& s) {
  Json j;
  j["starts"] = s.starts;
  j["seed"] = s.seed;
  j["eps"] = s.eps;
  j["grad_tol"] = s.grad_tol;
  j["null_threshold"] = s.null_threshold;
  j["max_iter"] = s.max_iter;
  j["trust_radius"] = s.trust_radius;
  j["merge_tol"] = s.merge_tol;
  j["snap_grid"] = s.snap_grid;
  j["deflation"] = s.deflation;
  return j;
}

Json orbit_to_json(const CriticalOrbit& o, int id) {
  Json j;
  j["id"] = id;
  j["length"] = o.length;
  j["morse_index"] = o.morse_index;
  j["nullity"] = o.nullity;
  j["orbit_kind"] = o.orbit_kind == GroupKind::Z2 ? "Z2" : "Dn";
  j["orbit_size"] = o.orbit_size;
  j["degenerate"] = o.degenerate;
  if (o.degenerate) j["family_points"] = o.family_points;
  j["certificate"] = {{"gradient_norm", o.certificate.gradient_norm},
                      {"min_gap", o.certificate.min_gap},
                      {"newton_residual_history", o.certificate.residual_history}};
  j["representative"] = configuration_to_json(o.representative);
  return j;
}

}  // namespace

Json solve_report_to_json(const SolveReport& report) {
  Json j;
  j["settings"] = settings_to_json(report.settings);
  j["starts_attempted"] = report.starts_attempted;
  j["converged"] = report.converged;
  j["rejected_boundary"] = report.rejected_boundary;
  j["rejected_duplicate"] = report.rejected_duplicate;
  j["diverged"] = report.diverged;
  Json orbits = Json::array();
  int id = 0;
  for (const auto& o : report.orbits) orbits.push_back(orbit_to_json(o, id++));
  j["orbits"] = orbits;
  Json families = Json::array();
  for (const auto& o : report.families) families.push_back(orbit_to_json(o, id++));
  j["families"] = families;
  return j;
}

std::string solve_report_csv(const SolveReport& report) {
  std::string csv = "id,length,morse_index,nullity,orbit_size,degenerate,family_points\n";
  int id = 0;
  const auto row = [&](const CriticalOrbit& o) {
    csv += std::to_string(id++) + "," + format_double(o.length) + "," +
           std::to_string(o.morse_index) + "," + std::to_string(o.nullity) + "," +
           std::to_string(o.orbit_size) + "," + (o.degenerate ? "1" : "0") + "," +
           std::to_string(o.family_points) + "\n";
  };
  for (const auto& o : report.orbits) row(o);
  for (const auto& o : report.families) row(o);
  return csv;
}

Json bound_report_to_json(const BoundReport& rep) {
  Json j;
  j["m"] = rep.m;
  j["n"] = rep.n;
  j["kind"] = kind_name(rep.kind);
  j["clause"] = clause_name(rep.clause);
  j["value"] = rep.value;
  j["witness"] = rep.witness;
  j["witness_verified"] = rep.witness_verified;
  return j;
}

std::string bound_reports_csv(const std::vector<BoundReport>& reps) {
  std::string csv = "m,n,kind,clause,value,witness,witness_verified\n";
  for (const auto& r : reps) {
    csv += std::to_string(r.m) + "," + std::to_string(r.n) + "," + kind_name(r.kind) +
           "," + clause_name(r.clause) + "," + std::to_string(r.value) + "," +
           r.witness + "," + (r.witness_verified ? "1" : "0") + "\n";
  }
  return csv;
}

std::string trajectory_dump_csv(const CriticalOrbit& orbit) {
  const Configuration& c = orbit.representative;
  std::string csv = "record,index";
  for (int i = 0; i < c.body().ambient_dim(); ++i) csv += ",x" + std::to_string(i);
  csv += "\n";
  int row = 0;
  const auto point_row = [&](const Vector& p) {
    csv += "point," + std::to_string(row++);
    for (int i = 0; i < p.size(); ++i) csv += "," + format_double(p[i]);
    csv += "\n";
  };
  if (c.is_closed_string()) point_row(c.anchor());
  for (const auto& p : c.points()) point_row(p);
  if (c.is_closed_string()) {
    // Segments 0..n run from the anchor through the bounces and back to it.
    for (int i = 0; i <= c.n(); ++i)
      csv += "segment," + std::to_string(i) + "," + std::to_string(i) + "," +
             std::to_string(i + 1 <= c.n() ? i + 1 : 0) + "\n";
  } else {
    for (int i = 0; i < c.n(); ++i)
      csv += "segment," + std::to_string(i) + "," + std::to_string(i) + "," +
             std::to_string((i + 1) % c.n()) + "\n";
  }
  return csv;
}

void emit_trajectory_dump(const CriticalOrbit& orbit, const std::string& path) {
  write_text_file(path, trajectory_dump_csv(orbit));
}

ExperimentSpec ExperimentSpec::from_json(const Json& j) {
  ExperimentSpec spec;
  try {
    if (j.at("body").is_string())
      spec.body_json = Json::parse(read_text_file(j.at("body").get<std::string>()));
    else
      spec.body_json = j.at("body");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "closed" || kind == "closed-from-point")
      spec.kind = TrajectoryKind::ClosedFromPoint;
    else if (kind == "periodic")
      spec.kind = TrajectoryKind::Periodic;
    else
      throw ConfigError("experiment: unknown kind \"" + kind + "\"");
    spec.n_values = j.at("n").get<std::vector<int>>();
    if (spec.n_values.empty()) throw ConfigError("experiment: empty n range");
    if (spec.kind == TrajectoryKind::ClosedFromPoint)
      spec.anchor = j.at("anchor").get<std::vector<double>>();
    if (j.contains("starts")) spec.settings.starts = j.at("starts").get<int>();
    if (j.contains("seed")) spec.settings.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("eps")) spec.settings.eps = j.at("eps").get<double>();
    if (j.contains("out")) spec.out_dir = j.at("out").get<std::string>();
    if (j.contains("format")) spec.format = j.at("format").get<std::string>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("experiment: malformed spec: ") + e.what());
  }
  return spec;
}

ExperimentSpec ExperimentSpec::load(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text_file(path));
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("experiment file parse error: ") + e.what());
  }
  return from_json(j);
}

VerifyResult run_verify(const ExperimentSpec& spec) {
  VerifyResult result;
  auto body = body_from_json(spec.body_json);
  const int m = body->dim_m();

  for (int n : spec.n_values) {
    VerdictRow row;
    row.m = m;
    row.n = n;
    row.kind = spec.kind;

    SolveReport report;
    if (spec.kind == TrajectoryKind::ClosedFromPoint) {
      Vector anchor(static_cast<long>(spec.anchor.size()));
      for (std::size_t i = 0; i < spec.anchor.size(); ++i)
        anchor[static_cast<long>(i)] = spec.anchor[i];
      report = solve_closed(body, body->surface_project(anchor), n, spec.settings);
    } else {
      report = solve_periodic(body, n, spec.settings);
    }

    for (const auto& b : applicable_bounds(m, n)) {
      const bool periodic = b.kind == TrajectoryKind::Periodic;
      if (periodic == (spec.kind == TrajectoryKind::Periodic)) row.bounds.push_back(b);
    }
    row.observed_isolated = report.isolated_count();
    row.degenerate_families = static_cast<int>(report.families.size());
    row.all_morse = report.all_morse();

    if (!row.all_morse) {
      row.verdict = "INFO";
    } else {
      bool ok = true;
      for (const auto& b : row.bounds)
        if (row.observed_isolated < b.value) ok = false;
      row.verdict = ok ? "PASS" : "FAIL";
      if (!ok) result.exit_code = 2;
    }
    result.rows.push_back(std::move(row));
    result.reports.push_back(std::move(report));
  }
  return result;
}

Json verify_result_to_json(const VerifyResult& result) {
  Json rows = Json::array();
  for (const auto& r : result.rows) {
    Json j;
    j["m"] = r.m;
    j["n"] = r.n;
    j["kind"] = kind_name(r.kind);
    Json bounds = Json::array();
    for (const auto& b : r.bounds) bounds.push_back(bound_report_to_json(b));
    j["bounds"] = bounds;
    j["observed_isolated_orbits"] = r.observed_isolated;
    j["degenerate_families"] = r.degenerate_families;
    j["all_morse"] = r.all_morse;
    j["verdict"] = r.verdict;
    rows.push_back(j);
  }
  Json out;
  out["rows"] = rows;
  out["exit_code"] = result.exit_code;
  return out;
}

std::string verify_result_csv(const VerifyResult& result) {
  std::string csv = "m,n,kind,bound,observed_isolated,degenerate_families,all_morse,verdict\n";
  for (const auto& r : result.rows) {
    long long bound = 0;
    for (const auto& b : r.bounds) bound = std::max(bound, b.value);
    csv += std::to_string(r.m) + "," + std::to_string(r.n) + "," + kind_name(r.kind) +
           "," + std::to_string(bound) + "," + std::to_string(r.observed_isolated) + "," +
           std::to_string(r.degenerate_families) + "," + (r.all_morse ? "1" : "0") + "," +
           r.verdict + "\n";
  }
  return csv;
}

}  // namespace billiards
