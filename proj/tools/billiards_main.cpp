// Command-line front end: billiard trajectory search, exact ring dumps,
// trajectory-count bounds, round-sphere reference data, and bound-vs-observed
// verification runs.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "billiards/io.hpp"
#include "billiards/sphere_oracle.hpp"

namespace {

using namespace billiards;

constexpr int kExitPass = 0;
constexpr int kExitBoundViolation = 2;
constexpr int kExitConfigError = 3;

Vector parse_vector(const std::string& csv) {
  Vector out;
  std::vector<double> vals;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t next = csv.find(',', pos);
    if (next == std::string::npos) next = csv.size();
    vals.push_back(std::stod(csv.substr(pos, next - pos)));
    pos = next + 1;
  }
  out.resize(static_cast<long>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) out[static_cast<long>(i)] = vals[i];
  return out;
}

void emit(const std::string& format, const Json& as_json, const std::string& as_csv,
          const std::string& out_dir, const std::string& stem) {
  const std::string payload = format == "csv" ? as_csv : as_json.dump(2) + "\n";
  if (out_dir.empty()) {
    std::cout << payload;
    return;
  }
  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir + "/" + stem + ".json", as_json.dump(2) + "\n");
  write_text_file(out_dir + "/" + stem + ".csv", as_csv);
  std::cout << "wrote " << out_dir << "/" << stem << ".{json,csv}\n";
}

void write_orbit_dumps(const SolveReport& report, const std::string& out_dir) {
  if (out_dir.empty()) return;
  int id = 0;
  for (const auto& o : report.orbits)
    emit_trajectory_dump(o, out_dir + "/orbit_" + std::to_string(id++) + ".csv");
  for (const auto& o : report.families)
    emit_trajectory_dump(o, out_dir + "/orbit_" + std::to_string(id++) + ".csv");
}

Json ring_dump(const GradedRing& ring) {
  Json j;
  j["space"] = ring.space;
  j["m"] = ring.m;
  j["n"] = ring.n;
  j["coeffs"] = coeffs_name(ring.coeffs);
  if (ring.field_unverified) j["field_unverified"] = true;
  Json basis = Json::array();
  for (const auto& b : ring.basis)
    basis.push_back({{"name", b.name}, {"degree", b.degree}, {"order", b.order}});
  j["basis"] = basis;
  Json gens = Json::array();
  for (int g : ring.generators) gens.push_back(ring.basis[static_cast<std::size_t>(g)].name);
  j["generators"] = gens;
  Json products = Json::array();
  for (int a = 0; a < ring.basis_size(); ++a) {
    for (int b = a; b < ring.basis_size(); ++b) {
      const auto& t = ring.table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      if (t.k < 0) continue;
      products.push_back({{"left", ring.basis[static_cast<std::size_t>(a)].name},
                          {"right", ring.basis[static_cast<std::size_t>(b)].name},
                          {"coeff", t.c},
                          {"result", ring.basis[static_cast<std::size_t>(t.k)].name}});
    }
  }
  j["products"] = products;
  Json betti = Json::array();
  for (int d = 0; d <= ring.top_degree(); ++d) betti.push_back(ring.z2_dim(d));
  j["z2_dims"] = betti;
  j["cup_length"] = cup_length(ring);
  return j;
}

std::string ring_csv(const GradedRing& ring) {
  std::string csv = "left,right,coeff,result\n";
  for (int a = 0; a < ring.basis_size(); ++a)
    for (int b = a; b < ring.basis_size(); ++b) {
      const auto& t = ring.table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      if (t.k < 0) continue;
      csv += ring.basis[static_cast<std::size_t>(a)].name + "," +
             ring.basis[static_cast<std::size_t>(b)].name + "," + std::to_string(t.c) +
             "," + ring.basis[static_cast<std::size_t>(t.k)].name + "\n";
    }
  return csv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex billiard trajectory counts: solver, rings, bounds"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_dir;
  std::string format = "json";
  std::uint64_t seed = 12345;
  app.add_option("--out", out_dir, "Output directory (default: stdout)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", seed, "Random seed for solver subcommands");

  // solve-closed / solve-periodic
  std::string body_path, anchor_csv;
  int n = 2;
  int starts = 0;
  double eps = 0.0;

  auto* sc = app.add_subcommand("solve-closed", "Closed trajectories from a boundary point");
  sc->add_option("--body", body_path, "Body definition file")->required();
  sc->add_option("--anchor", anchor_csv, "Anchor point, comma separated")->required();
  sc->add_option("--n", n, "Number of reflections")->required();
  sc->add_option("--starts", starts, "Multi-start count (0 = default)");
  sc->add_option("--eps", eps, "Gap-product truncation (0 = default)");

  auto* sp = app.add_subcommand("solve-periodic", "Periodic trajectories");
  sp->add_option("--body", body_path, "Body definition file")->required();
  sp->add_option("--n", n, "Period")->required();
  sp->add_option("--starts", starts, "Multi-start count (0 = default)");
  sp->add_option("--eps", eps, "Gap-product truncation (0 = default)");

  // ring
  std::string space = "closed-string", coeffs = "Z";
  int ring_m = 3, ring_n = 4;
  auto* rg = app.add_subcommand("ring", "Dump a configuration-space cohomology ring");
  rg->add_option("--space", space, "closed-string | quotient | cyclic")
      ->check(CLI::IsMember({"closed-string", "quotient", "cyclic"}));
  rg->add_option("--m", ring_m, "Hypersurface dimension")->required();
  rg->add_option("--n", ring_n, "Number of points")->required();
  rg->add_option("--coeffs", coeffs, "Z | Q | Z2")->check(CLI::IsMember({"Z", "Q", "Z2"}));

  // bounds
  int bm = 2, bn = 2;
  auto* bd = app.add_subcommand("bounds", "Trajectory-count lower bounds for a cell");
  bd->add_option("--m", bm, "Hypersurface dimension")->required();
  bd->add_option("--n", bn, "Reflections / period")->required();

  // sphere-oracle
  int om = 2, on = 2, olevel = 0;
  bool operiodic = false;
  auto* so = app.add_subcommand("sphere-oracle", "Closed-form unit-sphere reference data");
  so->add_option("--m", om, "Sphere dimension")->required();
  so->add_option("--n", on, "Reflections / period")->required();
  so->add_option("--level", olevel, "Critical level p (0 = bottom)");
  so->add_flag("--periodic", operiodic, "Periodic families instead of closed strings");
  so->add_flag("--closed", [](std::int64_t) {}, "Closed-string families (default)");

  // verify
  std::string spec_path;
  auto* vf = app.add_subcommand("verify", "Run bound-vs-observed experiments");
  vf->add_option("--spec", spec_path, "Experiment spec file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sc || *sp) {
      auto body = load_body(body_path);
      SolverSettings settings;
      settings.seed = seed;
      settings.starts = starts;
      settings.eps = eps;
      SolveReport report;
      if (*sc) {
        Vector anchor = body->surface_project(parse_vector(anchor_csv));
        report = solve_closed(body, anchor, n, settings);
      } else {
        report = solve_periodic(body, n, settings);
      }
      emit(format, solve_report_to_json(report), solve_report_csv(report), out_dir,
           *sc ? "solve_closed" : "solve_periodic");
      write_orbit_dumps(report, out_dir);
      return kExitPass;
    }

    if (*rg) {
      GradedRing ring;
      if (space == "closed-string") {
        ring = closed_string_ring(ring_m, ring_n, coeffs_from_name(coeffs));
      } else if (space == "quotient") {
        if (coeffs != "Z")
          throw BadInputError("the quotient ring is integral; use --coeffs Z");
        ring = quotient_ring(ring_m, ring_n);
      } else {
        ring = cyclic_ring(ring_m, ring_n, coeffs_from_name(coeffs));
      }
      if (ring.field_unverified)
        std::cerr << "note: --coeffs " << coeffs
                  << " for this space goes beyond the established statement\n";
      emit(format, ring_dump(ring), ring_csv(ring), out_dir, "ring");
      return kExitPass;
    }

    if (*bd) {
      const auto reps = applicable_bounds(bm, bn);
      Json arr = Json::array();
      for (const auto& r : reps) arr.push_back(bound_report_to_json(r));
      emit(format, arr, bound_reports_csv(reps), out_dir, "bounds");
      return kExitPass;
    }

    if (*so) {
      Json j;
      j["m"] = om;
      j["n"] = on;
      j["level"] = olevel;
      if (!operiodic) {
        const int k = sphere_oracle::closed_k_for_level(olevel, on);
        const auto rec = sphere_oracle::q_form_spectrum(k, on);
        j["kind"] = "closed-string";
        j["k"] = k;
        j["angle"] = sphere_oracle::closed_angle(k, on);
        j["critical_value"] = rec.critical_value;
        j["q_eigenvalues"] = rec.eigenvalues;
        j["q_index"] = rec.index;
        j["q_nullity"] = rec.nullity;
        if (om >= 2) {
          const auto hess = sphere_oracle::full_hessian_closed(k, on, om);
          j["hessian_index"] = hess.index;
          j["hessian_nullity"] = hess.nullity;
        }
      } else {
        j["kind"] = "periodic";
        j["angle"] = sphere_oracle::periodic_angle(olevel, on);
        j["critical_value"] = sphere_oracle::periodic_critical_value(olevel, on);
        j["index"] = 2 * olevel * (om - 1);
        j["family_dimension"] = 2 * om - 1;
      }
      std::string csv = "key,value\n";
      for (const auto& [key, value] : j.items()) csv += key + "," + value.dump() + "\n";
      emit(format, j, csv, out_dir, "sphere_oracle");
      return kExitPass;
    }

    if (*vf) {
      ExperimentSpec spec = ExperimentSpec::load(spec_path);
      if (!out_dir.empty()) spec.out_dir = out_dir;
      spec.settings.seed = seed;
      VerifyResult result = run_verify(spec);
      emit(format, verify_result_to_json(result), verify_result_csv(result),
           spec.out_dir, "verify");
      if (!spec.out_dir.empty()) {
        int cell = 0;
        for (const auto& rep : result.reports) {
          write_text_file(spec.out_dir + "/cell_" + std::to_string(cell) + ".json",
                          solve_report_to_json(rep).dump(2) + "\n");
          write_text_file(spec.out_dir + "/cell_" + std::to_string(cell) + ".csv",
                          solve_report_csv(rep));
          ++cell;
        }
      }
      for (const auto& row : result.rows)
        std::cerr << kind_name(row.kind) << " m=" << row.m << " n=" << row.n
                  << " observed=" << row.observed_isolated
                  << " families=" << row.degenerate_families << " -> " << row.verdict
                  << "\n";
      return result.exit_code == 0 ? kExitPass : kExitBoundViolation;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitPass;
}
