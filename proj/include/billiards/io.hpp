#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "billiards/bounds.hpp"
#include "billiards/solver.hpp"

namespace billiards {

using Json = nlohmann::ordered_json;

// Body definitions: {"kind": "sphere"|"ellipsoid"|"implicit", ...}.
std::shared_ptr<const ConvexBody> body_from_json(const Json& j);
std::shared_ptr<const ConvexBody> load_body(const std::string& path);
Json body_to_json(const ConvexBody& body);  // spheres and ellipsoids only

// Configuration serialization; doubles round-trip exactly.
Json configuration_to_json(const Configuration& c, const std::string& body_ref = "");
Configuration configuration_from_json(const Json& j,
                                      std::shared_ptr<const ConvexBody> body);

Json solve_report_to_json(const SolveReport& report);
std::string solve_report_csv(const SolveReport& report);

Json bound_report_to_json(const BoundReport& rep);
std::string bound_reports_csv(const std::vector<BoundReport>& reps);

// CSV dump of an orbit: bounce points followed by the segment list; closed
// strings carry the anchor as first and last segment endpoint.
std::string trajectory_dump_csv(const CriticalOrbit& orbit);
void emit_trajectory_dump(const CriticalOrbit& orbit, const std::string& path);

struct ExperimentSpec {
  Json body_json;
  TrajectoryKind kind = TrajectoryKind::Periodic;
  std::vector<double> anchor;  // closed-from-point runs
  std::vector<int> n_values;
  SolverSettings settings;
  std::string out_dir;     // optional
  std::string format = "json";

  static ExperimentSpec from_json(const Json& j);
  static ExperimentSpec load(const std::string& path);
};

struct VerdictRow {
  int m = 0;
  int n = 0;
  TrajectoryKind kind = TrajectoryKind::ClosedFromPoint;
  std::vector<BoundReport> bounds;
  int observed_isolated = 0;
  int degenerate_families = 0;
  bool all_morse = false;
  std::string verdict;  // PASS | FAIL | INFO
};

struct VerifyResult {
  std::vector<VerdictRow> rows;
  std::vector<SolveReport> reports;
  int exit_code = 0;  // 0 pass, 2 bound violation
};

// Runs the solver over the spec's cells and compares observed orbit counts
// against every applicable bound. PASS/FAIL only when all found critical
// points are Morse; degenerate families downgrade the row to INFO.
VerifyResult run_verify(const ExperimentSpec& spec);

Json verify_result_to_json(const VerifyResult& result);
std::string verify_result_csv(const VerifyResult& result);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace billiards
