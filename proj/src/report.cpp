#include "shortops/report.hpp"

#include "shortops/matrix_io.hpp"

namespace shortops {

Json policy_to_json(const TolerancePolicy& pol) {
  return Json{{"rank_rel", pol.rank_rel},
              {"eig1_cluster", pol.eig1_cluster},
              {"conv_abs", pol.conv_abs},
              {"loewner_slack", pol.loewner_slack},
              {"max_iter", pol.max_iter}};
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json check_to_json(const PropertyCheck& check) {
  Json j{{"name", check.name},
         {"identity", check.identity},
         {"status", check_status_name(check.status)},
         {"residual", check.residual},
         {"threshold", check.threshold}};
  if (!check.note.empty()) j["note"] = check.note;
  return j;
}

Json battery_to_json(const PropertyReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) checks.push_back(check_to_json(c));
  return Json{{"pair_digest", report.pair_digest},
              {"policy", policy_to_json(report.policy)},
              {"checks", std::move(checks)},
              {"failed", report.fail_count()},
              {"skipped", report.skip_count()}};
}

Json make_report(const std::string& command) {
  return Json{{"schema", kReportSchema},
              {"command", command},
              {"inputs", Json::array()},
              {"policy", Json::object()},
              {"outputs", Json::object()},
              {"diagnostics", Json::object()},
              {"exit_code", 0}};
}

void add_input(Json& report, const std::string& path, const Matrix& m) {
  report["inputs"].push_back(Json{{"path", path}, {"digest", matrix_digest(m)}});
}

}  // namespace shortops
