#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace annular {

// Sandwich check lower - tol <= value <= upper + tol.
struct BoundsReport {
  std::string quantity;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double tol = 0.0;
  bool pass = false;
  double slack = 0.0;  // distance to the nearest violated side; negative when failing

  static BoundsReport make(std::string quantity, double value, double lower, double upper, double tol);
};

enum class CheckStatus { pass, fail, report_only };
std::string to_string(CheckStatus s);

struct Check {
  std::string name;
  CheckStatus status;
  std::string detail;
};

// Tabular audit output. Rows are numeric; `notes` holds per-row flags (empty
// when the row is clean), keyed by row index.
struct AuditReport {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::size_t, std::string> notes;
  std::map<std::string, double> summary;
  std::map<std::string, std::string> config;
  std::vector<Check> checks;

  explicit AuditReport(std::string name = {}, std::vector<std::string> columns = {});
  void add_row(std::vector<double> row);
  void flag_last(std::string note);
  void check(std::string name, bool ok, std::string detail = {});
  void report_only(std::string name, std::string detail = {});
  bool all_pass() const;
  double summary_at(const std::string& key) const;
};

// 17 significant digits, scientific notation.
std::string format_double(double v);

}  // namespace annular
