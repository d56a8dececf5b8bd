#include "annular/report.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "annular/errors.hpp"

#ifndef ANNULAR_VERSION
#define ANNULAR_VERSION "0.0.0"
#endif

namespace annular {

std::string_view version() { return ANNULAR_VERSION; }

BoundsReport BoundsReport::make(std::string quantity, double value, double lower, double upper, double tol) {
  BoundsReport r;
  r.quantity = std::move(quantity);
  r.value = value;
  r.lower = lower;
  r.upper = upper;
  r.tol = tol;
  r.slack = std::min(value - (lower - tol), (upper + tol) - value);
  r.pass = r.slack >= 0.0;
  return r;
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::report_only:
      return "report-only";
  }
  return "unknown";
}

AuditReport::AuditReport(std::string n, std::vector<std::string> c) : name(std::move(n)), columns(std::move(c)) {}

void AuditReport::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("AuditReport " + name + ": row has " + std::to_string(row.size()) + " entries, expected " +
                           std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

void AuditReport::flag_last(std::string note) {
  if (rows.empty()) throw std::logic_error("AuditReport::flag_last on empty report");
  auto& slot = notes[rows.size() - 1];
  slot = slot.empty() ? std::move(note) : slot + "; " + note;
}

void AuditReport::check(std::string n, bool ok, std::string detail) {
  checks.push_back({std::move(n), ok ? CheckStatus::pass : CheckStatus::fail, std::move(detail)});
}

void AuditReport::report_only(std::string n, std::string detail) {
  checks.push_back({std::move(n), CheckStatus::report_only, std::move(detail)});
}

bool AuditReport::all_pass() const {
  return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == CheckStatus::fail; });
}

double AuditReport::summary_at(const std::string& key) const {
  const auto it = summary.find(key);
  if (it == summary.end()) throw std::out_of_range("AuditReport " + name + ": no summary value '" + key + "'");
  return it->second;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

}  // namespace annular
