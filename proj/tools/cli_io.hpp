#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "annular/errors.hpp"
#include "annular/report.hpp"
#include "json.hpp"

namespace annular::cli {

inline constexpr int schema_version = 1;

// Reads a key = value file. Blank lines and lines starting with '#' are skipped;
// a trailing "# ..." comment is stripped. Throws std::invalid_argument on a
// malformed line or a repeated key.
std::vector<std::pair<std::string, std::string>> read_key_values(const std::filesystem::path& path);

// Rewrites argv so that `--config <file>` becomes the equivalent `--key value`
// pairs, placed right after the subcommand so explicit flags still win.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

// One subcommand run: CSV tables and a JSON summary under the output directory.
class Artifact {
 public:
  // Files are named after `stem` (the command, optionally with a tag).
  Artifact(std::string command, std::string stem, std::filesystem::path out_dir,
           std::map<std::string, std::string> config);

  nlohmann::ordered_json& results() { return results_; }
  void add_check(const std::string& name, CheckStatus status, const std::string& detail, int criterion = 0);
  void add_checks(const AuditReport& report, int criterion = 0, const std::string& prefix = {});
  void table(const std::string& suffix, const std::vector<std::string>& columns,
             const std::vector<std::vector<std::string>>& rows, const std::string& plot_hint = {});
  void table(const std::string& suffix, const AuditReport& report, const std::string& plot_hint = {});
  bool failed() const;
  // Writes <command>.json and returns its text.
  std::string finish();

 private:
  std::filesystem::path file(const std::string& stem, const std::string& ext) const;

  std::string command_;
  std::string stem_;
  std::filesystem::path out_dir_;
  std::map<std::string, std::string> config_;
  nlohmann::ordered_json results_ = nlohmann::ordered_json::object();
  nlohmann::ordered_json checks_ = nlohmann::ordered_json::array();
  std::vector<std::string> files_;
};

std::string cell(double v);
std::string csv_escape(const std::string& s);
nlohmann::ordered_json number(double v);  // null when not finite

}  // namespace annular::cli
