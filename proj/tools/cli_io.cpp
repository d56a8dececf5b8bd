#include "cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace annular::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + p.string());
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": empty key or value");
    }
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (!seen.insert(key).second) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": repeated key '" + key + "'");
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::vector<std::string> injected;
  bool have = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw std::invalid_argument("--config needs a file argument");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
      continue;
    }
    if (have) throw std::invalid_argument("--config given more than once");
    have = true;
    for (auto& [k, v] : read_key_values(path)) {
      // an explicit flag on the command line wins over the file
      const std::string flag = "--" + k;
      const bool explicit_flag = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
      });
      if (explicit_flag) continue;
      injected.push_back("--" + k);
      injected.push_back(v);
    }
  }
  if (!have) return rest;
  // rest[0] is the program, rest[1] the subcommand (if any)
  std::vector<std::string> out;
  const std::size_t head = std::min<std::size_t>(rest.size(), 2);
  out.insert(out.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(head));
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(head), rest.end());
  return out;
}

std::string cell(double v) { return format_double(v); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Artifact::Artifact(std::string command, std::string stem, std::filesystem::path out_dir,
                   std::map<std::string, std::string> config)
    : command_(std::move(command)), stem_(std::move(stem)), out_dir_(std::move(out_dir)), config_(std::move(config)) {
  std::filesystem::create_directories(out_dir_);
}

std::filesystem::path Artifact::file(const std::string& stem, const std::string& ext) const {
  return out_dir_ / (stem + ext);
}

void Artifact::add_check(const std::string& name, CheckStatus status, const std::string& detail, int criterion) {
  nlohmann::ordered_json c;
  c["name"] = name;
  c["status"] = to_string(status);
  if (!detail.empty()) c["detail"] = detail;
  if (criterion > 0) c["criterion"] = criterion;
  checks_.push_back(std::move(c));
}

void Artifact::add_checks(const AuditReport& report, int criterion, const std::string& prefix) {
  for (const auto& c : report.checks) add_check(prefix + c.name, c.status, c.detail, criterion);
}

void Artifact::table(const std::string& suffix, const std::vector<std::string>& columns,
                     const std::vector<std::vector<std::string>>& rows, const std::string& plot_hint) {
  const std::string stem = suffix.empty() ? stem_ : stem_ + "_" + suffix;
  std::string text = "# annular " + std::string(version()) + "\n# command: " + command_ + "\n";
  for (const auto& [k, v] : config_) text += "# " + k + " = " + v + "\n";
  if (!plot_hint.empty()) text += "# plot: " + plot_hint + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) text += (i ? "," : "") + csv_escape(columns[i]);
  text += "\n";
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw std::logic_error("csv row width mismatch in " + stem);
    for (std::size_t i = 0; i < row.size(); ++i) text += (i ? "," : "") + csv_escape(row[i]);
    text += "\n";
  }
  write_text(file(stem, ".csv"), text);
  files_.push_back(stem + ".csv");
}

void Artifact::table(const std::string& suffix, const AuditReport& report, const std::string& plot_hint) {
  std::vector<std::string> cols = report.columns;
  cols.push_back("note");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    std::vector<std::string> r;
    for (double v : report.rows[i]) r.push_back(cell(v));
    const auto it = report.notes.find(i);
    r.push_back(it == report.notes.end() ? "" : it->second);
    rows.push_back(std::move(r));
  }
  table(suffix, cols, rows, plot_hint);
}

bool Artifact::failed() const {
  for (const auto& c : checks_) {
    if (c["status"] == "fail") return true;
  }
  return false;
}

std::string Artifact::finish() {
  nlohmann::ordered_json j;
  j["schema_version"] = schema_version;
  j["tool"] = "annular";
  j["version"] = std::string(version());
  j["command"] = command_;
  j["config"] = config_;
  j["results"] = results_;
  j["checks"] = checks_;
  j["status"] = failed() ? "fail" : "pass";
  j["files"] = files_;
  const std::string text = j.dump(2) + "\n";
  write_text(file(stem_, ".json"), text);
  return text;
}

}  // namespace annular::cli
