#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lcqft/errors.hpp"
#include "lcqft/suites.hpp"

namespace lcqft::suites {

using nlohmann::ordered_json;

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
  }
  return "fail";
}

Status status_from_name(const std::string& s) {
  if (s == "pass") return Status::Pass;
  if (s == "fail") return Status::Fail;
  if (s == "inconclusive") return Status::Inconclusive;
  throw Error(ErrorCode::InvalidArgument, "unknown status '" + s + "'");
}

bool Check::operator==(const Check& o) const {
  auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
  return name == o.name && criterion == o.criterion && status == o.status && same(metric, o.metric) &&
         same(tolerance, o.tolerance);
}

bool SuiteReport::failed() const {
  for (const auto& c : checks)
    if (c.status == Status::Fail) return true;
  return false;
}

bool Report::failed() const {
  for (const auto& s : suites)
    if (s.failed()) return true;
  return false;
}

int exit_code(const Report& r) { return r.failed() ? 1 : 0; }

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_error(const std::string& source, int line, const std::string& msg) {
  throw Error(ErrorCode::ConfigParse, source + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& source) {
  Config c;
  c.source_ = source;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) parse_error(source, line, "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "general" && section != "all") {
        const auto names = suite_names();
        if (std::find(names.begin(), names.end(), section) == names.end())
          parse_error(source, line, "unknown section '" + section + "'");
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) parse_error(source, line, "expected key = value");
    const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    if (key.empty()) parse_error(source, line, "empty key");
    if (value.empty()) parse_error(source, line, "empty value for '" + key + "'");
    auto& sec = c.sections_[section == "general" ? "" : section];
    if (sec.count(key)) parse_error(source, line, "duplicate key '" + key + "'");
    sec[key] = {value, line};
  }
  // Validate the seed eagerly so a bad value is reported against its line.
  (void)c.seed();
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

Config resolve_config(const std::string& explicit_path) {
  if (!explicit_path.empty()) return Config::load(explicit_path);
  if (const char* env = std::getenv(kConfigEnv); env && *env) return Config::load(env);
  return Config{};
}

Config::Entry Config::find(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  if (s != sections_.end()) {
    auto k = s->second.find(key);
    if (k != s->second.end()) return k->second;
  }
  if (!section.empty() && section != "all") return find("all", key);
  return {"", -1};
}

bool Config::has(const std::string& section, const std::string& key) const { return find(section, key).line >= 0; }

std::string Config::get(const std::string& section, const std::string& key, const std::string& fallback) const {
  const Entry e = find(section, key);
  return e.line >= 0 ? e.value : fallback;
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
  const Entry e = find(section, key);
  if (e.line < 0) return fallback;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(e.value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != e.value.size()) parse_error(source_, e.line, "'" + key + "' is not a number: " + e.value);
  return v;
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
  const Entry e = find(section, key);
  if (e.line < 0) return fallback;
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(e.value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != e.value.size()) parse_error(source_, e.line, "'" + key + "' is not an integer: " + e.value);
  return v;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  sections_[section][key] = {value, 0};
}

std::uint64_t Config::seed() const {
  const Entry e = find("", "seed");
  if (e.line < 0) return kDefaultSeed;
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(e.value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != e.value.size()) parse_error(source_, e.line, "seed is not an unsigned integer: " + e.value);
  return v;
}

void Config::set_seed(std::uint64_t s) { set("", "seed", std::to_string(s)); }

namespace {

ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

double read_number(const ordered_json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw Error(ErrorCode::InvalidArgument, "bad number '" + s + "'");
  }
  return j.get<double>();
}

}  // namespace

std::string to_json(const Report& r, const ExportOptions& opt) {
  ordered_json root;
  root["schema"] = "lcqft-report/1";
  root["seed"] = r.seed;
  root["failed"] = r.failed();
  ordered_json suites = ordered_json::array();
  for (const auto& s : r.suites) {
    ordered_json js;
    js["suite"] = s.suite;
    js["wall_time_ms"] = opt.timing ? s.wall_time_ms : 0.0;
    ordered_json checks = ordered_json::array();
    for (const auto& c : s.checks) {
      ordered_json jc;
      jc["name"] = c.name;
      jc["criterion"] = c.criterion;
      jc["status"] = status_name(c.status);
      jc["metric"] = number(c.metric);
      jc["tolerance"] = number(c.tolerance);
      checks.push_back(std::move(jc));
    }
    js["checks"] = std::move(checks);
    suites.push_back(std::move(js));
  }
  root["suites"] = std::move(suites);
  return root.dump(2) + "\n";
}

Report from_json(const std::string& text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("report is not JSON: ") + e.what());
  }
  try {
    Report r;
    r.seed = root.at("seed").get<std::uint64_t>();
    for (const auto& js : root.at("suites")) {
      SuiteReport s;
      s.suite = js.at("suite").get<std::string>();
      s.wall_time_ms = js.at("wall_time_ms").get<double>();
      for (const auto& jc : js.at("checks"))
        s.checks.push_back({jc.at("name").get<std::string>(), jc.at("criterion").get<int>(),
                            status_from_name(jc.at("status").get<std::string>()), read_number(jc.at("metric")),
                            read_number(jc.at("tolerance"))});
      r.suites.push_back(std::move(s));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("report does not match the schema: ") + e.what());
  }
}

std::string to_csv(const Report& r, const ExportOptions& opt) {
  std::ostringstream out;
  out << "suite,check,criterion,status,metric,tolerance,wall_time_ms\n";
  out << std::setprecision(17);
  for (const auto& s : r.suites)
    for (const auto& c : s.checks)
      out << s.suite << ',' << c.name << ',' << c.criterion << ',' << status_name(c.status) << ',' << c.metric << ','
          << c.tolerance << ',' << (opt.timing ? s.wall_time_ms : 0.0) << '\n';
  return out.str();
}

void export_report(const Report& r, const std::string& format, const std::string& path, const ExportOptions& opt) {
  std::string body;
  if (format == "json") body = to_json(r, opt);
  else if (format == "csv") body = to_csv(r, opt);
  else throw Error(ErrorCode::InvalidArgument, "unknown format '" + format + "'");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  f << body;
  if (!f) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

}  // namespace lcqft::suites
