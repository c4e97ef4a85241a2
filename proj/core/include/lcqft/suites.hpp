#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lcqft::suites {

enum class Status { Pass, Fail, Inconclusive };
const char* status_name(Status s);
Status status_from_name(const std::string& s);

struct Check {
  std::string name;
  int criterion = 0;  // acceptance criterion id, 0 for supplementary checks
  Status status = Status::Fail;
  double metric = 0.0;
  double tolerance = 0.0;

  bool operator==(const Check& o) const;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  double wall_time_ms = 0.0;

  bool failed() const;
  bool operator==(const SuiteReport& o) const = default;
};

struct Report {
  std::uint64_t seed = 0;
  std::vector<SuiteReport> suites;  // sorted by suite name

  bool failed() const;
  bool operator==(const Report& o) const = default;
};

// Key-value config with [section] headers. Keys before the first header, or under [general], belong to
// section "". A suite section falls back to [all] for keys it does not set.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& source = "<string>");
  // Throws IoError if unreadable, ConfigParse with the line number otherwise.
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  void set(const std::string& section, const std::string& key, const std::string& value);

  std::uint64_t seed() const;
  void set_seed(std::uint64_t s);

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::string source_ = "<defaults>";
  Entry find(const std::string& section, const std::string& key) const;
};

// Path precedence: explicit argument, then $LCQFT_CONFIG, then defaults.
Config resolve_config(const std::string& explicit_path);
inline constexpr const char* kConfigEnv = "LCQFT_CONFIG";
inline constexpr std::uint64_t kDefaultSeed = 20240611;

std::vector<std::string> suite_names();  // without "all"

// Runs one named suite. Throws UnknownSuite.
SuiteReport run_suite(const std::string& name, const Config& cfg);
// Expands "all"; reports come back sorted by suite name.
Report run_suites(const std::string& name, const Config& cfg);

int exit_code(const Report& r);  // 0 if nothing failed, else 1

struct ExportOptions {
  bool timing = true;  // false writes wall_time_ms = 0 for byte-stable output
};
std::string to_json(const Report& r, const ExportOptions& opt = {});
std::string to_csv(const Report& r, const ExportOptions& opt = {});
Report from_json(const std::string& text);
// format is "json" or "csv"; throws IoError or InvalidArgument.
void export_report(const Report& r, const std::string& format, const std::string& path, const ExportOptions& opt = {});

}  // namespace lcqft::suites
