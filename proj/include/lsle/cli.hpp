#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace lsle::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerdictFailure = 2;

// Bad configuration; key() names the offending field ("" when not about one).
class UsageError : public std::runtime_error {
 public:
  UsageError(std::string key, const std::string& message)
      : std::runtime_error(key.empty() ? message : "`" + key + "`: " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

struct RunConfig {
  std::string command;  // gas, oracle-compare, loewner-trace, field-sample, verify-coupling, qv-check
  std::uint64_t seed = 1;
  Json params = Json::object();
  std::filesystem::path out_dir = ".";
};

const std::vector<std::string>& commands();

// {"command": ..., "seed": ..., "params": {...}, "out_dir": ...}; unknown keys
// at either level are rejected, and all params are range-checked up front.
RunConfig parse_run_config(const Json& document);

// Named campaign presets, e.g. "coupling-h1".
const std::vector<std::string>& preset_names();
RunConfig preset(const std::string& name);

// Executes the campaign and writes <command>-<seed>.csv and .json into
// out_dir (plus a .timing.json with the wall time, kept out of the
// reproducible artifacts). Returns kExitPass / kExitVerdictFailure; usage and
// precondition errors are reported on `err` and return kExitUsage.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Aggregate of report JSON files: campaigns, verdict pass/fail counts, worst
// tolerance use and total runtime (from timing sidecars, when present).
Json summarize(const std::vector<std::filesystem::path>& reports);

// Command-line entry: `lsle [--config f | --preset p] [--threads n] [--out d]`
// or `lsle summarize <report.json>...`.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

// "%.17g", shared by every CSV writer.
std::string format_double(double v);

}  // namespace lsle::cli
