#pragma once

#include <map>
#include <string>
#include <vector>

#include "ptk/common.hpp"

namespace ptk {

// Flat key = value configuration. '#' starts a comment. Keys not consumed by
// a scenario are rejected so typos fail loudly.
class KvConfig {
 public:
  static KvConfig parse(const std::string& text);
  static KvConfig load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;

  // Canonical sorted key=value text of every key actually consumed plus the
  // supplied ones; hashed into the manifest.
  std::string canonical() const;
  const std::map<std::string, std::string>& entries() const { return entries_; }
  std::vector<std::string> unconsumed() const;

 private:
  std::map<std::string, std::string> entries_;
  mutable std::map<std::string, std::string> consumed_;
};

struct StageTime {
  std::string name;
  double seconds = 0.0;
};

struct RunManifest {
  std::string config_hash;
  std::string version;
  std::vector<StageTime> stages;
  std::vector<std::string> outputs;
  std::map<std::string, std::string> config;

  std::string to_json() const;
};

inline const char* toolkit_version() { return "0.1.0"; }

const std::vector<std::string>& scenario_names();

// Executes one named scenario, writing CSV/JSON artifacts under out_dir.
// Throws validation_error for bad config values and numeric_error for
// failures of the computation itself.
RunManifest run_scenario(const std::string& scenario, KvConfig config,
                         const std::string& out_dir);

// Human-readable account of what the scenario computes and its full key
// schema. Throws validation_error for unknown scenarios.
std::string describe_scenario(const std::string& scenario);

}  // namespace ptk
