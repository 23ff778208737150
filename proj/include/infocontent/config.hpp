#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "infocontent/eventstudy.hpp"
#include "infocontent/factormodel.hpp"
#include "infocontent/timing.hpp"

namespace infocontent {

// Declarative run settings. The file format is `key = value` per line with
// `#` comments; relative paths resolve against the config file's directory.
//
// Input keys: transcripts, firms, exclusions, lexicon_positive,
//   lexicon_negative, panel, risk_free, factors, nsi, short_rate, pct_zero.
// Parameters: min_mentions, est_start, est_end, event_start, event_length,
//   sub_start, sub_length, min_est_obs, signal_n, backtest_n, regress_n, lag,
//   window_mode, tie_is_up, ols, robust_se, main_exchange, rebalance_month,
//   rebalance_day, manifest_timings, output.
struct RunConfig {
  std::filesystem::path base_dir = ".";

  std::map<std::string, std::filesystem::path> inputs;  // key -> resolved path
  std::map<std::string, std::string> raw_inputs;        // key -> path as written
  std::filesystem::path output_dir = "out";

  std::size_t min_mentions = 3;
  eventstudy::EventStudyConfig event;
  std::vector<int> signal_ns = {5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
  std::vector<int> backtest_ns = {5, 10, 20};
  int regress_n = 10;
  int lag = 2;
  timing::WindowMode window_mode = timing::WindowMode::kInclusive;
  bool tie_is_up = false;
  bool ols = false;
  bool robust_se = false;
  bool manifest_timings = false;
  factormodel::FactorConfig factor;

  static RunConfig parse(const std::string& text, const std::filesystem::path& base_dir);
  // Throws ConfigError when the file is missing or invalid.
  static RunConfig load(const std::filesystem::path& path);

  // Applies one `key=value` setting; throws ConfigError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);

  std::optional<std::filesystem::path> input(const std::string& key) const;
  // Existence check for every configured input file.
  void validate() const;
  // Sorted `key=value` lines of every effective setting; hashed into the manifest.
  std::string canonical() const;
};

// "5,10,20", "5-20" or a mix such as "3,5-7".
std::vector<int> parse_int_list(const std::string& text);

}  // namespace infocontent
