#include "infocontent/config.hpp"

#include <algorithm>
#include <sstream>

#include "infocontent/csv.hpp"
#include "infocontent/error.hpp"

namespace infocontent {

namespace {

const std::vector<std::string> kInputKeys = {"transcripts", "firms", "exclusions", "lexicon_positive",
                                             "lexicon_negative", "panel", "risk_free", "factors",
                                             "nsi", "short_rate", "pct_zero"};

std::string trim(const std::string& s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int to_int(const std::string& key, const std::string& value) {
  auto v = parse_int(value);
  if (!v) throw ConfigError("config: '" + key + "' expects an integer, got '" + value + "'");
  return static_cast<int>(*v);
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: '" + key + "' expects true or false, got '" + value + "'");
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (int x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    auto dash = item.find('-', 1);
    if (dash != std::string::npos) {
      auto lo = parse_int(item.substr(0, dash)), hi = parse_int(item.substr(dash + 1));
      if (!lo || !hi || *lo > *hi) throw ConfigError("config: bad range '" + item + "'");
      for (long long v = *lo; v <= *hi; ++v) out.push_back(static_cast<int>(v));
    } else {
      auto v = parse_int(item);
      if (!v) throw ConfigError("config: bad list item '" + item + "'");
      out.push_back(static_cast<int>(*v));
    }
  }
  if (out.empty()) throw ConfigError("config: empty list '" + text + "'");
  return out;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (std::find(kInputKeys.begin(), kInputKeys.end(), key) != kInputKeys.end()) {
    if (value.empty()) {
      inputs.erase(key);
      raw_inputs.erase(key);
      return;
    }
    std::filesystem::path p(value);
    inputs[key] = p.is_absolute() ? p : base_dir / p;
    raw_inputs[key] = value;
    return;
  }
  auto positive = [&](int v) {
    if (v <= 0) throw ConfigError("config: '" + key + "' must be positive");
    return v;
  };
  if (key == "output") {
    std::filesystem::path p(value);
    output_dir = p.is_absolute() ? p : base_dir / p;
  } else if (key == "min_mentions") {
    min_mentions = static_cast<std::size_t>(positive(to_int(key, value)));
  } else if (key == "est_start") {
    event.window.est_start = to_int(key, value);
  } else if (key == "est_end") {
    event.window.est_end = to_int(key, value);
  } else if (key == "event_start") {
    event.window.evt_start = to_int(key, value);
  } else if (key == "event_length") {
    event.window.evt_len = to_int(key, value);
  } else if (key == "sub_start") {
    event.sub_start = to_int(key, value);
  } else if (key == "sub_length") {
    event.sub_len = to_int(key, value);
  } else if (key == "min_est_obs") {
    event.window.min_est_obs = static_cast<std::size_t>(positive(to_int(key, value)));
  } else if (key == "signal_n") {
    signal_ns = parse_int_list(value);
    for (int n : signal_ns) positive(n);
  } else if (key == "backtest_n") {
    backtest_ns = parse_int_list(value);
    for (int n : backtest_ns) positive(n);
  } else if (key == "regress_n") {
    regress_n = positive(to_int(key, value));
  } else if (key == "lag") {
    lag = to_int(key, value);
    if (lag < 0) throw ConfigError("config: 'lag' must be >= 0");
  } else if (key == "window_mode") {
    if (value == "inclusive")
      window_mode = timing::WindowMode::kInclusive;
    else if (value == "exclusive")
      window_mode = timing::WindowMode::kExclusive;
    else
      throw ConfigError("config: 'window_mode' expects inclusive or exclusive");
  } else if (key == "tie_is_up") {
    tie_is_up = to_bool(key, value);
  } else if (key == "ols") {
    ols = to_bool(key, value);
  } else if (key == "robust_se") {
    robust_se = to_bool(key, value);
  } else if (key == "manifest_timings") {
    manifest_timings = to_bool(key, value);
  } else if (key == "main_exchange") {
    if (value.empty()) throw ConfigError("config: 'main_exchange' must not be empty");
    factor.main_exchange = value;
  } else if (key == "rebalance_month") {
    int m = to_int(key, value);
    if (m < 1 || m > 12) throw ConfigError("config: 'rebalance_month' must be 1..12");
    factor.rebalance_month = static_cast<unsigned>(m);
  } else if (key == "rebalance_day") {
    int d = to_int(key, value);
    if (d < 1 || d > 28) throw ConfigError("config: 'rebalance_day' must be 1..28");
    factor.rebalance_day = static_cast<unsigned>(d);
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

RunConfig RunConfig::parse(const std::string& text, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  cfg.base_dir = base_dir;
  cfg.output_dir = base_dir / "out";
  std::stringstream ss(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(ss, line)) {
    ++number;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(number) + ": expected 'key = value'");
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  try {
    cfg.event.window.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec))
    throw ConfigError("config file '" + path.string() + "' does not exist");
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  auto dir = path.parent_path();
  return parse(text, dir.empty() ? std::filesystem::path(".") : dir);
}

std::optional<std::filesystem::path> RunConfig::input(const std::string& key) const {
  auto it = inputs.find(key);
  if (it == inputs.end()) return std::nullopt;
  return it->second;
}

void RunConfig::validate() const {
  for (const auto& [key, path] : inputs) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec))
      throw ConfigError("config: input '" + key + "' = '" + path.string() + "' does not exist");
  }
  try {
    event.window.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

std::string RunConfig::canonical() const {
  std::map<std::string, std::string> kv;
  for (const auto& [k, v] : raw_inputs) kv[k] = v;
  kv["min_mentions"] = std::to_string(min_mentions);
  kv["est_start"] = std::to_string(event.window.est_start);
  kv["est_end"] = std::to_string(event.window.est_end);
  kv["event_start"] = std::to_string(event.window.evt_start);
  kv["event_length"] = std::to_string(event.window.evt_len);
  kv["sub_start"] = std::to_string(event.sub_start);
  kv["sub_length"] = std::to_string(event.sub_len);
  kv["min_est_obs"] = std::to_string(event.window.min_est_obs);
  kv["signal_n"] = join(signal_ns);
  kv["backtest_n"] = join(backtest_ns);
  kv["regress_n"] = std::to_string(regress_n);
  kv["lag"] = std::to_string(lag);
  kv["window_mode"] = window_mode == timing::WindowMode::kInclusive ? "inclusive" : "exclusive";
  kv["tie_is_up"] = tie_is_up ? "true" : "false";
  kv["ols"] = ols ? "true" : "false";
  kv["robust_se"] = robust_se ? "true" : "false";
  kv["main_exchange"] = factor.main_exchange;
  kv["rebalance_month"] = std::to_string(factor.rebalance_month);
  kv["rebalance_day"] = std::to_string(factor.rebalance_day);
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

}  // namespace infocontent
