#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "infocontent/config.hpp"
#include "infocontent/factormodel.hpp"

namespace infocontent {

enum class Stage { kIngest, kSentiment, kFactors, kEventStudy, kTiming, kRegress, kAll };

// Throws ConfigError for unknown names.
Stage parse_stage(const std::string& name);
const char* stage_name(Stage s);

struct StageReport {
  std::string stage;
  std::map<std::string, std::size_t> rows;  // output file -> data rows
  std::map<std::string, std::size_t> counts;
  std::size_t exclusions = 0;
  std::vector<std::string> warnings;
  double seconds = 0.0;
};

// Runs stages against one output directory. Each stage reads its upstream
// intermediates from that directory, so stages can run in separate processes.
class Pipeline {
 public:
  explicit Pipeline(RunConfig config);

  // Runs the stage (all stages, in dependency order, for kAll), then rewrites
  // manifest.json. Throws DependencyError when an upstream intermediate is
  // missing, and propagates module errors prefixed with the stage name.
  std::vector<StageReport> run(Stage stage);

  const RunConfig& config() const { return config_; }

 private:
  StageReport run_one(Stage stage);
  StageReport ingest();
  StageReport sentiment();
  StageReport factors();
  StageReport eventstudy();
  StageReport timing();
  StageReport regress();

  std::filesystem::path out(const std::string& name) const { return config_.output_dir / name; }
  std::filesystem::path require(const std::string& file, Stage producer, Stage consumer) const;
  std::filesystem::path require_input(const std::string& key, Stage consumer) const;
  const factormodel::SecurityPanel& panel();
  void write_manifest(const std::vector<StageReport>& reports);

  RunConfig config_;
  std::unique_ptr<factormodel::SecurityPanel> panel_;
};

}  // namespace infocontent
