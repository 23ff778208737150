// Command-line front end. Links only the C interface.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "infocontent/infocontent.h"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string stage = "all";
  std::vector<std::string> sets;
  std::uint64_t seed = 1;
};

bool split_setting(const std::string& kv, std::string& key, std::string& value) {
  auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) return false;
  key = kv.substr(0, eq);
  value = kv.substr(eq + 1);
  return true;
}

int fail(ic_status s, const char* msg) {
  std::fprintf(stderr, "error (%s): %s\n", ic_status_string(s), msg);
  return 1 + static_cast<int>(s);
}

int run_stage(const Options& o, const std::string& stage) {
  ic_pipeline* p = nullptr;
  ic_status s = ic_pipeline_open(o.config.c_str(), &p);
  if (s != IC_OK) {
    int code = fail(s, p ? ic_pipeline_last_error(p) : "cannot open pipeline");
    ic_pipeline_close(p);
    return code;
  }
  for (const auto& kv : o.sets) {
    std::string key, value;
    if (!split_setting(kv, key, value)) {
      ic_pipeline_close(p);
      return fail(IC_CONFIG, ("--set expects key=value, got '" + kv + "'").c_str());
    }
    if ((s = ic_pipeline_set(p, key.c_str(), value.c_str())) != IC_OK) break;
  }
  if (s == IC_OK && !o.out.empty()) s = ic_pipeline_set_output(p, o.out.c_str());
  if (s == IC_OK) s = ic_pipeline_run(p, stage.c_str());
  int code = 0;
  if (s != IC_OK)
    code = fail(s, ic_pipeline_last_error(p));
  else
    std::fputs(ic_pipeline_summary(p), stdout);
  ic_pipeline_close(p);
  return code;
}

int run_synth(const Options& o) {
  ic_synth* g = nullptr;
  ic_status s = ic_synth_create(&g);
  if (s != IC_OK) return fail(s, "cannot create generator");
  for (const auto& kv : o.sets) {
    std::string key, value;
    if (!split_setting(kv, key, value)) {
      ic_synth_destroy(g);
      return fail(IC_INVALID_ARGUMENT, ("--set expects key=value, got '" + kv + "'").c_str());
    }
    if ((s = ic_synth_set(g, key.c_str(), value.c_str())) != IC_OK) break;
  }
  if (s == IC_OK) s = ic_synth_write(g, o.seed, o.out.c_str());
  int code = 0;
  if (s != IC_OK)
    code = fail(s, ic_synth_last_error(g));
  else
    std::printf("synthetic dataset (seed %llu) written to %s\n", static_cast<unsigned long long>(o.seed),
                o.out.c_str());
  ic_synth_destroy(g);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transcript sentiment, event-study and market-timing toolkit"};
  app.set_version_flag("--version", std::string(ic_version()));
  app.require_subcommand(1);
  Options o;

  auto add_pipeline_options = [&](CLI::App* sub) {
    sub->add_option("-c,--config", o.config, "run configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", o.out, "output directory (overrides the config)");
    sub->add_option("--set", o.sets, "override a config key, key=value (repeatable)");
  };

  const char* stages[][2] = {
      {"ingest", "tokenize transcripts and extract firm mentions"},
      {"sentiment", "score days and build stock events"},
      {"factors", "build or load the five-factor series and PctZero"},
      {"eventstudy", "abnormal returns, AAR and CAAR for both groups"},
      {"timing", "signal, R2 scan and long/short backtests"},
      {"regress", "logit regressions with macro controls"},
      {"all", "every stage in dependency order"},
  };
  for (auto& st : stages) add_pipeline_options(app.add_subcommand(st[0], st[1]));

  auto* run = app.add_subcommand("run", "run one stage chosen with --stage");
  add_pipeline_options(run);
  run->add_option("--stage", o.stage, "stage name")
      ->check(CLI::IsMember({"ingest", "sentiment", "factors", "eventstudy", "timing", "regress", "all"}));

  auto* synth = app.add_subcommand("synth", "write a synthetic dataset with planted ground truth");
  synth->add_option("-o,--out", o.out, "output directory")->required();
  synth->add_option("--seed", o.seed, "generator seed");
  synth->add_option("--set", o.sets, "generator setting, key=value (repeatable)");

  CLI11_PARSE(app, argc, argv);

  auto* sub = app.get_subcommands().front();
  if (sub == synth) return run_synth(o);
  if (sub == run) return run_stage(o, o.stage);
  return run_stage(o, sub->get_name());
}
