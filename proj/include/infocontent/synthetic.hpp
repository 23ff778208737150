#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "infocontent/corpus.hpp"
#include "infocontent/date.hpp"
#include "infocontent/factormodel.hpp"
#include "infocontent/sentiment.hpp"

namespace infocontent::synthetic {

// Seeded generator. Raw draws come from std::mt19937_64, whose output sequence
// is fixed by the standard; uniforms take the top 53 bits and normals use the
// Box-Muller transform, so datasets are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal(double mean = 0.0, double sd = 1.0);
  std::uint64_t below(std::uint64_t n);  // uniform integer in [0, n)
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

struct SynthConfig {
  std::uint64_t seed = 1;
  std::size_t n_firms = 80;
  std::size_t n_days = 800;  // trading days
  Date start{2021, 1, 4};
  double holiday_prob = 0.01;  // weekday closed

  std::array<double, 5> factor_vol{0.010, 0.005, 0.005, 0.004, 0.004};
  double rf_daily = 0.0001;
  double idio_vol = 0.015;
  bool noise_free = false;  // no idiosyncratic noise and no zero-return days
  double illiquid_share = 0.2;
  double zero_return_prob = 0.15;  // per illiquid firm-day, varies by day

  // Abnormal return added to negative-sentiment events, in basis points per
  // day, over relative days [effect_start, effect_end].
  double planted_event_effect_bps = -50.0;
  int effect_start = 0;
  int effect_end = 5;
  std::size_t n_event_days = 30;
  std::size_t firms_per_event_day = 2;
  std::size_t min_mentions = 3;

  // P(RMRF(t) > 0) = logistic(intercept + strength * S(N, t - lag)).
  double planted_signal_strength = 0.8;
  double signal_intercept = -0.4;
  int signal_n = 10;
  int signal_lag = 2;

  std::size_t lexicon_positive = 40;
  std::size_t lexicon_negative = 40;
  std::size_t filler_vocabulary = 300;
  std::size_t filler_tokens = 60;
  double weekend_script_prob = 0.15;
  double silent_day_prob = 0.03;  // script without polarity words

  // Throws InvalidArgument for degenerate settings.
  void validate() const;
};

struct PlantedFirm {
  std::string firm_id;
  std::string exchange;
  bool illiquid = false;
  double alpha = 0.0;
  std::array<double, 5> betas{};  // contemporaneous exposures
};

struct PlantedEvent {
  std::string firm_id;
  Date date;
  sentiment::Polarity polarity = sentiment::Polarity::kPositive;
  double score = 0.0;
  double effect = 0.0;  // per-day abnormal return applied
};

struct GroundTruth {
  SynthConfig config;
  std::vector<PlantedFirm> firms;
  std::vector<PlantedEvent> events;
  std::vector<sentiment::SentimentObservation> sentiment;  // per content date
  std::size_t excluded_name_occurrences = 0;
};

struct SyntheticDataset {
  std::vector<factormodel::PanelRow> panel_rows;
  factormodel::FactorSeries factors;
  factormodel::DatedSeries rf;
  factormodel::DatedSeries nsi;
  factormodel::DatedSeries short_rate;
  std::vector<corpus::TranscriptRecord> transcripts;
  std::vector<std::string> lexicon_positive;
  std::vector<std::string> lexicon_negative;
  std::vector<corpus::FirmDictionary::Entry> firms;
  std::set<std::string> exclusions;
  GroundTruth truth;

  factormodel::SecurityPanel panel() const { return factormodel::SecurityPanel(panel_rows); }
  sentiment::Lexicon lexicon() const { return sentiment::make_lexicon(lexicon_positive, lexicon_negative); }
  corpus::FirmDictionary dictionary() const { return corpus::FirmDictionary(firms, exclusions); }
};

SyntheticDataset gen_dataset(const SynthConfig& config);

// Writes every input file plus ground_truth.json and a config.ini that runs the
// full pipeline on them. Returns the file names written, in order.
std::vector<std::string> write_dataset(const SyntheticDataset& data, const std::filesystem::path& dir);

}  // namespace infocontent::synthetic
