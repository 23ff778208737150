#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

#include "infocontent/corpus.hpp"
#include "infocontent/date.hpp"

namespace infocontent::sentiment {

// Polarity word lists. Words are NFC-normalized; the sets are disjoint.
struct Lexicon {
  std::unordered_set<std::string> positive;
  std::unordered_set<std::string> negative;
};

// Throws InvalidArgument listing every word found in both lists, or when
// either list is empty.
Lexicon make_lexicon(const std::vector<std::string>& positive, const std::vector<std::string>& negative);
Lexicon load_lexicon(const std::filesystem::path& positive_path,
                     const std::filesystem::path& negative_path);

struct SentimentObservation {
  Date date;
  std::size_t n_positive = 0;
  std::size_t n_negative = 0;
  std::optional<double> score;  // nullopt when no polarity word occurs
};

// (pos - neg) / (pos + neg); nullopt when both counts are zero.
std::optional<double> polarity_score(std::size_t n_positive, std::size_t n_negative);

// Every token occurrence counts, duplicates included.
SentimentObservation score_day(const corpus::TranscriptDay& day, const Lexicon& lexicon);

enum class Polarity { kPositive, kNegative };
const char* to_string(Polarity p);

struct StockSentimentEvent {
  std::string firm_id;
  Date announce_date;
  double sentiment = 0.0;
  Polarity polarity = Polarity::kPositive;
};

struct SkippedMention {
  std::string firm_id;
  Date date;
  std::string reason;
};

struct StockEvents {
  std::vector<StockSentimentEvent> events;
  std::vector<SkippedMention> skipped;
};

// Tags each mentioned firm with its day's score. Mentions on days with no
// score, an undefined score, or a score of exactly zero are skipped and logged.
StockEvents build_stock_events(const std::vector<corpus::MentionSet>& mentions,
                               const std::vector<SentimentObservation>& scores);

// `date,n_positive,n_negative,score`; undefined scores are written as an empty field.
void write_sentiment_csv(std::ostream& out, const std::vector<SentimentObservation>& obs);
std::vector<SentimentObservation> read_sentiment_csv(const std::filesystem::path& path);

// `firm_id,announce_date,sentiment,polarity`
void write_events_csv(std::ostream& out, const std::vector<StockSentimentEvent>& events);
std::vector<StockSentimentEvent> read_events_csv(const std::filesystem::path& path);

}  // namespace infocontent::sentiment
