#include "infocontent/sentiment.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "infocontent/csv.hpp"
#include "infocontent/error.hpp"
#include "infocontent/text.hpp"

namespace infocontent::sentiment {

Lexicon make_lexicon(const std::vector<std::string>& positive, const std::vector<std::string>& negative) {
  Lexicon lex;
  for (const auto& w : positive) lex.positive.insert(nfc(w));
  for (const auto& w : negative) lex.negative.insert(nfc(w));
  std::set<std::string> conflicts;
  for (const auto& w : lex.positive)
    if (lex.negative.contains(w)) conflicts.insert(w);
  if (!conflicts.empty()) {
    std::string list;
    for (const auto& w : conflicts) list += (list.empty() ? "" : ", ") + w;
    throw InvalidArgument("lexicon: words listed as both positive and negative: " + list);
  }
  if (lex.positive.empty()) throw InvalidArgument("lexicon: positive list is empty");
  if (lex.negative.empty()) throw InvalidArgument("lexicon: negative list is empty");
  return lex;
}

namespace {

std::vector<std::string> read_words(const std::filesystem::path& path) {
  std::vector<std::string> words;
  for (const auto& line : read_lines(path)) {
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t");
    words.push_back(line.substr(first, last - first + 1));
  }
  return words;
}

}  // namespace

Lexicon load_lexicon(const std::filesystem::path& positive_path,
                     const std::filesystem::path& negative_path) {
  return make_lexicon(read_words(positive_path), read_words(negative_path));
}

std::optional<double> polarity_score(std::size_t n_positive, std::size_t n_negative) {
  const std::size_t total = n_positive + n_negative;
  if (total == 0) return std::nullopt;
  return (static_cast<double>(n_positive) - static_cast<double>(n_negative)) / static_cast<double>(total);
}

SentimentObservation score_day(const corpus::TranscriptDay& day, const Lexicon& lexicon) {
  SentimentObservation obs{day.date, 0, 0, std::nullopt};
  for (const auto& tok : day.tokens) {
    if (lexicon.positive.contains(tok))
      ++obs.n_positive;
    else if (lexicon.negative.contains(tok))
      ++obs.n_negative;
  }
  obs.score = polarity_score(obs.n_positive, obs.n_negative);
  return obs;
}

const char* to_string(Polarity p) { return p == Polarity::kPositive ? "positive" : "negative"; }

StockEvents build_stock_events(const std::vector<corpus::MentionSet>& mentions,
                               const std::vector<SentimentObservation>& scores) {
  std::map<Date, const SentimentObservation*> by_date;
  for (const auto& s : scores) by_date[s.date] = &s;

  StockEvents out;
  for (const auto& set : mentions) {
    auto it = by_date.find(set.date);
    for (const auto& m : set.mentions) {
      if (it == by_date.end()) {
        out.skipped.push_back({m.firm_id, set.date, "no sentiment score for date"});
      } else if (!it->second->score) {
        out.skipped.push_back({m.firm_id, set.date, "undefined sentiment score"});
      } else if (*it->second->score == 0.0) {
        out.skipped.push_back({m.firm_id, set.date, "zero sentiment score"});
      } else {
        double s = *it->second->score;
        out.events.push_back({m.firm_id, set.date, s, s > 0 ? Polarity::kPositive : Polarity::kNegative});
      }
    }
  }
  return out;
}

void write_sentiment_csv(std::ostream& out, const std::vector<SentimentObservation>& obs) {
  CsvWriter w(out);
  w.header({"date", "n_positive", "n_negative", "score"});
  for (const auto& o : obs) {
    w.field(o.date.iso()).field(o.n_positive).field(o.n_negative);
    if (o.score)
      w.field(*o.score);
    else
      w.empty();
    w.end_row();
  }
}

std::vector<SentimentObservation> read_sentiment_csv(const std::filesystem::path& path) {
  CsvTable t = read_csv(path, {"date", "n_positive", "n_negative", "score"});
  std::vector<SentimentObservation> out;
  for (const auto& row : t.rows) {
    SentimentObservation o;
    auto d = Date::parse(row.fields[0]);
    if (!d) throw ParseError(t.source, row.number, "date", "invalid date '" + row.fields[0] + "'");
    o.date = *d;
    auto np = parse_int(row.fields[1]), nn = parse_int(row.fields[2]);
    if (!np || *np < 0) throw ParseError(t.source, row.number, "n_positive", "not a count");
    if (!nn || *nn < 0) throw ParseError(t.source, row.number, "n_negative", "not a count");
    o.n_positive = static_cast<std::size_t>(*np);
    o.n_negative = static_cast<std::size_t>(*nn);
    if (!row.fields[3].empty()) o.score = cell_double(t, row, 3);
    out.push_back(o);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.date < b.date; });
  return out;
}

void write_events_csv(std::ostream& out, const std::vector<StockSentimentEvent>& events) {
  CsvWriter w(out);
  w.header({"firm_id", "announce_date", "sentiment", "polarity"});
  for (const auto& e : events) {
    w.field(e.firm_id).field(e.announce_date.iso()).field(e.sentiment).field(to_string(e.polarity));
    w.end_row();
  }
}

std::vector<StockSentimentEvent> read_events_csv(const std::filesystem::path& path) {
  CsvTable t = read_csv(path, {"firm_id", "announce_date", "sentiment", "polarity"});
  std::vector<StockSentimentEvent> out;
  for (const auto& row : t.rows) {
    StockSentimentEvent e;
    e.firm_id = row.fields[0];
    auto d = Date::parse(row.fields[1]);
    if (!d) throw ParseError(t.source, row.number, "announce_date", "invalid date");
    e.announce_date = *d;
    e.sentiment = cell_double(t, row, 2);
    if (row.fields[3] == "positive")
      e.polarity = Polarity::kPositive;
    else if (row.fields[3] == "negative")
      e.polarity = Polarity::kNegative;
    else
      throw ParseError(t.source, row.number, "polarity", "expected positive|negative");
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace infocontent::sentiment
