#include "infocontent/corpus.hpp"

#include <algorithm>

#include "infocontent/csv.hpp"
#include "infocontent/error.hpp"
#include "infocontent/text.hpp"

namespace infocontent::corpus {

FirmDictionary::FirmDictionary(std::vector<Entry> entries, std::set<std::string> exclusions) {
  for (const auto& ex : exclusions) exclusions_.insert(nfc(ex));
  std::set<std::string> seen_ids;
  for (auto& e : entries) {
    if (e.firm_id.empty()) throw InvalidArgument("firm dictionary: empty firm_id");
    if (!seen_ids.insert(e.firm_id).second)
      throw InvalidArgument("firm dictionary: duplicate firm_id '" + e.firm_id + "'");
    Entry kept{e.firm_id, {}};
    for (const auto& raw : e.names) {
      std::string name = nfc(raw);
      if (name.empty() || exclusions_.contains(name)) continue;
      if (std::find(kept.names.begin(), kept.names.end(), name) != kept.names.end()) continue;
      auto [it, inserted] = by_name_.emplace(name, entries_.size());
      if (!inserted && it->second != entries_.size())
        throw InvalidArgument("firm dictionary: name '" + name + "' belongs to both '" +
                              entries_[it->second].firm_id + "' and '" + e.firm_id + "'");
      kept.names.push_back(std::move(name));
    }
    // Firms whose every alias is excluded cannot be matched and are dropped.
    if (kept.names.empty()) continue;
    entries_.push_back(std::move(kept));
  }
}

std::optional<std::size_t> FirmDictionary::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::vector<TranscriptRecord> load_transcripts(const std::filesystem::path& path) {
  CsvTable t = read_csv(path, {"content_id", "publish_date", "text"});
  std::vector<TranscriptRecord> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    if (row.fields[0].empty()) throw ParseError(t.source, row.number, "content_id", "empty");
    auto date = Date::parse(row.fields[1]);
    if (!date)
      throw ParseError(t.source, row.number, "publish_date", "invalid date '" + row.fields[1] + "'");
    out.push_back({row.fields[0], *date, row.fields[2]});
  }
  return out;
}

std::vector<TranscriptDay> build_days(const std::vector<TranscriptRecord>& records) {
  std::map<Date, TranscriptDay> by_date;
  for (const auto& rec : records) {
    auto& day = by_date[rec.publish_date];
    day.date = rec.publish_date;
    ++day.source_count;
    auto toks = tokenize(rec.text);
    day.tokens.insert(day.tokens.end(), std::make_move_iterator(toks.begin()),
                      std::make_move_iterator(toks.end()));
  }
  std::vector<TranscriptDay> out;
  out.reserve(by_date.size());
  for (auto& [_, day] : by_date) out.push_back(std::move(day));
  return out;
}

FirmDictionary load_firm_dictionary(const std::filesystem::path& firms,
                                    const std::optional<std::filesystem::path>& exclusions) {
  CsvTable t = read_csv(firms, {"firm_id", "name"});
  std::vector<FirmDictionary::Entry> entries;
  std::map<std::string, std::size_t> index;
  for (const auto& row : t.rows) {
    if (row.fields[0].empty()) throw ParseError(t.source, row.number, "firm_id", "empty");
    if (row.fields[1].empty()) throw ParseError(t.source, row.number, "name", "empty");
    auto [it, inserted] = index.emplace(row.fields[0], entries.size());
    if (inserted) entries.push_back({row.fields[0], {}});
    entries[it->second].names.push_back(row.fields[1]);
  }
  std::set<std::string> excluded;
  if (exclusions) {
    for (const auto& line : read_lines(*exclusions)) {
      auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      auto last = line.find_last_not_of(" \t");
      excluded.insert(line.substr(first, last - first + 1));
    }
  }
  return FirmDictionary(std::move(entries), std::move(excluded));
}

MentionSet extract_mentions(const TranscriptDay& day, const FirmDictionary& dict,
                            std::size_t min_mentions) {
  if (min_mentions == 0) throw InvalidArgument("min_mentions must be >= 1");
  std::vector<std::size_t> counts(dict.entries().size(), 0);
  for (const auto& tok : day.tokens) {
    if (dict.exclusions().contains(tok)) continue;
    if (auto idx = dict.find(tok)) ++counts[*idx];
  }
  MentionSet out{day.date, {}};
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] >= min_mentions) out.mentions.push_back({dict.entries()[i].firm_id, counts[i]});
  std::sort(out.mentions.begin(), out.mentions.end(),
            [](const Mention& a, const Mention& b) { return a.firm_id < b.firm_id; });
  return out;
}

}  // namespace infocontent::corpus
