#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "infocontent/date.hpp"

namespace infocontent::corpus {

struct TranscriptRecord {
  std::string content_id;
  Date publish_date;
  std::string text;
};

// All scripts of one calendar day, concatenated in record order and tokenized.
struct TranscriptDay {
  Date date;
  std::vector<std::string> tokens;
  std::size_t source_count = 0;
};

// Firm aliases keyed by firm id. Names are stored NFC-normalized; names listed
// as exclusions are removed from every entry at construction.
class FirmDictionary {
 public:
  struct Entry {
    std::string firm_id;
    std::vector<std::string> names;
  };

  FirmDictionary() = default;
  // Throws InvalidArgument on duplicate firm ids or a name shared by two firms.
  FirmDictionary(std::vector<Entry> entries, std::set<std::string> exclusions);

  const std::vector<Entry>& entries() const { return entries_; }
  const std::set<std::string>& exclusions() const { return exclusions_; }
  // Entry index owning the (normalized) name, if any.
  std::optional<std::size_t> find(const std::string& name) const;

 private:
  std::vector<Entry> entries_;
  std::set<std::string> exclusions_;
  std::unordered_map<std::string, std::size_t> by_name_;
};

struct Mention {
  std::string firm_id;
  std::size_t count = 0;

  friend bool operator==(const Mention&, const Mention&) = default;
};

struct MentionSet {
  Date date;
  std::vector<Mention> mentions;  // ascending firm_id
};

inline constexpr std::size_t kDefaultMinMentions = 3;

// CSV `content_id,publish_date,text`.
std::vector<TranscriptRecord> load_transcripts(const std::filesystem::path& path);
std::vector<TranscriptDay> build_days(const std::vector<TranscriptRecord>& records);

// CSV `firm_id,name` (one row per alias) and an optional one-name-per-line
// exclusions file.
FirmDictionary load_firm_dictionary(const std::filesystem::path& firms,
                                    const std::optional<std::filesystem::path>& exclusions);

MentionSet extract_mentions(const TranscriptDay& day, const FirmDictionary& dict,
                            std::size_t min_mentions = kDefaultMinMentions);

}  // namespace infocontent::corpus
