#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace catape {

/// Token <-> dense index mapping with occurrence counts.
class Vocabulary {
 public:
  int add_occurrence(const std::string& token);
  int lookup(const std::string& token) const;  // -1 if absent
  const std::string& token(int index) const { return tokens_.at(static_cast<size_t>(index)); }
  std::int64_t frequency(int index) const { return freq_.at(static_cast<size_t>(index)); }
  const std::vector<std::int64_t>& frequencies() const { return freq_; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  int size() const { return static_cast<int>(tokens_.size()); }

 private:
  std::unordered_map<std::string, int> index_of_;
  std::vector<std::string> tokens_;
  std::vector<std::int64_t> freq_;
};

struct Event {
  int poi = -1;
  std::vector<int> categories;  // non-empty, file order
  std::int64_t timestamp = 0;
};

struct UserSequence {
  std::string user_id;
  std::vector<Event> events;  // sorted by timestamp, input order on ties
  int train_len = 0;          // train = events[0..train_len), test = the rest
};

struct Corpus {
  Vocabulary poi_vocab;
  Vocabulary cat_vocab;
  std::vector<UserSequence> users;
  std::int64_t total_checkins = 0;
  std::int64_t dropped_users = 0;  // users with <2 check-ins
};

struct IngestConfig {
  bool sentinel_category = false;  // map missing categories to __UNK__
  double split_ratio = 0.8;
};

inline constexpr const char* kSentinelCategory = "__UNK__";

/// Parses the TSV check-in log: user<TAB>poi<TAB>timestamp<TAB>cat1[,cat2,...].
/// Lines starting with '#' are comments. Throws std::runtime_error with the
/// offending line number on malformed input.
Corpus ingest(const std::string& path, const IngestConfig& config = {});

/// Sets each user's train/test split marker to floor(ratio * len).
void chronological_split(Corpus& corpus, double ratio);

struct ContextWindow {
  int center = -1;
  std::vector<int> context;
};

struct CategoryWindow {
  int poi = -1;        // POI owning the center category occurrence
  int center_cat = -1;
  std::vector<int> context_cats;
};

/// One window per train-prefix position of every user; context clipped to
/// sequence bounds, at most window_size items on each side.
std::vector<ContextWindow> poi_windows(const Corpus& corpus, int window_size);

/// Windows over the flattened per-user category sequence (each check-in
/// contributes its categories in file order). Train prefixes only.
std::vector<CategoryWindow> category_windows(const Corpus& corpus, int window_size);

// Versioned corpus cache (JSON). Version mismatch is a hard error.
void save_corpus(const Corpus& corpus, const std::string& path);
Corpus load_corpus(const std::string& path);

}  // namespace catape
