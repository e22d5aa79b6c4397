#include "catape/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace catape {

int Vocabulary::add_occurrence(const std::string& token) {
  auto [it, inserted] = index_of_.try_emplace(token, static_cast<int>(tokens_.size()));
  if (inserted) {
    tokens_.push_back(token);
    freq_.push_back(0);
  }
  ++freq_[static_cast<size_t>(it->second)];
  return it->second;
}

int Vocabulary::lookup(const std::string& token) const {
  auto it = index_of_.find(token);
  return it == index_of_.end() ? -1 : it->second;
}

namespace {

struct RawRecord {
  std::string poi;
  std::vector<std::string> cats;
  std::int64_t timestamp;
  std::int64_t order;  // input line order, tie-breaker
};

std::vector<std::string> split_char(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

Corpus ingest(const std::string& path, const IngestConfig& config) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);

  // user -> records, in first-seen user order for determinism
  std::vector<std::string> user_order;
  std::unordered_map<std::string, std::vector<RawRecord>> by_user;

  std::string line;
  std::int64_t line_no = 0;
  std::int64_t n_records = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_char(line, '\t');
    if (fields.size() < 3 || fields[0].empty() || fields[1].empty())
      throw std::runtime_error("malformed line " + std::to_string(line_no) + ": expected user<TAB>poi<TAB>timestamp<TAB>categories");
    std::int64_t ts;
    try {
      size_t pos = 0;
      ts = std::stoll(fields[2], &pos);
      if (pos != fields[2].size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::runtime_error("malformed line " + std::to_string(line_no) + ": bad timestamp '" + fields[2] + "'");
    }
    if (ts < 0)
      throw std::runtime_error("malformed line " + std::to_string(line_no) + ": negative timestamp");

    std::vector<std::string> cats;
    if (fields.size() >= 4 && !fields[3].empty()) {
      cats = split_char(fields[3], ',');
      for (const auto& c : cats)
        if (c.empty())
          throw std::runtime_error("malformed line " + std::to_string(line_no) + ": empty category token");
    } else if (config.sentinel_category) {
      cats = {kSentinelCategory};
    } else {
      throw std::runtime_error("malformed line " + std::to_string(line_no) + ": missing category column (use --sentinel-category to allow)");
    }

    auto [it, inserted] = by_user.try_emplace(fields[0]);
    if (inserted) user_order.push_back(fields[0]);
    it->second.push_back(RawRecord{fields[1], std::move(cats), ts, line_no});
    ++n_records;
  }
  if (n_records == 0) throw std::runtime_error("empty input file: " + path);

  Corpus corpus;
  for (const auto& uid : user_order) {
    auto& recs = by_user.at(uid);
    if (recs.size() < 2) {
      ++corpus.dropped_users;
      continue;
    }
    std::stable_sort(recs.begin(), recs.end(), [](const RawRecord& a, const RawRecord& b) {
      return a.timestamp < b.timestamp;
    });
    UserSequence seq;
    seq.user_id = uid;
    seq.events.reserve(recs.size());
    for (const auto& r : recs) {
      Event ev;
      ev.poi = corpus.poi_vocab.add_occurrence(r.poi);
      for (const auto& c : r.cats) ev.categories.push_back(corpus.cat_vocab.add_occurrence(c));
      ev.timestamp = r.timestamp;
      seq.events.push_back(std::move(ev));
    }
    corpus.total_checkins += static_cast<std::int64_t>(seq.events.size());
    corpus.users.push_back(std::move(seq));
  }
  chronological_split(corpus, config.split_ratio);
  return corpus;
}

void chronological_split(Corpus& corpus, double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("split ratio must lie in (0,1)");
  for (auto& u : corpus.users)
    u.train_len = static_cast<int>(std::floor(ratio * static_cast<double>(u.events.size())));
}

std::vector<ContextWindow> poi_windows(const Corpus& corpus, int window_size) {
  if (window_size < 1) throw std::invalid_argument("window_size must be >= 1");
  std::vector<ContextWindow> out;
  for (const auto& u : corpus.users) {
    const int n = u.train_len;
    for (int t = 0; t < n; ++t) {
      ContextWindow w;
      w.center = u.events[static_cast<size_t>(t)].poi;
      const int lo = std::max(0, t - window_size);
      const int hi = std::min(n - 1, t + window_size);
      for (int s = lo; s <= hi; ++s)
        if (s != t) w.context.push_back(u.events[static_cast<size_t>(s)].poi);
      out.push_back(std::move(w));
    }
  }
  return out;
}

std::vector<CategoryWindow> category_windows(const Corpus& corpus, int window_size) {
  if (window_size < 1) throw std::invalid_argument("window_size must be >= 1");
  std::vector<CategoryWindow> out;
  for (const auto& u : corpus.users) {
    // Flatten the train prefix into a (owner poi, category) sequence.
    std::vector<std::pair<int, int>> seq;
    for (int t = 0; t < u.train_len; ++t)
      for (int c : u.events[static_cast<size_t>(t)].categories)
        seq.emplace_back(u.events[static_cast<size_t>(t)].poi, c);
    const int n = static_cast<int>(seq.size());
    for (int t = 0; t < n; ++t) {
      CategoryWindow w;
      w.poi = seq[static_cast<size_t>(t)].first;
      w.center_cat = seq[static_cast<size_t>(t)].second;
      const int lo = std::max(0, t - window_size);
      const int hi = std::min(n - 1, t + window_size);
      for (int s = lo; s <= hi; ++s)
        if (s != t) w.context_cats.push_back(seq[static_cast<size_t>(s)].second);
      out.push_back(std::move(w));
    }
  }
  return out;
}

namespace {
constexpr int kCacheVersion = 1;

nlohmann::json vocab_to_json(const Vocabulary& v) {
  return {{"tokens", v.tokens()}, {"freq", v.frequencies()}};
}

Vocabulary vocab_from_json(const nlohmann::json& j) {
  Vocabulary v;
  auto tokens = j.at("tokens").get<std::vector<std::string>>();
  auto freq = j.at("freq").get<std::vector<std::int64_t>>();
  if (tokens.size() != freq.size()) throw std::runtime_error("corpus cache: vocabulary token/freq size mismatch");
  for (size_t i = 0; i < tokens.size(); ++i)
    for (std::int64_t k = 0; k < freq[i]; ++k) v.add_occurrence(tokens[i]);
  return v;
}
}  // namespace

void save_corpus(const Corpus& corpus, const std::string& path) {
  nlohmann::json j;
  j["version"] = kCacheVersion;
  j["poi_vocab"] = vocab_to_json(corpus.poi_vocab);
  j["cat_vocab"] = vocab_to_json(corpus.cat_vocab);
  j["total_checkins"] = corpus.total_checkins;
  j["dropped_users"] = corpus.dropped_users;
  nlohmann::json users = nlohmann::json::array();
  for (const auto& u : corpus.users) {
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : u.events) events.push_back({e.poi, e.categories, e.timestamp});
    users.push_back({{"id", u.user_id}, {"train_len", u.train_len}, {"events", std::move(events)}});
  }
  j["users"] = std::move(users);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write corpus cache: " + path);
  out << j.dump() << "\n";
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus cache: " + path);
  nlohmann::json j;
  in >> j;
  if (j.at("version").get<int>() != kCacheVersion)
    throw std::runtime_error("corpus cache version mismatch: expected " + std::to_string(kCacheVersion) +
                             ", got " + j.at("version").dump());
  Corpus corpus;
  corpus.poi_vocab = vocab_from_json(j.at("poi_vocab"));
  corpus.cat_vocab = vocab_from_json(j.at("cat_vocab"));
  corpus.total_checkins = j.at("total_checkins").get<std::int64_t>();
  corpus.dropped_users = j.at("dropped_users").get<std::int64_t>();
  for (const auto& ju : j.at("users")) {
    UserSequence u;
    u.user_id = ju.at("id").get<std::string>();
    u.train_len = ju.at("train_len").get<int>();
    for (const auto& je : ju.at("events")) {
      Event e;
      e.poi = je.at(0).get<int>();
      e.categories = je.at(1).get<std::vector<int>>();
      e.timestamp = je.at(2).get<std::int64_t>();
      u.events.push_back(std::move(e));
    }
    corpus.users.push_back(std::move(u));
  }
  return corpus;
}

}  // namespace catape
