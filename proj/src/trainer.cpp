#include "catape/trainer.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "catape/category.hpp"
#include "catape/checkin.hpp"

namespace catape {

namespace {

std::uint64_t count_pairs(const Corpus& corpus, int window) {
  std::uint64_t n = 0;
  for (const auto& w : poi_windows(corpus, window)) n += w.context.size();
  return n;
}

std::uint64_t count_triples(const Corpus& corpus, int window) {
  std::uint64_t n = 0;
  for (const auto& w : category_windows(corpus, window)) n += w.context_cats.size();
  return n;
}

}  // namespace

TrainResult train(const Corpus& corpus, const TrainConfig& config, TrainMode mode) {
  config.validate();
  const std::uint64_t pairs_per_epoch = count_pairs(corpus, config.window);
  const std::uint64_t triples_per_epoch =
      mode == TrainMode::full ? count_triples(corpus, config.window) : 0;
  if (pairs_per_epoch + triples_per_epoch == 0)
    throw std::runtime_error("corpus yields no training pairs");

  TrainResult result;
  result.table = init_table(corpus.poi_vocab.size(), corpus.cat_vocab.size(), config);
  NegativeSampler poi_sampler(corpus.poi_vocab, config.alpha);
  NegativeSampler cat_sampler(corpus.cat_vocab, config.alpha);

  TrainState state(config.seed, config.lr,
                   static_cast<std::uint64_t>(config.epochs) * (pairs_per_epoch + triples_per_epoch));
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    EpochLog entry;
    entry.epoch = epoch;
    entry.lr = state.schedule.at(state.step);
    entry.checkin_loss = train_checkin_epoch(corpus, result.table, poi_sampler, config, state);
    if (mode == TrainMode::full)
      entry.category_loss = train_category_epoch(corpus, result.table, cat_sampler, config, state);
    if (!result.table.all_finite())
      throw std::runtime_error("non-finite embedding entry after epoch " + std::to_string(epoch));
    result.log.push_back(entry);
  }
  return result;
}

void export_poi_embeddings(const EmbeddingTable& table, const Corpus& corpus, const std::string& path) {
  save_embeddings(table.poi_in, corpus.poi_vocab.tokens(), path);
}

void export_cat_embeddings(const EmbeddingTable& table, const Corpus& corpus, const std::string& path) {
  save_embeddings(table.cat_in, corpus.cat_vocab.tokens(), path);
}

void write_training_log(const std::vector<EpochLog>& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write training log: " + path);
  for (const auto& e : log) {
    nlohmann::json j{{"epoch", e.epoch},
                     {"checkin_loss", e.checkin_loss},
                     {"category_loss", e.category_loss},
                     {"lr", e.lr}};
    out << j.dump() << "\n";
  }
}

}  // namespace catape
