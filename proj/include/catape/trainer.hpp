#pragma once

#include <string>
#include <vector>

#include "catape/corpus.hpp"
#include "catape/embedding.hpp"

namespace catape {

enum class TrainMode { full, nocat };

struct EpochLog {
  int epoch = 0;            // 1-based
  Scalar checkin_loss = 0;
  Scalar category_loss = 0; // 0 in nocat mode
  Scalar lr = 0;            // learning rate at the start of the epoch
};

struct TrainResult {
  EmbeddingTable table;
  std::vector<EpochLog> log;
};

/// Trains the combined objective: per epoch one check-in pass then one
/// category pass (skipped in nocat mode) over the shared table, under a
/// single learning-rate schedule.
TrainResult train(const Corpus& corpus, const TrainConfig& config, TrainMode mode);

/// Writes the poi_in rows in the text embedding format, tokens in
/// vocabulary index order.
void export_poi_embeddings(const EmbeddingTable& table, const Corpus& corpus, const std::string& path);
void export_cat_embeddings(const EmbeddingTable& table, const Corpus& corpus, const std::string& path);

void write_training_log(const std::vector<EpochLog>& log, const std::string& path);

}  // namespace catape
