#pragma once

#include <span>
#include <vector>

#include "catape/corpus.hpp"
#include "catape/embedding.hpp"
#include "catape/sampler.hpp"

namespace catape {

struct CategoryGradients {
  Vector d_poi;                     // w.r.t. poi_in row (first D coords of the concat)
  Vector d_cat;                     // w.r.t. cat_in row (last Dc coords of the concat)
  Vector d_context;                 // w.r.t. cat_out row of the true context category
  std::vector<Vector> d_negatives;  // w.r.t. cat_out rows of the sampled negatives
};

/// Negative-sampling loss for one (poi, center category, context category)
/// triple. The center representation is the concatenation of the POI's
/// poi_in row and the category's cat_in row, so gradients flow into both.
Scalar category_triple_loss(const EmbeddingTable& table, int poi, int center_cat, int context_cat,
                            std::span<const int> negatives, CategoryGradients* grads = nullptr);

/// Full-softmax probability of `context_cat` given (poi, center_cat); diagnostic only.
Scalar category_softmax_prob(const EmbeddingTable& table, int poi, int center_cat, int context_cat);

/// One pass over all category window triples in seeded shuffled order.
/// Returns the mean per-triple loss.
Scalar train_category_epoch(const Corpus& corpus, EmbeddingTable& table,
                            const NegativeSampler& cat_sampler, const TrainConfig& config,
                            TrainState& state);

}  // namespace catape
