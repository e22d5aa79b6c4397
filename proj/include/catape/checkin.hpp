#pragma once

#include <span>
#include <vector>

#include "catape/corpus.hpp"
#include "catape/embedding.hpp"
#include "catape/sampler.hpp"

namespace catape {

struct CheckinGradients {
  Vector d_center;                  // w.r.t. poi_in row of the center POI
  Vector d_context;                 // w.r.t. poi_out row of the true context POI
  std::vector<Vector> d_negatives;  // w.r.t. poi_out rows of the sampled negatives
};

/// Negative-sampling loss for one (center, context) POI pair:
///   -log s(v_w . v_l) - sum_e log s(-v_e . v_l)
Scalar checkin_pair_loss(const EmbeddingTable& table, int center, int context,
                         std::span<const int> negatives, CheckinGradients* grads = nullptr);

/// Full-softmax probability of `context` given `center`; diagnostic only.
Scalar softmax_context_prob(const EmbeddingTable& table, int center, int context);

/// One pass over all POI skip-gram pairs in seeded shuffled order.
/// Returns the mean per-pair loss.
Scalar train_checkin_epoch(const Corpus& corpus, EmbeddingTable& table,
                           const NegativeSampler& sampler, const TrainConfig& config,
                           TrainState& state);

}  // namespace catape
