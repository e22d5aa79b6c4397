#include "catape/checkin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace catape {

Scalar checkin_pair_loss(const EmbeddingTable& table, int center, int context,
                         std::span<const int> negatives, CheckinGradients* grads) {
  const auto v_center = table.poi_in.row(center).transpose();
  const auto v_context = table.poi_out.row(context).transpose();

  const Scalar pos_dot = v_context.dot(v_center);
  const Scalar pos_sig = sigmoid(pos_dot);
  Scalar loss = -std::log(pos_sig);

  Vector d_center;
  if (grads) {
    d_center = (pos_sig - Scalar(1)) * v_context;
    grads->d_context = (pos_sig - Scalar(1)) * v_center;
    grads->d_negatives.clear();
    grads->d_negatives.reserve(negatives.size());
  }
  for (int neg : negatives) {
    const auto v_neg = table.poi_out.row(neg).transpose();
    const Scalar neg_dot = v_neg.dot(v_center);
    const Scalar neg_sig = sigmoid(neg_dot);
    loss -= std::log(sigmoid(-neg_dot));
    if (grads) {
      d_center += neg_sig * v_neg;
      grads->d_negatives.push_back(neg_sig * v_center);
    }
  }
  if (!std::isfinite(loss)) throw std::runtime_error("non-finite check-in pair loss");
  if (grads) grads->d_center = std::move(d_center);
  return loss;
}

Scalar softmax_context_prob(const EmbeddingTable& table, int center, int context) {
  const Vector logits = table.poi_out * table.poi_in.row(center).transpose();
  const Scalar max_logit = logits.maxCoeff();
  const Vector ex = (logits.array() - max_logit).exp();
  return ex(context) / ex.sum();
}

Scalar train_checkin_epoch(const Corpus& corpus, EmbeddingTable& table,
                           const NegativeSampler& sampler, const TrainConfig& config,
                           TrainState& state) {
  std::vector<std::pair<int, int>> pairs;
  for (const auto& w : poi_windows(corpus, config.window))
    for (int ctx : w.context) pairs.emplace_back(w.center, ctx);
  if (pairs.empty()) return 0;
  std::shuffle(pairs.begin(), pairs.end(), state.shuffle_rng);

  std::vector<int> negatives(static_cast<size_t>(config.negatives));
  CheckinGradients grads;
  Scalar loss_sum = 0;
  for (const auto& [center, context] : pairs) {
    for (auto& n : negatives) n = sampler.sample_excluding(state.negative_rng, context);
    loss_sum += checkin_pair_loss(table, center, context, negatives, &grads);
    const Scalar eta = state.schedule.at(state.step++);
    sgd_step(table.poi_in.row(center).transpose(), grads.d_center, eta);
    sgd_step(table.poi_out.row(context).transpose(), grads.d_context, eta);
    for (size_t i = 0; i < negatives.size(); ++i)
      sgd_step(table.poi_out.row(negatives[i]).transpose(), grads.d_negatives[i], eta);
  }
  return loss_sum / static_cast<Scalar>(pairs.size());
}

}  // namespace catape
