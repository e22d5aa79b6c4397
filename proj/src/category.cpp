#include "catape/category.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace catape {

namespace {

Vector concat_center(const EmbeddingTable& table, int poi, int center_cat) {
  const Index d = table.dim();
  const Index dc = table.cat_dim();
  Vector v(d + dc);
  v.head(d) = table.poi_in.row(poi).transpose();
  v.tail(dc) = table.cat_in.row(center_cat).transpose();
  return v;
}

}  // namespace

Scalar category_triple_loss(const EmbeddingTable& table, int poi, int center_cat, int context_cat,
                            std::span<const int> negatives, CategoryGradients* grads) {
  const Vector v_hat = concat_center(table, poi, center_cat);
  const auto v_context = table.cat_out.row(context_cat).transpose();

  const Scalar pos_sig = sigmoid(v_context.dot(v_hat));
  Scalar loss = -std::log(pos_sig);

  Vector d_hat;
  if (grads) {
    d_hat = (pos_sig - Scalar(1)) * v_context;
    grads->d_context = (pos_sig - Scalar(1)) * v_hat;
    grads->d_negatives.clear();
    grads->d_negatives.reserve(negatives.size());
  }
  for (int neg : negatives) {
    const auto v_neg = table.cat_out.row(neg).transpose();
    const Scalar neg_dot = v_neg.dot(v_hat);
    const Scalar neg_sig = sigmoid(neg_dot);
    loss -= std::log(sigmoid(-neg_dot));
    if (grads) {
      d_hat += neg_sig * v_neg;
      grads->d_negatives.push_back(neg_sig * v_hat);
    }
  }
  if (!std::isfinite(loss)) throw std::runtime_error("non-finite category triple loss");
  if (grads) {
    grads->d_poi = d_hat.head(table.dim());
    grads->d_cat = d_hat.tail(table.cat_dim());
  }
  return loss;
}

Scalar category_softmax_prob(const EmbeddingTable& table, int poi, int center_cat, int context_cat) {
  const Vector v_hat = concat_center(table, poi, center_cat);
  const Vector logits = table.cat_out * v_hat;
  const Scalar max_logit = logits.maxCoeff();
  const Vector ex = (logits.array() - max_logit).exp();
  return ex(context_cat) / ex.sum();
}

Scalar train_category_epoch(const Corpus& corpus, EmbeddingTable& table,
                            const NegativeSampler& cat_sampler, const TrainConfig& config,
                            TrainState& state) {
  struct Triple { int poi, center, context; };
  std::vector<Triple> triples;
  for (const auto& w : category_windows(corpus, config.window))
    for (int ctx : w.context_cats) triples.push_back({w.poi, w.center_cat, ctx});
  if (triples.empty()) return 0;
  std::shuffle(triples.begin(), triples.end(), state.shuffle_rng);

  std::vector<int> negatives(static_cast<size_t>(config.negatives));
  CategoryGradients grads;
  Scalar loss_sum = 0;
  for (const auto& t : triples) {
    for (auto& n : negatives) n = cat_sampler.sample_excluding(state.negative_rng, t.context);
    loss_sum += category_triple_loss(table, t.poi, t.center, t.context, negatives, &grads);
    const Scalar eta = state.schedule.at(state.step++);
    sgd_step(table.poi_in.row(t.poi).transpose(), grads.d_poi, eta);
    sgd_step(table.cat_in.row(t.center).transpose(), grads.d_cat, eta);
    sgd_step(table.cat_out.row(t.context).transpose(), grads.d_context, eta);
    for (size_t i = 0; i < negatives.size(); ++i)
      sgd_step(table.cat_out.row(negatives[i]).transpose(), grads.d_negatives[i], eta);
  }
  return loss_sum / static_cast<Scalar>(triples.size());
}

}  // namespace catape
