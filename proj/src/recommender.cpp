#include "catape/recommender.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace catape {

RecommenderModel init_from_embeddings(const LoadedEmbeddings& embeddings, const Corpus& corpus,
                                      const RecommenderConfig& config) {
  std::unordered_map<std::string, int> row_of;
  for (size_t i = 0; i < embeddings.tokens.size(); ++i)
    row_of.emplace(embeddings.tokens[i], static_cast<int>(i));

  std::vector<std::string> missing;
  const int n_poi = corpus.poi_vocab.size();
  RecommenderModel model;
  model.radius = config.radius;
  model.freeze_poi = config.freeze_poi;
  model.poi_pos.resize(n_poi, embeddings.vectors.cols());
  for (int i = 0; i < n_poi; ++i) {
    auto it = row_of.find(corpus.poi_vocab.token(i));
    if (it == row_of.end()) {
      missing.push_back(corpus.poi_vocab.token(i));
      continue;
    }
    model.poi_pos.row(i) = embeddings.vectors.row(it->second);
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "embedding file is missing " << missing.size() << " POI token(s):";
    for (const auto& t : missing) msg << " " << t;
    throw std::runtime_error(msg.str());
  }

  const Scalar max_norm = model.poi_pos.rowwise().norm().maxCoeff();
  if (max_norm > 0) model.poi_pos *= config.radius / max_norm;

  auto rng = substream(config.seed, "recommender");
  const Index d = model.poi_pos.cols();
  const Scalar half = Scalar(0.5) / static_cast<Scalar>(d);
  std::uniform_real_distribution<Scalar> dist(-half, half);
  model.user_pos.resize(static_cast<Index>(corpus.users.size()), d);
  for (Index i = 0; i < model.user_pos.rows(); ++i)
    for (Index j = 0; j < d; ++j) model.user_pos(i, j) = dist(rng);
  return model;
}

Scalar score(const RecommenderModel& model, int user, int poi) {
  return -(model.user_pos.row(user) - model.poi_pos.row(poi)).norm();
}

namespace {

void project_to_ball(Eigen::Ref<Matrix> pos, Index row, Scalar radius) {
  const Scalar n = pos.row(row).norm();
  if (n > radius) pos.row(row) *= radius / n;
}

}  // namespace

void train_recommender(RecommenderModel& model, const Corpus& corpus, const RecommenderConfig& config) {
  struct Interaction { int user, poi; };
  std::vector<Interaction> interactions;
  std::vector<std::unordered_set<int>> visited(corpus.users.size());
  for (size_t u = 0; u < corpus.users.size(); ++u) {
    for (int t = 0; t < corpus.users[u].train_len; ++t) {
      const int poi = corpus.users[u].events[static_cast<size_t>(t)].poi;
      interactions.push_back({static_cast<int>(u), poi});
      visited[u].insert(poi);
    }
  }
  if (interactions.empty()) throw std::runtime_error("no training interactions");

  const int n_poi = static_cast<int>(model.poi_pos.rows());
  auto rng = substream(config.seed, "recommender-train");
  std::uniform_int_distribution<int> pick_poi(0, n_poi - 1);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(interactions.begin(), interactions.end(), rng);
    for (const auto& [u, i] : interactions) {
      if (static_cast<int>(visited[static_cast<size_t>(u)].size()) >= n_poi) continue;
      for (int s = 0; s < config.negatives; ++s) {
        int j = pick_poi(rng);
        while (visited[static_cast<size_t>(u)].count(j)) j = pick_poi(rng);
        const Vector du_i = (model.user_pos.row(u) - model.poi_pos.row(i)).transpose();
        const Vector du_j = (model.user_pos.row(u) - model.poi_pos.row(j)).transpose();
        const Scalar hinge = du_i.squaredNorm() - du_j.squaredNorm() + config.margin;
        if (hinge <= 0) continue;
        // d(hinge)/dp_u = 2(q_j - q_i); d/dq_i = -2(p_u - q_i); d/dq_j = 2(p_u - q_j)
        const Vector g_u = Scalar(2) * (model.poi_pos.row(j) - model.poi_pos.row(i)).transpose();
        if (!g_u.allFinite() || !du_i.allFinite() || !du_j.allFinite())
          throw std::runtime_error("non-finite recommender update");
        model.user_pos.row(u) -= config.lr * g_u.transpose();
        project_to_ball(model.user_pos, u, model.radius);
        if (!model.freeze_poi) {
          model.poi_pos.row(i) += Scalar(2) * config.lr * du_i.transpose();
          model.poi_pos.row(j) -= Scalar(2) * config.lr * du_j.transpose();
          project_to_ball(model.poi_pos, i, model.radius);
          project_to_ball(model.poi_pos, j, model.radius);
        }
      }
    }
  }
}

RankedList recommend_topk(const RecommenderModel& model, int user, int k,
                          const std::unordered_set<int>& excluded) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  RankedList out;
  out.user = user;
  const int n_poi = static_cast<int>(model.poi_pos.rows());
  out.items.reserve(static_cast<size_t>(n_poi));
  for (int i = 0; i < n_poi; ++i) {
    if (excluded.count(i)) continue;
    out.items.push_back({i, score(model, user, i)});
  }
  auto better = [](const ScoredPoi& a, const ScoredPoi& b) {
    return a.score != b.score ? a.score > b.score : a.poi < b.poi;
  };
  const size_t keep = std::min(out.items.size(), static_cast<size_t>(k));
  std::partial_sort(out.items.begin(), out.items.begin() + static_cast<std::ptrdiff_t>(keep),
                    out.items.end(), better);
  out.items.resize(keep);
  return out;
}

std::unordered_set<int> train_pois(const UserSequence& user) {
  std::unordered_set<int> out;
  for (int t = 0; t < user.train_len; ++t) out.insert(user.events[static_cast<size_t>(t)].poi);
  return out;
}

}  // namespace catape
