#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "catape/corpus.hpp"
#include "catape/embedding.hpp"

namespace catape {

struct RecommenderConfig {
  Scalar margin = 0.5;     // hinge margin m
  Scalar radius = 1.0;     // clip radius R
  Scalar lr = 0.05;
  int epochs = 20;
  int negatives = 4;       // sampled unvisited POIs per positive
  bool freeze_poi = false;
  std::uint64_t seed = 42;
};

/// Users and POIs as points in Euclidean space; score(u,i) = -||p_u - q_i||.
struct RecommenderModel {
  Matrix user_pos;  // |U| x D
  Matrix poi_pos;   // |L| x D
  Scalar radius = 1.0;
  bool freeze_poi = false;
};

struct ScoredPoi {
  int poi = -1;
  Scalar score = 0;
};

struct RankedList {
  int user = -1;
  std::vector<ScoredPoi> items;  // scores non-increasing, ties by ascending POI index
};

/// POI positions from pre-trained embeddings, rescaled so the largest row
/// norm equals the clip radius; user positions uniform-small, seeded.
/// Throws if any corpus POI token is missing from the embeddings.
RecommenderModel init_from_embeddings(const LoadedEmbeddings& embeddings, const Corpus& corpus,
                                      const RecommenderConfig& config);

Scalar score(const RecommenderModel& model, int user, int poi);

/// Hinge push-pull training over observed train interactions:
///   max(0, ||p_u - q_i||^2 - ||p_u - q_j||^2 + m)
/// with j sampled uniformly over the user's unvisited POIs, followed by
/// projection of touched rows onto the radius ball.
void train_recommender(RecommenderModel& model, const Corpus& corpus, const RecommenderConfig& config);

RankedList recommend_topk(const RecommenderModel& model, int user, int k,
                          const std::unordered_set<int>& excluded);

/// Distinct POIs in the user's train prefix (the exclusion set for top-k).
std::unordered_set<int> train_pois(const UserSequence& user);

}  // namespace catape
