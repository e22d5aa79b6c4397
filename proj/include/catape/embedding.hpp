#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "catape/types.hpp"

namespace catape {

struct TrainConfig {
  int dim = 100;       // POI embedding dimension D
  int cat_dim = 100;   // category embedding dimension Dc (defaults to D)
  int window = 4;
  int negatives = 5;
  Scalar lr = 0.025;   // initial learning rate, decays linearly to lr/10
  int epochs = 50;
  Scalar alpha = 0.75; // unigram smoothing exponent
  std::uint64_t seed = 42;

  void validate() const;
};

/// Dense vector tables shared by the check-in and category modules.
/// poi_in holds the target POI vectors; poi_out the POI context vectors.
/// cat_in holds category vectors (Dc); cat_out the category context vectors,
/// which live in the concatenated (D+Dc) space.
struct EmbeddingTable {
  Matrix poi_in;   // |L| x D
  Matrix poi_out;  // |L| x D
  Matrix cat_in;   // |C| x Dc
  Matrix cat_out;  // |C| x (D+Dc)

  Index num_pois() const { return poi_in.rows(); }
  Index num_cats() const { return cat_in.rows(); }
  Index dim() const { return poi_in.cols(); }
  Index cat_dim() const { return cat_in.cols(); }
  bool all_finite() const;
};

/// Logistic function with the argument clamped to [-30, 30].
Scalar sigmoid(Scalar x);

/// Input tables uniform in [-0.5/dim, 0.5/dim) per coordinate, output tables
/// zero. Deterministic given the seed.
EmbeddingTable init_table(int num_pois, int num_cats, const TrainConfig& config);

/// row <- row - eta * grad. Throws on non-finite gradient.
void sgd_step(Eigen::Ref<Vector> row, const Vector& grad, Scalar eta);

/// Linear decay from eta0 to eta0/10 over total_examples steps.
struct LrSchedule {
  Scalar eta0 = 0.025;
  std::uint64_t total_examples = 1;
  Scalar at(std::uint64_t step) const {
    const Scalar f = total_examples ? static_cast<Scalar>(step) / static_cast<Scalar>(total_examples) : Scalar(0);
    return eta0 * std::max(Scalar(0.1), Scalar(1) - Scalar(0.9) * f);
  }
};

/// Mutable per-run training state shared by the check-in and category epochs
/// so that both draw from one learning-rate schedule and seeded streams.
struct TrainState {
  std::mt19937_64 shuffle_rng;
  std::mt19937_64 negative_rng;
  LrSchedule schedule;
  std::uint64_t step = 0;

  TrainState(std::uint64_t seed, Scalar eta0, std::uint64_t total_examples)
      : shuffle_rng(substream(seed, "shuffle")),
        negative_rng(substream(seed, "negatives")),
        schedule{eta0, total_examples} {}
};

// Text serialization: first line "<rows> <dim>", then "token v_1 ... v_dim"
// with 6 significant digits per coordinate.
void save_embeddings(const Matrix& table, const std::vector<std::string>& tokens, const std::string& path);

struct LoadedEmbeddings {
  std::vector<std::string> tokens;
  Matrix vectors;
};
LoadedEmbeddings load_embeddings(const std::string& path);

}  // namespace catape
