#pragma once

#include <random>
#include <vector>

#include "catape/corpus.hpp"
#include "catape/types.hpp"

namespace catape {

/// Smoothed-unigram sampler: P(i) proportional to freq(i)^alpha.
/// Walker alias table, O(1) per draw.
class NegativeSampler {
 public:
  NegativeSampler(const Vocabulary& vocab, Scalar alpha);

  int sample(std::mt19937_64& rng) const;

  /// Draws that collide with `forbidden` are rejected and redrawn.
  int sample_excluding(std::mt19937_64& rng, int forbidden) const;

  const std::vector<Scalar>& probabilities() const { return prob_; }

 private:
  std::vector<Scalar> prob_;        // normalized sampling distribution
  std::vector<Scalar> accept_;      // alias acceptance thresholds
  std::vector<int> alias_;
};

}  // namespace catape
