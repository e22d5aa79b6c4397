#include "catape/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace catape {

NegativeSampler::NegativeSampler(const Vocabulary& vocab, Scalar alpha) {
  if (vocab.size() == 0) throw std::invalid_argument("cannot build sampler over empty vocabulary");
  if (!(alpha >= 0 && alpha <= 1)) throw std::invalid_argument("alpha must lie in [0,1]");
  const int n = vocab.size();
  prob_.resize(static_cast<size_t>(n));
  Scalar total = 0;
  for (int i = 0; i < n; ++i) {
    prob_[static_cast<size_t>(i)] = std::pow(static_cast<Scalar>(vocab.frequency(i)), alpha);
    total += prob_[static_cast<size_t>(i)];
  }
  for (auto& p : prob_) p /= total;

  // Vose alias construction.
  accept_.assign(static_cast<size_t>(n), Scalar(1));
  alias_.assign(static_cast<size_t>(n), 0);
  std::vector<Scalar> scaled(prob_);
  for (auto& p : scaled) p *= static_cast<Scalar>(n);
  std::vector<int> small, large;
  for (int i = 0; i < n; ++i) (scaled[static_cast<size_t>(i)] < 1 ? small : large).push_back(i);
  while (!small.empty() && !large.empty()) {
    const int s = small.back(); small.pop_back();
    const int l = large.back(); large.pop_back();
    accept_[static_cast<size_t>(s)] = scaled[static_cast<size_t>(s)];
    alias_[static_cast<size_t>(s)] = l;
    scaled[static_cast<size_t>(l)] = scaled[static_cast<size_t>(l)] + scaled[static_cast<size_t>(s)] - 1;
    (scaled[static_cast<size_t>(l)] < 1 ? small : large).push_back(l);
  }
  for (int i : large) accept_[static_cast<size_t>(i)] = 1;
  for (int i : small) accept_[static_cast<size_t>(i)] = 1;
}

int NegativeSampler::sample(std::mt19937_64& rng) const {
  const size_t n = prob_.size();
  std::uniform_int_distribution<size_t> pick(0, n - 1);
  std::uniform_real_distribution<Scalar> unit(0, 1);
  const size_t i = pick(rng);
  return unit(rng) < accept_[i] ? static_cast<int>(i) : alias_[i];
}

int NegativeSampler::sample_excluding(std::mt19937_64& rng, int forbidden) const {
  // With a single-token vocabulary there is nothing else to draw.
  if (prob_.size() == 1) return sample(rng);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const int s = sample(rng);
    if (s != forbidden) return s;
  }
  throw std::runtime_error("negative sampler failed to avoid the forbidden index");
}

}  // namespace catape
