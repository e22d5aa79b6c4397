#include "catape/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace catape {

Scalar precision_at_k(const std::vector<int>& recommended, const std::unordered_set<int>& relevant, int k) {
  if (k <= 0) throw std::invalid_argument("k must be positive");
  const size_t top = std::min(recommended.size(), static_cast<size_t>(k));
  int hits = 0;
  for (size_t i = 0; i < top; ++i)
    if (relevant.count(recommended[i])) ++hits;
  return static_cast<Scalar>(hits) / static_cast<Scalar>(k);
}

Scalar recall_at_k(const std::vector<int>& recommended, const std::unordered_set<int>& relevant, int k) {
  if (k <= 0) throw std::invalid_argument("k must be positive");
  if (relevant.empty()) throw std::invalid_argument("relevant set must be non-empty");
  const size_t top = std::min(recommended.size(), static_cast<size_t>(k));
  int hits = 0;
  for (size_t i = 0; i < top; ++i)
    if (relevant.count(recommended[i])) ++hits;
  return static_cast<Scalar>(hits) / static_cast<Scalar>(relevant.size());
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
Scalar betacf(Scalar a, Scalar b, Scalar x) {
  constexpr int kMaxIter = 300;
  constexpr Scalar kEps = 1e-15;
  constexpr Scalar kTiny = 1e-300;
  const Scalar qab = a + b, qap = a + 1, qam = a - 1;
  Scalar c = 1;
  Scalar d = 1 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1 / d;
  Scalar h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const Scalar m2 = 2 * m;
    Scalar aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1 / d;
    const Scalar del = d * c;
    h *= del;
    if (std::abs(del - 1) < kEps) break;
  }
  return h;
}

}  // namespace

Scalar regularized_incomplete_beta(Scalar a, Scalar b, Scalar x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  const Scalar ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log(1 - x);
  const Scalar front = std::exp(ln_front);
  if (x < (a + 1) / (a + b + 2)) return front * betacf(a, b, x) / a;
  return 1 - front * betacf(b, a, 1 - x) / b;
}

TTestResult paired_ttest(const std::vector<Scalar>& sample_a, const std::vector<Scalar>& sample_b) {
  if (sample_a.size() != sample_b.size()) throw std::invalid_argument("paired samples must have equal length");
  const size_t n = sample_a.size();
  if (n < 2) throw std::invalid_argument("paired t-test needs at least 2 pairs");

  Scalar mean = 0;
  for (size_t i = 0; i < n; ++i) mean += sample_a[i] - sample_b[i];
  mean /= static_cast<Scalar>(n);
  Scalar ss = 0;
  for (size_t i = 0; i < n; ++i) {
    const Scalar d = sample_a[i] - sample_b[i] - mean;
    ss += d * d;
  }
  const Scalar sd = std::sqrt(ss / static_cast<Scalar>(n - 1));

  TTestResult r;
  r.df = static_cast<int>(n) - 1;
  if (sd == 0) {
    r.t = mean == 0 ? 0 : (mean > 0 ? std::numeric_limits<Scalar>::infinity()
                                    : -std::numeric_limits<Scalar>::infinity());
    r.p = mean == 0 ? 1 : 0;
  } else {
    r.t = mean / (sd / std::sqrt(static_cast<Scalar>(n)));
    const Scalar df = static_cast<Scalar>(r.df);
    r.p = regularized_incomplete_beta(df / 2, Scalar(0.5), df / (df + r.t * r.t));
  }
  r.significant = r.p < Scalar(0.05);
  return r;
}

EvalReport evaluate(const RecommendFn& recommend, const Corpus& corpus, const std::vector<int>& k_values) {
  EvalReport report;
  report.k_values = k_values;
  const int max_k = *std::max_element(k_values.begin(), k_values.end());

  for (size_t u = 0; u < corpus.users.size(); ++u) {
    const auto& user = corpus.users[u];
    if (user.train_len == 0) continue;
    std::unordered_set<int> relevant;
    std::unordered_set<int> excluded;
    for (int t = 0; t < user.train_len; ++t) excluded.insert(user.events[static_cast<size_t>(t)].poi);
    for (size_t t = static_cast<size_t>(user.train_len); t < user.events.size(); ++t)
      relevant.insert(user.events[t].poi);
    if (relevant.empty()) continue;

    const std::vector<int> recommended = recommend(static_cast<int>(u), max_k, excluded);
    report.evaluated_users.push_back(static_cast<int>(u));
    for (int k : k_values) {
      report.precision[k].push_back(precision_at_k(recommended, relevant, k));
      report.recall[k].push_back(recall_at_k(recommended, relevant, k));
    }
  }
  if (report.evaluated_users.empty()) throw std::runtime_error("no evaluable users");

  for (int k : k_values) {
    const auto& p = report.precision[k];
    const auto& r = report.recall[k];
    report.mean_precision[k] = std::accumulate(p.begin(), p.end(), Scalar(0)) / static_cast<Scalar>(p.size());
    report.mean_recall[k] = std::accumulate(r.begin(), r.end(), Scalar(0)) / static_cast<Scalar>(r.size());
  }
  return report;
}

}  // namespace catape
