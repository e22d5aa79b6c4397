#pragma once

#include <functional>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "catape/corpus.hpp"
#include "catape/types.hpp"

namespace catape {

Scalar precision_at_k(const std::vector<int>& recommended, const std::unordered_set<int>& relevant, int k);
Scalar recall_at_k(const std::vector<int>& recommended, const std::unordered_set<int>& relevant, int k);

struct TTestResult {
  Scalar t = 0;
  Scalar p = 1;
  int df = 0;
  bool significant = false;  // p < 0.05
};

/// Two-tailed paired t-test over per-user values; sd with n-1 denominator.
/// Degenerate rules: sd=0 and mean=0 -> p=1; sd=0 and mean!=0 -> p=0.
TTestResult paired_ttest(const std::vector<Scalar>& sample_a, const std::vector<Scalar>& sample_b);

/// Regularized incomplete beta I_x(a, b); accuracy ~1e-10.
Scalar regularized_incomplete_beta(Scalar a, Scalar b, Scalar x);

struct EvalReport {
  std::vector<int> k_values;
  std::vector<int> evaluated_users;                 // indices into corpus.users
  std::map<int, std::vector<Scalar>> precision;     // k -> per-user values
  std::map<int, std::vector<Scalar>> recall;
  std::map<int, Scalar> mean_precision;
  std::map<int, Scalar> mean_recall;
};

using RecommendFn = std::function<std::vector<int>(int user, int k, const std::unordered_set<int>& excluded)>;

/// Evaluates every user with non-empty train and test parts; relevance is
/// the set of distinct test-suffix POIs.
EvalReport evaluate(const RecommendFn& recommend, const Corpus& corpus, const std::vector<int>& k_values);

}  // namespace catape
