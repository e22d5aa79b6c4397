#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "catape/evaluator.hpp"
#include "test_util.hpp"

using namespace catape;

TEST_CASE("precision_at_k definition") {
  const std::vector<int> rec{1, 2, 3, 4, 5};
  CHECK(precision_at_k(rec, {2, 4}, 5) == doctest::Approx(0.4));
  CHECK(precision_at_k(rec, {}, 5) == 0.0);
  CHECK(precision_at_k(rec, {1}, 10) == doctest::Approx(0.1));  // denominator stays k
  CHECK_THROWS_AS(precision_at_k(rec, {1}, 0), std::invalid_argument);
}

TEST_CASE("recall_at_k definition") {
  const std::vector<int> rec{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK(recall_at_k(rec, {2, 5, 9}, 10) == doctest::Approx(1.0));
  CHECK(recall_at_k(rec, {1, 20, 21, 22}, 5) == doctest::Approx(0.25));
  CHECK_THROWS_AS(recall_at_k(rec, {}, 5), std::invalid_argument);
}

TEST_CASE("metrics match an independent set-intersection oracle") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> rec;
    for (int i = 0; i < 30; ++i) rec.push_back(i);
    std::shuffle(rec.begin(), rec.end(), rng);
    std::unordered_set<int> relevant;
    while (relevant.size() < 6) relevant.insert(static_cast<int>(rng() % 40));
    const int k = 1 + static_cast<int>(rng() % 25);

    int hits = 0;  // oracle: explicit set intersection over the top-k slice
    for (int i = 0; i < k && i < static_cast<int>(rec.size()); ++i)
      hits += relevant.count(rec[static_cast<size_t>(i)]) ? 1 : 0;
    CHECK(precision_at_k(rec, relevant, k) == static_cast<double>(hits) / k);
    CHECK(recall_at_k(rec, relevant, k) == static_cast<double>(hits) / static_cast<double>(relevant.size()));
  }
}

TEST_CASE("metric monotonicity in k") {
  std::mt19937_64 rng(13);
  std::vector<int> rec;
  for (int i = 0; i < 25; ++i) rec.push_back(i);
  std::shuffle(rec.begin(), rec.end(), rng);
  const std::unordered_set<int> relevant{3, 7, 11, 19};
  double prev_recall = 0, prev_hits = 0;
  for (int k = 1; k <= 30; ++k) {
    const double r = recall_at_k(rec, relevant, k);
    const double hits = precision_at_k(rec, relevant, k) * k;
    CHECK(r >= prev_recall);
    CHECK(hits >= prev_hits - 1e-12);
    CHECK(hits <= static_cast<double>(relevant.size()) + 1e-12);
    prev_recall = r;
    prev_hits = hits;
  }
}

TEST_CASE("paired t-test degenerate rules") {
  const std::vector<double> a{0.1, 0.2, 0.3, 0.4};
  SUBCASE("identical samples") {
    TTestResult r = paired_ttest(a, a);
    CHECK(r.p == 1.0);
    CHECK(!r.significant);
  }
  SUBCASE("constant nonzero difference") {
    std::vector<double> b;
    for (double v : a) b.push_back(v - 1.0);
    TTestResult r = paired_ttest(a, b);
    CHECK(r.p == 0.0);
    CHECK(r.significant);
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(paired_ttest(a, {0.1}), std::invalid_argument);
  }
  SUBCASE("too short") {
    CHECK_THROWS_AS(paired_ttest({1.0}, {2.0}), std::invalid_argument);
  }
}

TEST_CASE("paired t-test matches the frozen oracle triple") {
  // differences (1,2,3): t = 2/(1/sqrt(3)), df = 2, two-tailed p from the
  // closed-form df=2 CDF, evaluated with an arbitrary-precision tool.
  const std::vector<double> a{1.0, 2.0, 3.0};
  const std::vector<double> b{0.0, 0.0, 0.0};
  TTestResult r = paired_ttest(a, b);
  CHECK(r.df == 2);
  CHECK(r.t == doctest::Approx(3.46410161513775).epsilon(1e-10));
  CHECK(r.p == doctest::Approx(0.0741799002274485).epsilon(1e-8));
  CHECK(!r.significant);
}

TEST_CASE("swapping samples negates t and preserves p") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> a, b;
  for (int i = 0; i < 12; ++i) {
    a.push_back(u(rng));
    b.push_back(u(rng));
  }
  TTestResult ab = paired_ttest(a, b);
  TTestResult ba = paired_ttest(b, a);
  CHECK(ab.t == doctest::Approx(-ba.t).epsilon(1e-12));
  CHECK(ab.p == doctest::Approx(ba.p).epsilon(1e-12));
}

TEST_CASE("self-comparison always yields p=1") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> a;
    const int n = 2 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) a.push_back(u(rng));
    CHECK(paired_ttest(a, a).p == 1.0);
  }
}

TEST_CASE("regularized incomplete beta spot checks") {
  CHECK(regularized_incomplete_beta(1, 1, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(regularized_incomplete_beta(0.5, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(regularized_incomplete_beta(2, 3, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(2, 3, 1.0) == 1.0);
  // I_x(2,2) = x^2 (3 - 2x)
  for (double x = 0.1; x < 1.0; x += 0.2)
    CHECK(regularized_incomplete_beta(2, 2, x) == doctest::Approx(x * x * (3 - 2 * x)).epsilon(1e-10));
}

namespace {

// The committed 5-user fixture: 14 POIs, fixed recommendation lists, golden
// metric values computed by hand.
struct Fixture {
  Corpus corpus;
  std::vector<std::vector<int>> rec_lists;
};

Fixture make_fixture() {
  using testutil::TestEvent;
  auto ev = [](int poi, int t) { return TestEvent{"p" + std::to_string(poi), {"c"}, t}; };
  Fixture f;
  f.corpus = testutil::make_corpus({
      {"u0", {ev(0, 0), ev(1, 1), ev(2, 2)}},
      {"u1", {ev(1, 0), ev(13, 1)}},
      {"u2", {ev(2, 0), ev(3, 1), ev(4, 2), ev(5, 3), ev(6, 4)}},
      {"u3", {ev(3, 0), ev(0, 1), ev(0, 2)}},
      {"u4", {ev(4, 0), ev(11, 1), ev(12, 2), ev(13, 3)}},
  });
  // make every POI index 0..13 exist in the vocabulary
  for (int p = 0; p < 14; ++p) f.corpus.poi_vocab.add_occurrence("p" + std::to_string(p));
  // train exactly the first check-in of each user
  for (auto& u : f.corpus.users) u.train_len = 1;

  auto ids = [&](std::vector<int> raw) {
    std::vector<int> out;
    for (int p : raw) out.push_back(f.corpus.poi_vocab.lookup("p" + std::to_string(p)));
    return out;
  };
  f.rec_lists = {
      ids({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13}),
      ids({2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 0}),
      ids({3, 7, 4, 8, 5, 9, 6, 10, 11, 12, 13, 0, 1}),
      ids({0, 1, 2, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13}),
      ids({5, 6, 7, 8, 9, 10, 0, 1, 2, 3, 11, 12, 13}),
  };
  return f;
}

}  // namespace

TEST_CASE("evaluate: perfect-oracle recommender gets the best-case metrics") {
  using testutil::TestEvent;
  Corpus c = testutil::make_corpus(
      {{"u", {{"a", {"x"}, 0}, {"b", {"x"}, 1}, {"c", {"x"}, 2}, {"d", {"x"}, 3}, {"e", {"x"}, 4}}}});
  REQUIRE(c.users[0].train_len == 4);  // relevant = {e}
  RecommendFn oracle = [&](int, int k, const std::unordered_set<int>& excluded) {
    std::vector<int> out{c.poi_vocab.lookup("e")};
    for (int p = 0; p < c.poi_vocab.size() && static_cast<int>(out.size()) < k; ++p)
      if (!excluded.count(p) && p != c.poi_vocab.lookup("e")) out.push_back(p);
    return out;
  };
  EvalReport r = evaluate(oracle, c, {5});
  CHECK(r.mean_precision[5] == doctest::Approx(1.0 / 5));  // min(|relevant|,k)/k
  CHECK(r.mean_recall[5] == doctest::Approx(1.0));
}

TEST_CASE("evaluate: 5-user fixture equals hand-computed golden values exactly") {
  Fixture f = make_fixture();
  RecommendFn fn = [&](int user, int, const std::unordered_set<int>&) {
    return f.rec_lists[static_cast<size_t>(user)];
  };
  EvalReport r = evaluate(fn, f.corpus, {5, 10, 20});
  REQUIRE(r.evaluated_users.size() == 5);

  const std::vector<double> p5{2.0 / 5, 0.0 / 5, 3.0 / 5, 1.0 / 5, 0.0 / 5};
  const std::vector<double> r5{2.0 / 2, 0.0 / 1, 3.0 / 4, 1.0 / 1, 0.0 / 3};
  const std::vector<double> p10{2.0 / 10, 0.0 / 10, 4.0 / 10, 1.0 / 10, 0.0 / 10};
  const std::vector<double> r10{2.0 / 2, 0.0 / 1, 4.0 / 4, 1.0 / 1, 0.0 / 3};
  const std::vector<double> p20{2.0 / 20, 1.0 / 20, 4.0 / 20, 1.0 / 20, 3.0 / 20};
  const std::vector<double> r20{2.0 / 2, 1.0 / 1, 4.0 / 4, 1.0 / 1, 3.0 / 3};

  CHECK(r.precision[5] == p5);
  CHECK(r.recall[5] == r5);
  CHECK(r.precision[10] == p10);
  CHECK(r.recall[10] == r10);
  CHECK(r.precision[20] == p20);
  CHECK(r.recall[20] == r20);

  auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  CHECK(r.mean_precision[5] == mean(p5));
  CHECK(r.mean_recall[5] == mean(r5));
  CHECK(r.mean_precision[10] == mean(p10));
  CHECK(r.mean_recall[10] == mean(r10));
  CHECK(r.mean_precision[20] == mean(p20));
  CHECK(r.mean_recall[20] == mean(r20));
}

TEST_CASE("evaluate: users without test relevance are excluded") {
  using testutil::TestEvent;
  Corpus c = testutil::make_corpus({
      {"ok", {{"a", {"x"}, 0}, {"b", {"x"}, 1}}},
      {"repeat", {{"a", {"x"}, 0}, {"a", {"x"}, 1}, {"a", {"x"}, 2}}},  // test POI already... still relevant
  });
  // "repeat" has train {a} and test {a}: relevant = {a}, which is excluded from
  // recommendation, so its recall can never be credited; but it IS evaluated.
  RecommendFn fn = [&](int, int k, const std::unordered_set<int>& excluded) {
    std::vector<int> out;
    for (int p = 0; p < c.poi_vocab.size() && static_cast<int>(out.size()) < k; ++p)
      if (!excluded.count(p)) out.push_back(p);
    return out;
  };
  EvalReport r = evaluate(fn, c, {5});
  CHECK(r.evaluated_users.size() == 2);

  Corpus none = testutil::make_corpus({{"u", {{"a", {"x"}, 0}, {"b", {"x"}, 1}}}});
  none.users[0].train_len = 2;  // empty test suffix
  CHECK_THROWS_AS(evaluate(fn, none, {5}), std::runtime_error);
}
