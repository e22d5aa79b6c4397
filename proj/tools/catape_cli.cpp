#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "catape/category.hpp"
#include "catape/checkin.hpp"
#include "catape/corpus.hpp"
#include "catape/embedding.hpp"
#include "catape/evaluator.hpp"
#include "catape/recommender.hpp"
#include "catape/trainer.hpp"

namespace {

using namespace catape;

struct RecFlags {
  RecommenderConfig config;
  void attach(CLI::App* cmd) {
    cmd->add_option("--rec-epochs", config.epochs, "recommender training epochs");
    cmd->add_option("--rec-lr", config.lr, "recommender learning rate");
    cmd->add_option("--margin", config.margin, "hinge margin");
    cmd->add_option("--radius", config.radius, "position clip radius");
    cmd->add_option("--rec-negatives", config.negatives, "negative POIs per positive");
    cmd->add_flag("--freeze-poi", config.freeze_poi, "keep POI positions at their pre-trained values");
  }
};

std::string format_score(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void write_metadata(const TrainConfig& config, const std::string& mode, const std::string& path) {
  nlohmann::json j{{"dim", config.dim},       {"cat_dim", config.cat_dim}, {"window", config.window},
                   {"negatives", config.negatives}, {"epochs", config.epochs}, {"lr", config.lr},
                   {"alpha", config.alpha},   {"seed", config.seed},       {"mode", mode}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write metadata: " + path);
  out << j.dump(2) << "\n";
}

RecommenderModel build_trained_model(const std::string& embedding_path, const Corpus& corpus,
                                     const RecommenderConfig& config) {
  auto embeddings = load_embeddings(embedding_path);
  RecommenderModel model = init_from_embeddings(embeddings, corpus, config);
  train_recommender(model, corpus, config);
  return model;
}

EvalReport evaluate_model(const RecommenderModel& model, const Corpus& corpus, const std::vector<int>& ks) {
  RecommendFn fn = [&model](int user, int k, const std::unordered_set<int>& excluded) {
    std::vector<int> out;
    for (const auto& item : recommend_topk(model, user, k, excluded).items) out.push_back(item.poi);
    return out;
  };
  return evaluate(fn, corpus, ks);
}

int cmd_ingest(const std::string& input, const std::string& output, bool sentinel, double ratio) {
  IngestConfig config;
  config.sentinel_category = sentinel;
  config.split_ratio = ratio;
  Corpus corpus = ingest(input, config);
  save_corpus(corpus, output);
  std::cout << corpus.users.size() << " users, " << corpus.poi_vocab.size() << " POIs, "
            << corpus.cat_vocab.size() << " categories, " << corpus.total_checkins << " check-ins\n";
  if (corpus.dropped_users > 0)
    std::cerr << "dropped " << corpus.dropped_users << " user(s) with fewer than 2 check-ins\n";
  return 0;
}

int cmd_train(const std::string& corpus_path, const std::string& out_prefix, const std::string& mode_str,
              const TrainConfig& config) {
  const TrainMode mode = mode_str == "nocat" ? TrainMode::nocat : TrainMode::full;
  Corpus corpus = load_corpus(corpus_path);
  TrainResult result = train(corpus, config, mode);
  export_poi_embeddings(result.table, corpus, out_prefix + ".poi.txt");
  if (mode == TrainMode::full) export_cat_embeddings(result.table, corpus, out_prefix + ".cat.txt");
  write_metadata(config, mode_str, out_prefix + ".meta.json");
  write_training_log(result.log, out_prefix + ".log.jsonl");
  std::cout << "trained " << mode_str << " model: " << result.log.back().checkin_loss
            << " final check-in loss";
  if (mode == TrainMode::full) std::cout << ", " << result.log.back().category_loss << " final category loss";
  std::cout << "\n";
  return 0;
}

int cmd_recommend(const std::string& corpus_path, const std::string& embedding_path, int k,
                  const RecommenderConfig& rec_config, const std::string& output) {
  Corpus corpus = load_corpus(corpus_path);
  RecommenderModel model = build_trained_model(embedding_path, corpus, rec_config);

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!output.empty()) {
    file.open(output);
    if (!file) throw std::runtime_error("cannot write output: " + output);
    out = &file;
  }
  for (size_t u = 0; u < corpus.users.size(); ++u) {
    const auto excluded = train_pois(corpus.users[u]);
    const RankedList list = recommend_topk(model, static_cast<int>(u), k, excluded);
    int rank = 1;
    for (const auto& item : list.items)
      *out << corpus.users[u].user_id << "\t" << rank++ << "\t" << corpus.poi_vocab.token(item.poi)
           << "\t" << format_score(item.score) << "\n";
  }
  return 0;
}

nlohmann::json report_to_json(const EvalReport& report, const Corpus& corpus, bool per_user) {
  nlohmann::json agg;
  for (int k : report.k_values) {
    agg["precision"][std::to_string(k)] = report.mean_precision.at(k);
    agg["recall"][std::to_string(k)] = report.mean_recall.at(k);
  }
  nlohmann::json j{{"aggregates", agg}};
  if (per_user) {
    nlohmann::json pu = nlohmann::json::array();
    for (size_t i = 0; i < report.evaluated_users.size(); ++i) {
      nlohmann::json entry{{"user", corpus.users[static_cast<size_t>(report.evaluated_users[i])].user_id}};
      for (int k : report.k_values) {
        entry["precision"][std::to_string(k)] = report.precision.at(k)[i];
        entry["recall"][std::to_string(k)] = report.recall.at(k)[i];
      }
      pu.push_back(std::move(entry));
    }
    j["per_user"] = std::move(pu);
  }
  return j;
}

int cmd_evaluate(const std::string& corpus_path, const std::string& embedding_path,
                 const std::string& compare_path, std::vector<int> ks,
                 const RecommenderConfig& rec_config, const std::string& output, bool per_user) {
  if (ks.empty()) ks = {5, 10, 20};
  Corpus corpus = load_corpus(corpus_path);

  nlohmann::json j;
  j["k_values"] = ks;
  j["systems"] = nlohmann::json::array({"A"});

  RecommenderModel model_a = build_trained_model(embedding_path, corpus, rec_config);
  EvalReport report_a = evaluate_model(model_a, corpus, ks);
  j["reports"]["A"] = report_to_json(report_a, corpus, per_user);
  j["reports"]["A"]["embeddings"] = embedding_path;

  j["significance_tests"] = nlohmann::json::array();
  if (!compare_path.empty()) {
    j["systems"].push_back("B");
    RecommenderModel model_b = build_trained_model(compare_path, corpus, rec_config);
    EvalReport report_b = evaluate_model(model_b, corpus, ks);
    j["reports"]["B"] = report_to_json(report_b, corpus, per_user);
    j["reports"]["B"]["embeddings"] = compare_path;
    if (report_a.evaluated_users != report_b.evaluated_users)
      throw std::runtime_error("evaluated user sets differ between systems");
    for (int k : ks) {
      for (const auto& [metric, va, vb] :
           {std::tuple{"precision", &report_a.precision, &report_b.precision},
            std::tuple{"recall", &report_a.recall, &report_b.recall}}) {
        const TTestResult t = paired_ttest(va->at(k), vb->at(k));
        j["significance_tests"].push_back({{"system_a", "A"},
                                           {"system_b", "B"},
                                           {"metric", metric},
                                           {"k", k},
                                           {"t", t.t},
                                           {"p", t.p},
                                           {"significant", t.significant}});
      }
    }
  }

  const std::string text = j.dump(2) + "\n";
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot write report: " + output);
    out << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CATAPE: category-aware POI embeddings with metric-factorization recommendation"};
  app.require_subcommand(1);

  // ingest
  std::string in_path, out_path;
  bool sentinel = false;
  double ratio = 0.8;
  auto* ingest_cmd = app.add_subcommand("ingest", "parse a TSV check-in log into a corpus cache");
  ingest_cmd->add_option("--input", in_path, "TSV check-in log")->required();
  ingest_cmd->add_option("--output", out_path, "corpus cache path")->required();
  ingest_cmd->add_flag("--sentinel-category", sentinel, "map missing categories to __UNK__");
  ingest_cmd->add_option("--ratio", ratio, "chronological train fraction (default 0.8)");

  // train
  std::string corpus_path, prefix, mode = "full";
  TrainConfig tc;
  auto* train_cmd = app.add_subcommand("train", "train POI/category embeddings");
  train_cmd->add_option("--corpus", corpus_path, "corpus cache")->required();
  train_cmd->add_option("--out", prefix, "output file prefix")->required();
  train_cmd->add_option("--mode", mode, "full|nocat")->check(CLI::IsMember({"full", "nocat"}));
  train_cmd->add_option("--dim", tc.dim, "POI embedding dimension (default 100)");
  auto* cat_dim_opt = train_cmd->add_option("--cat-dim", tc.cat_dim, "category dimension (default: --dim)");
  train_cmd->add_option("--window", tc.window, "context window size (default 4)");
  train_cmd->add_option("--negatives", tc.negatives, "negative samples per pair");
  train_cmd->add_option("--epochs", tc.epochs, "training epochs");
  train_cmd->add_option("--lr", tc.lr, "initial learning rate");
  train_cmd->add_option("--seed", tc.seed, "run seed");
  train_cmd->add_option("--alpha", tc.alpha, "unigram smoothing exponent");

  // recommend
  std::string rec_corpus, rec_embeddings, rec_output;
  int rec_k = 10;
  RecFlags rec_flags;
  auto* rec_cmd = app.add_subcommand("recommend", "emit top-k recommendations as TSV");
  rec_cmd->add_option("--corpus", rec_corpus, "corpus cache")->required();
  rec_cmd->add_option("--embeddings", rec_embeddings, "POI embedding file")->required();
  rec_cmd->add_option("--k", rec_k, "list length (default 10)");
  rec_cmd->add_option("--output", rec_output, "output TSV (default stdout)");
  rec_cmd->add_option("--seed", rec_flags.config.seed, "run seed");
  rec_flags.attach(rec_cmd);

  // evaluate
  std::string eval_corpus, eval_embeddings, eval_compare, eval_output;
  std::vector<int> eval_ks;
  bool eval_per_user = false;
  RecFlags eval_flags;
  auto* eval_cmd = app.add_subcommand("evaluate", "train the recommender and report Precision@k / Recall@k");
  eval_cmd->add_option("--corpus", eval_corpus, "corpus cache")->required();
  eval_cmd->add_option("--embeddings", eval_embeddings, "POI embedding file (system A)")->required();
  eval_cmd->add_option("--compare", eval_compare, "second embedding file (system B) for the paired t-test");
  eval_cmd->add_option("--k", eval_ks, "k values (default 5 10 20)");
  eval_cmd->add_option("--output", eval_output, "report JSON path (default stdout)");
  eval_cmd->add_flag("--per-user", eval_per_user, "include per-user metrics in the report");
  eval_cmd->add_option("--seed", eval_flags.config.seed, "run seed");
  eval_flags.attach(eval_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest_cmd) return cmd_ingest(in_path, out_path, sentinel, ratio);
    if (*train_cmd) {
      if (!*cat_dim_opt) tc.cat_dim = tc.dim;
      return cmd_train(corpus_path, prefix, mode, tc);
    }
    if (*rec_cmd) return cmd_recommend(rec_corpus, rec_embeddings, rec_k, rec_flags.config, rec_output);
    if (*eval_cmd)
      return cmd_evaluate(eval_corpus, eval_embeddings, eval_compare, eval_ks, eval_flags.config,
                          eval_output, eval_per_user);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
