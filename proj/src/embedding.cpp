#include "catape/embedding.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace catape {

void TrainConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (cat_dim < 1) throw std::invalid_argument("cat_dim must be >= 1");
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (negatives < 1) throw std::invalid_argument("negatives must be >= 1");
  if (!(lr > 0)) throw std::invalid_argument("lr must be positive");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (!(alpha >= 0 && alpha <= 1)) throw std::invalid_argument("alpha must lie in [0,1]");
}

bool EmbeddingTable::all_finite() const {
  return poi_in.allFinite() && poi_out.allFinite() && cat_in.allFinite() && cat_out.allFinite();
}

Scalar sigmoid(Scalar x) {
  if (x > 30) x = 30;
  if (x < -30) x = -30;
  return Scalar(1) / (Scalar(1) + std::exp(-x));
}

EmbeddingTable init_table(int num_pois, int num_cats, const TrainConfig& config) {
  config.validate();
  if (num_pois < 1 || num_cats < 1) throw std::invalid_argument("vocabulary sizes must be >= 1");
  EmbeddingTable t;
  auto rng = substream(config.seed, "init");
  auto fill_uniform = [&rng](Matrix& m, Index rows, Index cols) {
    m.resize(rows, cols);
    const Scalar half = Scalar(0.5) / static_cast<Scalar>(cols);
    std::uniform_real_distribution<Scalar> dist(-half, half);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
  };
  fill_uniform(t.poi_in, num_pois, config.dim);
  fill_uniform(t.cat_in, num_cats, config.cat_dim);
  t.poi_out = Matrix::Zero(num_pois, config.dim);
  t.cat_out = Matrix::Zero(num_cats, config.dim + config.cat_dim);
  return t;
}

void sgd_step(Eigen::Ref<Vector> row, const Vector& grad, Scalar eta) {
  if (!grad.allFinite()) throw std::runtime_error("non-finite gradient in sgd_step");
  row -= eta * grad;
}

void save_embeddings(const Matrix& table, const std::vector<std::string>& tokens, const std::string& path) {
  if (static_cast<Index>(tokens.size()) != table.rows())
    throw std::invalid_argument("token count does not match table rows");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write embedding file: " + path);
  out << table.rows() << " " << table.cols() << "\n";
  char buf[64];
  for (Index i = 0; i < table.rows(); ++i) {
    out << tokens[static_cast<size_t>(i)];
    for (Index j = 0; j < table.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), " %.6g", table(i, j));
      out << buf;
    }
    out << "\n";
  }
}

LoadedEmbeddings load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file: " + path);
  Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 1 || cols < 1)
    throw std::runtime_error("bad embedding file header: " + path);
  LoadedEmbeddings out;
  out.tokens.reserve(static_cast<size_t>(rows));
  out.vectors.resize(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    std::string token;
    if (!(in >> token)) throw std::runtime_error("truncated embedding file: " + path);
    out.tokens.push_back(token);
    for (Index j = 0; j < cols; ++j)
      if (!(in >> out.vectors(i, j))) throw std::runtime_error("truncated embedding file: " + path);
  }
  return out;
}

}  // namespace catape
