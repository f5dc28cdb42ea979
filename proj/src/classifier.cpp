#include "codebridge/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace codebridge {

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void checkThreshold(double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw std::invalid_argument("threshold must lie in [0, 1]");
}

}  // namespace

LogisticHopeModel::LogisticHopeModel(Vector weights, double bias,
                                     double threshold)
    : weights_(std::move(weights)), bias_(bias), threshold_(threshold) {
  checkThreshold(threshold);
  if (!std::isfinite(bias_) ||
      !std::all_of(weights_.begin(), weights_.end(),
                   [](double w) { return std::isfinite(w); }))
    throw std::invalid_argument("model parameters must be finite");
}

void LogisticHopeModel::setThreshold(double threshold) {
  checkThreshold(threshold);
  threshold_ = threshold;
}

HopePrediction LogisticHopeModel::predictVector(
    std::span<const double> docVector) const {
  if (docVector.size() != weights_.size())
    throw std::invalid_argument("document vector dimension mismatch");
  const double score = sigmoid(dot(weights_, docVector) + bias_);
  return {score, score >= threshold_};
}

HopePrediction LogisticHopeModel::predict(const EmbeddingTable& table,
                                          const Comment& comment) const {
  return predictVector(docEmbedding(table, comment.tokens).vector);
}

LogisticHopeModel trainHopeClassifier(const EmbeddingTable& table,
                                      const Corpus& corpus,
                                      std::span<const LabeledDoc> train,
                                      const HopeTrainConfig& config) {
  if (config.epochs <= 0 || !(config.learningRate > 0.0) || config.l2 < 0.0)
    throw std::invalid_argument("invalid classifier configuration");
  std::vector<Vector> xs;
  std::vector<double> ys;
  std::size_t positives = 0;
  for (const auto& doc : train) {
    const Comment* c = corpus.find(doc.commentId);
    if (c == nullptr)
      throw std::invalid_argument("labelled id '" + doc.commentId +
                                  "' is not in the training corpus");
    xs.push_back(docEmbedding(table, c->tokens).vector);
    ys.push_back(doc.positive ? 1.0 : 0.0);
    positives += doc.positive ? 1 : 0;
  }
  if (positives == 0 || positives == train.size())
    throw SingleClassError("training set must contain both classes");

  const auto dim = static_cast<std::size_t>(table.dim());
  Vector w(dim, 0.0);
  double b = 0.0;
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);
  const double steps = static_cast<double>(config.epochs) * xs.size();
  double step = 0.0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates with raw engine output keeps the order portable.
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng() % i]);
    for (const std::size_t i : order) {
      const double lr = config.learningRate * (1.0 - step / steps);
      step += 1.0;
      const double err = ys[i] - sigmoid(dot(w, xs[i]) + b);
      for (std::size_t d = 0; d < dim; ++d)
        w[d] += lr * (err * xs[i][d] - config.l2 * w[d]);
      b += lr * err;
    }
  }
  return LogisticHopeModel(std::move(w), b, config.threshold);
}

HopeSelection filterHope(const HopeScorer& scorer, const EmbeddingTable& table,
                         const Corpus& corpus) {
  HopeSelection selection;
  selection.positives.setName(corpus.name() + "/hope");
  for (const auto& c : corpus) {
    const auto p = scorer.predict(table, c);
    if (!p.positive) continue;
    selection.positives.add(c);
    selection.scores.push_back(p.score);
  }
  return selection;
}

void writeHopeModel(std::ostream& out, const LogisticHopeModel& model) {
  out << model.weights().size() << '\n'
      << formatDouble(model.bias()) << '\n'
      << formatDouble(model.threshold()) << '\n';
  for (std::size_t d = 0; d < model.weights().size(); ++d)
    out << (d ? " " : "") << formatDouble(model.weights()[d]);
  out << '\n';
}

LogisticHopeModel readHopeModel(std::istream& in) {
  std::size_t dim = 0;
  double bias = 0.0, threshold = 0.5;
  if (!(in >> dim) || dim == 0) throw ParseError(1, "expected dimension");
  if (!(in >> bias)) throw ParseError(2, "expected bias");
  if (!(in >> threshold)) throw ParseError(3, "expected threshold");
  Vector w(dim);
  for (auto& x : w)
    if (!(in >> x)) throw ParseError(4, "short weight row");
  std::string extra;
  if (in >> extra) throw ParseError(4, "trailing data after weight row");
  return LogisticHopeModel(std::move(w), bias, threshold);
}

void saveHopeModel(const std::filesystem::path& path,
                   const LogisticHopeModel& model) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  writeHopeModel(out, model);
}

LogisticHopeModel loadHopeModel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return readHopeModel(in);
}

std::vector<LabeledDoc> readLabels(std::istream& in) {
  std::vector<LabeledDoc> labels;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::istringstream row(line);
    std::string id, label, extra;
    if (!(row >> id)) continue;
    if (!(row >> label) || (label != "0" && label != "1") || (row >> extra))
      throw ParseError(lineNo, "expected 'commentId 0|1'");
    labels.push_back({id, label == "1"});
  }
  return labels;
}

std::vector<LabeledDoc> loadLabels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return readLabels(in);
}

void writeLabels(std::ostream& out, std::span<const LabeledDoc> labels) {
  for (const auto& l : labels)
    out << l.commentId << '\t' << (l.positive ? 1 : 0) << '\n';
}

}  // namespace codebridge
