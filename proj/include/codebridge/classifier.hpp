#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "codebridge/corpus.hpp"
#include "codebridge/embedding.hpp"

namespace codebridge {

struct LabeledDoc {
  std::string commentId;
  bool positive = false;
};

struct HopePrediction {
  double score = 0.0;  // in [0, 1]
  bool positive = false;
};

// Any rare-class scorer the pipeline can filter with.
class HopeScorer {
 public:
  virtual ~HopeScorer() = default;
  virtual HopePrediction predict(const EmbeddingTable& table,
                                 const Comment& comment) const = 0;
};

// sigmoid(w . docEmbedding + b); positive iff score >= threshold.
class LogisticHopeModel : public HopeScorer {
 public:
  LogisticHopeModel(Vector weights, double bias, double threshold = 0.5);

  HopePrediction predict(const EmbeddingTable& table,
                         const Comment& comment) const override;
  HopePrediction predictVector(std::span<const double> docVector) const;

  const Vector& weights() const { return weights_; }
  double bias() const { return bias_; }
  double threshold() const { return threshold_; }
  void setThreshold(double threshold);

 private:
  Vector weights_;
  double bias_;
  double threshold_;
};

struct HopeTrainConfig {
  double l2 = 1e-4;
  int epochs = 100;
  double learningRate = 0.5;
  std::uint64_t seed = 1;
  double threshold = 0.5;
};

class SingleClassError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// L2-regularized logistic regression on mean-pooled document embeddings,
// trained by shuffled SGD. Every labelled id must resolve in `corpus`.
LogisticHopeModel trainHopeClassifier(const EmbeddingTable& table,
                                      const Corpus& corpus,
                                      std::span<const LabeledDoc> train,
                                      const HopeTrainConfig& config = {});

struct HopeSelection {
  Corpus positives;
  std::vector<double> scores;  // aligned with positives
};

HopeSelection filterHope(const HopeScorer& scorer, const EmbeddingTable& table,
                         const Corpus& corpus);

// Model file: "dim", "bias", "threshold" lines then one weight row.
void writeHopeModel(std::ostream& out, const LogisticHopeModel& model);
LogisticHopeModel readHopeModel(std::istream& in);
void saveHopeModel(const std::filesystem::path& path,
                   const LogisticHopeModel& model);
LogisticHopeModel loadHopeModel(const std::filesystem::path& path);

// Labels file: "commentId<whitespace>0|1" per line.
std::vector<LabeledDoc> readLabels(std::istream& in);
std::vector<LabeledDoc> loadLabels(const std::filesystem::path& path);
void writeLabels(std::ostream& out, std::span<const LabeledDoc> labels);

}  // namespace codebridge
