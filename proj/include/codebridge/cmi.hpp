#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "codebridge/corpus.hpp"
#include "codebridge/embedding.hpp"
#include "codebridge/langid.hpp"

namespace codebridge {

// Code Mixing Index of one document:
//   (sum_j N(l_j) - max_i N(l_i)) / (n - u), and 0 when n == u.
struct CmiReport {
  std::string commentId;
  double cmi = 0.0;
  std::size_t tokenCount = 0;       // n
  std::size_t neutralCount = 0;     // u
  std::size_t nonNeutralCount = 0;  // n - u
  std::map<Language, std::size_t> perLanguage;
};

CmiReport computeCMI(const TokenLabeling& labeling);

// computeCMI over the predicted token labels of `comment`.
CmiReport estimateCMI(const ClusterModel& model, const EmbeddingTable& table,
                      const Comment& comment);

struct CodeMixedSelection {
  Corpus selected;
  std::vector<CmiReport> reports;  // one per input comment, input order
};

// Keeps comments whose estimated CMI is >= threshold. The threshold must lie
// in [0, 1 - 1/k] for the model's k.
CodeMixedSelection selectCodeMixed(const Corpus& corpus,
                                   const ClusterModel& model,
                                   const EmbeddingTable& table,
                                   double threshold = 0.4);

// Root mean squared difference of (true, estimated) pairs.
double rmseCMI(std::span<const std::pair<double, double>> pairs);

// Sidecar record: {"id", "cmi", "n", "u", "counts": {...}}.
void writeCmiReport(std::ostream& out, const CmiReport& report);

}  // namespace codebridge
