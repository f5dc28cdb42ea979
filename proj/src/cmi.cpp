#include "codebridge/cmi.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace codebridge {

CmiReport computeCMI(const TokenLabeling& labeling) {
  CmiReport report;
  report.commentId = labeling.commentId;
  report.tokenCount = labeling.labels.size();
  for (const Language label : labeling.labels) {
    if (label == Language::Neutral)
      ++report.neutralCount;
    else
      ++report.perLanguage[label];
  }
  report.nonNeutralCount = report.tokenCount - report.neutralCount;
  if (report.nonNeutralCount == 0) return report;
  std::size_t dominant = 0;
  for (const auto& [language, count] : report.perLanguage)
    dominant = std::max(dominant, count);
  report.cmi = static_cast<double>(report.nonNeutralCount - dominant) /
               static_cast<double>(report.nonNeutralCount);
  return report;
}

CmiReport estimateCMI(const ClusterModel& model, const EmbeddingTable& table,
                      const Comment& comment) {
  return computeCMI(labelComment(model, table, comment));
}

CodeMixedSelection selectCodeMixed(const Corpus& corpus,
                                   const ClusterModel& model,
                                   const EmbeddingTable& table,
                                   double threshold) {
  const double ceiling = 1.0 - 1.0 / static_cast<double>(model.k());
  if (!(threshold >= 0.0 && threshold <= ceiling))
    throw std::invalid_argument("CMI threshold must lie in [0, " +
                                formatDouble(ceiling) + "]");
  CodeMixedSelection selection;
  selection.selected.setName(corpus.name() + "/cm");
  selection.reports.reserve(corpus.size());
  for (const auto& comment : corpus) {
    auto report = estimateCMI(model, table, comment);
    if (report.cmi >= threshold) selection.selected.add(comment);
    selection.reports.push_back(std::move(report));
  }
  return selection;
}

double rmseCMI(std::span<const std::pair<double, double>> pairs) {
  if (pairs.empty()) throw std::invalid_argument("rmseCMI: empty input");
  double sum = 0.0;
  for (const auto& [truth, estimate] : pairs) {
    const double d = truth - estimate;
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(pairs.size()));
}

void writeCmiReport(std::ostream& out, const CmiReport& report) {
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [language, count] : report.perLanguage)
    counts[std::string(toString(language))] = count;
  nlohmann::json j{{"id", report.commentId},
                   {"cmi", report.cmi},
                   {"n", report.tokenCount},
                   {"u", report.neutralCount},
                   {"counts", counts}};
  out << j.dump() << '\n';
}

}  // namespace codebridge
