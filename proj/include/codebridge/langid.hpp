#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "codebridge/corpus.hpp"
#include "codebridge/embedding.hpp"

namespace codebridge {

// `Other` names clusters beyond the two anchored languages when k > 2.
enum class Language { En, HE, Neutral, Other };

std::string_view toString(Language language);
Language parseLanguage(std::string_view text);

// Per-cluster centroids; `labels` is empty until anchorClusters runs.
struct ClusterModel {
  std::vector<Vector> centroids;
  std::vector<Language> labels;
  double epsilon = 0.1;

  std::size_t k() const { return centroids.size(); }
  int dim() const {
    return centroids.empty() ? 0 : static_cast<int>(centroids[0].size());
  }
  bool anchored() const { return labels.size() == centroids.size(); }
  // Index of the cluster labelled `language`; throws if there is none.
  std::size_t clusterOf(Language language) const;
};

struct KMeansOptions {
  int maxIterations = 300;
  double tolerance = 1e-6;  // max centroid shift
};

struct ClusterFit {
  ClusterModel model;
  std::vector<std::size_t> assignment;
  int iterations = 0;
  bool converged = false;
};

class ClusteringError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// k-means++ seeding followed by Lloyd iterations in Euclidean space.
// An empty cluster is re-seeded at the point farthest from its centroid.
ClusterFit fitClusters(std::span<const Vector> vectors, std::size_t k,
                       std::uint64_t seed, const KMeansOptions& options = {});

struct AnchorTokens {
  std::vector<std::string> en;
  std::vector<std::string> he;
};

// Names the clusters nearest the mean anchor vector of each language;
// remaining clusters become Other. Out-of-vocabulary anchors are ignored.
ClusterModel anchorClusters(ClusterModel model, const AnchorTokens& anchors,
                            const EmbeddingTable& table);

// Nearest centroid; exact ties go to En.
Language assignDocLanguage(const ClusterModel& model,
                           std::span<const double> vector);

// |dist(v, en) - dist(v, h_e)| / dist(en, h_e).
double neutralityRatio(const ClusterModel& model,
                       std::span<const double> vector);

Language assignVectorLanguage(const ClusterModel& model,
                              const ResolvedVector& vector);
Language assignTokenLanguage(const ClusterModel& model,
                             const EmbeddingTable& table,
                             std::string_view token);

struct TokenLabeling {
  std::string commentId;
  std::vector<Language> labels;
};

TokenLabeling labelComment(const ClusterModel& model,
                           const EmbeddingTable& table, const Comment& comment);

// Neutral tokens ranked by corpus frequency, ties by token.
std::vector<std::pair<std::string, std::size_t>> neutralLexicon(
    const ClusterModel& model, const EmbeddingTable& table,
    const Corpus& corpus, std::size_t topN);

// "k dim epsilon" header, k rows "index c1 ... c_dim", then k lines
// "label index language" once anchored.
void writeClusterModel(std::ostream& out, const ClusterModel& model);
ClusterModel readClusterModel(std::istream& in);
void saveClusterModel(const std::filesystem::path& path,
                      const ClusterModel& model);
ClusterModel loadClusterModel(const std::filesystem::path& path);

}  // namespace codebridge
