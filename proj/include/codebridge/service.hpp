#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_set>
#include <vector>

#include "codebridge/bridge.hpp"
#include "codebridge/corpus.hpp"
#include "codebridge/embedding.hpp"
#include "codebridge/langid.hpp"
#include "codebridge/sampler.hpp"
#include "json.hpp"

namespace httplib {
class Server;
}  // namespace httplib

namespace codebridge {

enum class AnnotationLabel { Hope, NotHope, Skip };

std::string_view toString(AnnotationLabel label);
AnnotationLabel parseAnnotationLabel(std::string_view text);

struct AnnotationRecord {
  std::string poolId;
  AnnotationLabel label = AnnotationLabel::Skip;
  std::string annotator;
  std::string timestamp;  // ISO-8601 UTC

  bool operator==(const AnnotationRecord&) const = default;
};

nlohmann::json toJson(const AnnotationRecord& record);
AnnotationRecord annotationFromJson(const nlohmann::json& j);

enum class Consensus { Hope, NotHope, Unresolved };

std::string_view toString(Consensus consensus);

// Majority of hope vs not_hope among one item's active labels; skips do
// not vote and ties are unresolved.
Consensus consensusOf(const std::map<std::string, AnnotationLabel>& byAnnotator);

struct ServiceResponse {
  int status = 200;
  nlohmann::json body;
};

struct ServiceContext {
  const Corpus* corpus = nullptr;  // texts for every servable pool id
  const ClusterModel* model = nullptr;
  const EmbeddingTable* table = nullptr;
  Subset pool = Subset::HE;
  Language target = Language::HE;
};

// Annotation session. Labels go to an append-only JSONL log and every
// served batch to "<labels>.rounds"; constructing a service over existing
// logs replays them. An empty log path keeps state in memory.
class AnnotationService {
 public:
  AnnotationService(ServiceContext context, std::filesystem::path labelLog);

  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  bool hasBatch() const;
  int round() const;

  // Installs the first batch (round 0). Throws if one already exists.
  void installBatch(const SampleBatch& batch,
                    const std::vector<StageCount>& stages);

  ServiceResponse nextBatch(const std::optional<std::string>& annotator,
                            const std::optional<std::string>& n) const;
  ServiceResponse postLabels(const std::string& body);
  ServiceResponse resample(const std::string& body);
  ServiceResponse stats() const;

  std::map<std::string, Consensus> consensus() const;
  std::size_t labelCount() const;
  std::vector<std::string> servedIds() const;
  SampleBatch currentBatch() const;

  static std::filesystem::path roundsPath(const std::filesystem::path& labels);

 private:
  void replay();
  void applyRecord(const AnnotationRecord& record);
  void appendRound(const SampleBatch& batch,
                   const std::vector<StageCount>& stages);
  void acceptBatch(const SampleBatch& batch,
                   const std::vector<StageCount>& stages);
  std::map<std::string, Consensus> consensusLocked() const;

  ServiceContext context_;
  std::filesystem::path labelLog_;
  std::ofstream labelOut_;
  std::ofstream roundsOut_;
  std::optional<NNIndex> index_;

  mutable std::shared_mutex mutex_;
  int round_ = -1;
  SampleBatch current_;
  std::vector<StageCount> stages_;
  std::vector<std::string> servedOrder_;
  std::unordered_set<std::string> served_;
  std::size_t labelCount_ = 0;
  // poolId -> annotator -> latest label
  std::map<std::string, std::map<std::string, AnnotationLabel>> latest_;
};

// Registers GET /batch/next, POST /labels, POST /resample and GET /stats.
void mountRoutes(httplib::Server& server, AnnotationService& service);

// Port from CODEBRIDGE_PORT, else 8080.
int servicePortFromEnv();

}  // namespace codebridge
