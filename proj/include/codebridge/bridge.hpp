#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "codebridge/classifier.hpp"
#include "codebridge/cmi.hpp"
#include "codebridge/corpus.hpp"
#include "codebridge/embedding.hpp"
#include "codebridge/langid.hpp"
#include "codebridge/sampler.hpp"

namespace codebridge {

// The target-language tokens of one comment, in surface order.
struct ExtractedComment {
  std::string sourceId;
  std::vector<std::string> keptTokens;
  std::size_t droppedCount = 0;

  bool empty() const { return keptTokens.empty(); }
};

ExtractedComment extractLanguageSubpart(const TokenLabeling& labeling,
                                        const Comment& comment,
                                        Language target = Language::HE);

// Seed queries for nnSample. With `extract`, each seed vector is the mean
// of its target-language tokens only; seeds whose query does not resolve
// are skipped and counted.
struct SeedSet {
  std::vector<Query> queries;
  std::vector<std::string> skipped;
};

SeedSet buildSeeds(const Corpus& seeds, const ClusterModel& model,
                   const EmbeddingTable& table, bool extract,
                   Language target = Language::HE);

struct PipelineConfig {
  double cmiThreshold = 0.4;
  bool extract = true;
  int size = 5;
  Subset pool = Subset::HE;
  Language target = Language::HE;
  // When set, D_hope is restricted to these ids (manually confirmed).
  std::optional<std::unordered_set<std::string>> confirmedPositives;
};

struct StageCount {
  std::string name;
  std::size_t in = 0;
  std::size_t out = 0;
};

class StageEmptyError : public std::runtime_error {
 public:
  explicit StageEmptyError(std::string stage);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct PipelineResult {
  SampleBatch batch;
  std::vector<StageCount> stages;
  std::vector<CmiReport> cmiReports;
  Corpus codeMixed;             // D_cm
  HopeSelection hope;           // D_hope with scores
  std::vector<Query> seeds;     // queries actually used
  std::vector<std::string> skippedSeeds;
  std::vector<Shortfall> shortfalls;
  std::vector<std::string> excludedPool;
};

// selectCodeMixed -> filterHope -> [confirm] -> [extract] -> nnSample over
// the pool subset of `corpus`.
PipelineResult runPipeline(const Corpus& corpus, const ClusterModel& model,
                           const EmbeddingTable& table,
                           const HopeScorer& scorer,
                           const PipelineConfig& config);

// One "name<TAB>in<TAB>out" line per stage.
void writeStageReport(std::ostream& out, const std::vector<StageCount>& stages);

}  // namespace codebridge
