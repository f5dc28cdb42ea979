#include "codebridge/bridge.hpp"

#include <ostream>

namespace codebridge {

ExtractedComment extractLanguageSubpart(const TokenLabeling& labeling,
                                        const Comment& comment,
                                        Language target) {
  if (labeling.labels.size() != comment.tokens.size())
    throw std::invalid_argument("labeling of '" + labeling.commentId +
                                "' does not match comment '" + comment.id +
                                "'");
  ExtractedComment out{comment.id, {}, 0};
  for (std::size_t i = 0; i < comment.tokens.size(); ++i) {
    if (labeling.labels[i] == target)
      out.keptTokens.push_back(comment.tokens[i]);
    else
      ++out.droppedCount;
  }
  return out;
}

SeedSet buildSeeds(const Corpus& seeds, const ClusterModel& model,
                   const EmbeddingTable& table, bool extract,
                   Language target) {
  SeedSet set;
  for (const auto& c : seeds) {
    ResolvedVector v;
    if (extract) {
      const auto kept =
          extractLanguageSubpart(labelComment(model, table, c), c, target);
      v = docEmbedding(table, kept.keptTokens);
    } else {
      v = docEmbedding(table, c.tokens);
    }
    if (v.oov || norm(v.vector) == 0.0) {
      set.skipped.push_back(c.id);
      continue;
    }
    set.queries.push_back({c.id, std::move(v.vector)});
  }
  return set;
}

StageEmptyError::StageEmptyError(std::string stage)
    : std::runtime_error("pipeline stage '" + stage + "' produced no comments"),
      stage_(std::move(stage)) {}

PipelineResult runPipeline(const Corpus& corpus, const ClusterModel& model,
                           const EmbeddingTable& table,
                           const HopeScorer& scorer,
                           const PipelineConfig& config) {
  PipelineResult result;

  auto cm = selectCodeMixed(corpus, model, table, config.cmiThreshold);
  result.stages.push_back({"code_mixed", corpus.size(), cm.selected.size()});
  result.cmiReports = std::move(cm.reports);
  result.codeMixed = std::move(cm.selected);
  if (result.codeMixed.empty()) throw StageEmptyError("code_mixed");

  result.hope = filterHope(scorer, table, result.codeMixed);
  result.stages.push_back(
      {"hope", result.codeMixed.size(), result.hope.positives.size()});
  if (result.hope.positives.empty()) throw StageEmptyError("hope");

  const Corpus* seedComments = &result.hope.positives;
  Corpus confirmed(result.hope.positives.name() + "/confirmed");
  if (config.confirmedPositives) {
    for (const auto& c : result.hope.positives)
      if (config.confirmedPositives->count(c.id)) confirmed.add(c);
    result.stages.push_back(
        {"confirmed", result.hope.positives.size(), confirmed.size()});
    if (confirmed.empty()) throw StageEmptyError("confirmed");
    seedComments = &confirmed;
  }

  auto seeds =
      buildSeeds(*seedComments, model, table, config.extract, config.target);
  result.stages.push_back({config.extract ? "extract" : "embed",
                           seedComments->size(), seeds.queries.size()});
  result.skippedSeeds = std::move(seeds.skipped);
  result.seeds = std::move(seeds.queries);
  if (result.seeds.empty())
    throw StageEmptyError(config.extract ? "extract" : "embed");

  const Corpus pool = filterSubset(corpus, config.pool);
  if (pool.empty()) throw StageEmptyError("pool");
  const NNIndex index = NNIndex::build(pool, table);
  result.excludedPool = index.excluded();

  std::string name = config.extract ? "nn_sample(hope/h_e)" : "nn_sample(hope)";
  if (config.confirmedPositives) name += "+";
  auto sampled = nnSample(result.seeds, index, config.size, {}, name);
  result.batch = std::move(sampled.batch);
  result.shortfalls = std::move(sampled.shortfalls);
  result.stages.push_back(
      {"nn_sample", result.seeds.size(), result.batch.size()});
  return result;
}

void writeStageReport(std::ostream& out,
                      const std::vector<StageCount>& stages) {
  for (const auto& s : stages)
    out << s.name << '\t' << s.in << '\t' << s.out << '\n';
}

}  // namespace codebridge
