#include "codebridge/bridge.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "world.hpp"

namespace codebridge {
namespace {

using testing::world;

constexpr Language E = Language::En;
constexpr Language H = Language::HE;
constexpr Language N = Language::Neutral;

// Scores every comment with a fixed value.
class ConstantScorer : public HopeScorer {
 public:
  explicit ConstantScorer(double score) : score_(score) {}
  HopePrediction predict(const EmbeddingTable&, const Comment&) const override {
    return {score_, score_ >= 0.5};
  }

 private:
  double score_;
};

TEST(ExtractSubpart, MislabeledTokenIsDropped) {
  const auto c = makeComment(
      "c1",
      "I love India I am Pakistani mein amun chahta hon khuda ke waste jang "
      "nai peace peace peace");
  ASSERT_EQ(c.tokens.size(), 18u);
  // "waste" comes out as English, so it is lost from the h_e part.
  const std::vector<Language> labels{E, E, N, E, E, N, H, H, H,
                                     H, H, H, E, H, H, E, E, E};
  const auto out = extractLanguageSubpart({"c1", labels}, c);
  EXPECT_EQ(out.keptTokens,
            (std::vector<std::string>{"mein", "amun", "chahta", "hon", "khuda",
                                      "ke", "jang", "nai"}));
  EXPECT_EQ(out.droppedCount, 10u);
  EXPECT_EQ(out.sourceId, "c1");
}

TEST(ExtractSubpart, IdentityAndEmpty) {
  const auto c = makeComment("c", "aman chahiye bas");
  const auto all = extractLanguageSubpart({"c", {H, H, H}}, c);
  EXPECT_EQ(all.keptTokens, c.tokens);
  EXPECT_EQ(all.droppedCount, 0u);
  const auto none = extractLanguageSubpart({"c", {E, N, E}}, c);
  EXPECT_TRUE(none.empty());
  EXPECT_EQ(none.droppedCount, 3u);
  EXPECT_THROW(extractLanguageSubpart({"c", {H}}, c), std::invalid_argument);
}

TEST(ExtractSubpart, TargetEnglish) {
  const auto c = makeComment("c", "no more jang please");
  const auto out = extractLanguageSubpart({"c", {E, E, H, E}}, c, E);
  EXPECT_EQ(out.keptTokens, (std::vector<std::string>{"no", "more", "please"}));
}

TEST(BridgeProperty, ConservationAndIdempotence) {
  std::mt19937_64 rng(31);
  const std::vector<Language> alphabet{E, H, N};
  for (int trial = 0; trial < 1000; ++trial) {
    std::string text;
    const std::size_t n = rng() % 15;
    for (std::size_t i = 0; i < n; ++i) text += "w" + std::to_string(rng() % 9) + " ";
    const auto c = makeComment("c", text);
    std::vector<Language> labels(c.tokens.size());
    for (auto& l : labels) l = alphabet[rng() % 3];
    const auto first = extractLanguageSubpart({"c", labels}, c);
    EXPECT_EQ(first.keptTokens.size() + first.droppedCount, c.tokens.size());
    std::size_t targets = 0;
    for (auto l : labels) targets += l == H;
    EXPECT_EQ(first.keptTokens.size(), targets);

    std::string kept;
    for (const auto& t : first.keptTokens) kept += t + " ";
    const auto again = makeComment("c", kept);
    const auto second = extractLanguageSubpart(
        {"c", std::vector<Language>(again.tokens.size(), H)}, again);
    EXPECT_EQ(second.keptTokens, first.keptTokens);
  }
}

TEST(BuildSeeds, ExtractionLowersSeedCmi) {
  const auto& w = world();
  SyntheticGenerator gen(w.gen.config());
  Corpus seeds("seeds");
  for (int i = 0; i < 40; ++i)
    seeds.add(gen.withCmi("s" + std::to_string(i), 0.45, 20, true).first);

  const auto extracted = buildSeeds(seeds, w.model, w.table, true);
  ASSERT_FALSE(extracted.queries.empty());
  double rawCmi = 0;
  double extractedCmi = 0;
  for (const auto& c : seeds) {
    rawCmi += estimateCMI(w.model, w.table, c).cmi;
    const auto kept =
        extractLanguageSubpart(labelComment(w.model, w.table, c), c);
    std::string text;
    for (const auto& t : kept.keptTokens) text += t + " ";
    extractedCmi += estimateCMI(w.model, w.table, makeComment(c.id, text)).cmi;
  }
  EXPECT_LT(extractedCmi / seeds.size(), rawCmi / seeds.size() - 0.15);
}

TEST(BuildSeeds, UnresolvableSeedsAreSkipped) {
  const auto& w = world();
  Corpus seeds("seeds");
  seeds.add(makeComment("empty", "qqqq zzzz"));
  const auto anchors = w.gen.anchors();
  std::string english;
  for (const auto& t : anchors.en) english += t + " ";
  seeds.add(makeComment("english", english));
  const auto raw = buildSeeds(seeds, w.model, w.table, false);
  EXPECT_EQ(raw.queries.size(), 1u);
  EXPECT_EQ(raw.skipped, std::vector<std::string>{"empty"});
  const auto extracted = buildSeeds(seeds, w.model, w.table, true);
  EXPECT_TRUE(extracted.queries.empty());
  EXPECT_EQ(extracted.skipped.size(), 2u);
}

TEST(RunPipeline, StagesNarrowAndBatchComesFromPool) {
  const auto& w = world();
  PipelineConfig config;
  config.cmiThreshold = 0.3;
  const auto r = runPipeline(w.syn.corpus, w.model, w.table, w.hope, config);
  ASSERT_GE(r.stages.size(), 4u);
  EXPECT_EQ(r.stages[0].name, "code_mixed");
  EXPECT_EQ(r.stages[1].name, "hope");
  EXPECT_EQ(r.stages[2].name, "extract");
  EXPECT_EQ(r.stages[3].name, "nn_sample");
  EXPECT_LT(r.stages[0].out, r.stages[0].in);
  EXPECT_LT(r.stages[1].out, r.stages[1].in);
  EXPECT_EQ(r.stages[1].in, r.stages[0].out);
  EXPECT_EQ(r.stages[2].in, r.stages[1].out);

  for (const auto& c : r.codeMixed)
    EXPECT_GE(estimateCMI(w.model, w.table, c).cmi, 0.3);
  for (const auto& c : r.hope.positives) EXPECT_TRUE(r.codeMixed.contains(c.id));
  EXPECT_LE(r.batch.size(), r.seeds.size() * 5);
  for (const auto& m : r.batch.members) {
    const auto* c = w.syn.corpus.find(m.poolId);
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->subset, Subset::HE);
  }
  EXPECT_EQ(r.batch.seedSetName, "nn_sample(hope/h_e)");
}

TEST(RunPipeline, ConfirmedPositivesRestrictSeeds) {
  const auto& w = world();
  PipelineConfig config;
  config.cmiThreshold = 0.3;
  const auto full = runPipeline(w.syn.corpus, w.model, w.table, w.hope, config);
  ASSERT_FALSE(full.hope.positives.empty());
  config.confirmedPositives =
      std::unordered_set<std::string>{full.hope.positives[0].id};
  const auto r = runPipeline(w.syn.corpus, w.model, w.table, w.hope, config);
  EXPECT_EQ(r.stages[2].name, "confirmed");
  EXPECT_EQ(r.stages[2].out, 1u);
  EXPECT_EQ(r.batch.seedSetName, "nn_sample(hope/h_e)+");
  config.confirmedPositives = std::unordered_set<std::string>{"nobody"};
  try {
    runPipeline(w.syn.corpus, w.model, w.table, w.hope, config);
    FAIL();
  } catch (const StageEmptyError& e) {
    EXPECT_EQ(e.stage(), "confirmed");
  }
}

TEST(RunPipeline, EmptyStagesAreNamed) {
  const auto& w = world();
  PipelineConfig config;
  try {
    runPipeline(w.syn.corpus, w.model, w.table, ConstantScorer(0.0), config);
    FAIL();
  } catch (const StageEmptyError& e) {
    EXPECT_EQ(e.stage(), "hope");
  }
  Corpus mono("mono");
  for (std::size_t i = 0; i < w.syn.corpus.size() && mono.size() < 50; ++i)
    if (!w.syn.truth[i].mixed) mono.add(w.syn.corpus[i]);
  try {
    runPipeline(mono, w.model, w.table, ConstantScorer(1.0), config);
    FAIL();
  } catch (const StageEmptyError& e) {
    EXPECT_EQ(e.stage(), "code_mixed");
  }
}

TEST(RunPipeline, RawVariantSkipsExtraction) {
  const auto& w = world();
  PipelineConfig config;
  config.extract = false;
  const auto r =
      runPipeline(w.syn.corpus, w.model, w.table, ConstantScorer(1.0), config);
  EXPECT_EQ(r.stages[2].name, "embed");
  EXPECT_EQ(r.stages[2].in, r.stages[2].out);
  EXPECT_EQ(r.batch.seedSetName, "nn_sample(hope)");
}

TEST(StageReport, Format) {
  std::ostringstream out;
  writeStageReport(out, {{"code_mixed", 10, 4}, {"hope", 4, 1}});
  EXPECT_EQ(out.str(), "code_mixed\t10\t4\nhope\t4\t1\n");
}

}  // namespace
}  // namespace codebridge
