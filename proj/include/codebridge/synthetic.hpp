#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "codebridge/classifier.hpp"
#include "codebridge/corpus.hpp"
#include "codebridge/langid.hpp"

namespace codebridge {

// Seeded bilingual comment generator with known token languages, true
// CMI and planted rare positives.
struct SynthConfig {
  std::uint64_t seed = 1;
  std::size_t comments = 20000;
  double mixedRate = 0.2;
  double enShare = 0.5;          // of monolingual comments
  double positiveRate = 0.02;
  double hopeTokenShare = 0.4;   // in positive comments
  double hopeLeak = 0.003;       // hope words in negative comments
  double neutralRate = 0.1;
  std::size_t vocabPerLanguage = 1500;
  double zipfExponent = 1.0;
  std::size_t minTokens = 8;
  std::size_t maxTokens = 20;
  double minMinorityShare = 0.1;  // mixed comments
  double maxMinorityShare = 0.5;
  double surfaceNoise = 0.1;      // capitalization and punctuation
};

struct SynthComment {
  std::string id;
  std::vector<Language> gold;  // aligned with the comment's tokens
  Language majority = Language::En;
  bool mixed = false;
  bool positive = false;
  double trueCmi = 0.0;
};

struct SynthCorpus {
  Corpus corpus;
  std::vector<SynthComment> truth;  // aligned with corpus order

  const SynthComment& truthOf(const std::string& id) const;

  std::unordered_map<std::string, std::size_t> byId;
};

class SyntheticGenerator {
 public:
  explicit SyntheticGenerator(SynthConfig config);

  const SynthConfig& config() const { return config_; }
  const std::vector<std::string>& vocabulary(Language language) const;
  const std::vector<std::string>& hopeWords(Language language) const;
  const std::vector<std::string>& neutralTokens() const { return neutral_; }
  AnchorTokens anchors() const;

  // `config().comments` comments with ids "<prefix><n>".
  SynthCorpus generate(const std::string& prefix = "c");

  // One comment with `nonNeutral` language tokens whose minority share is
  // round(target * nonNeutral) / nonNeutral, plus neutral insertions.
  std::pair<Comment, SynthComment> withCmi(const std::string& id,
                                           double target,
                                           std::size_t nonNeutral,
                                           bool positive = false);

  // Monolingual English comments with a fraction of positives.
  SynthCorpus labeledEnglish(std::size_t n, double positiveRate,
                             const std::string& prefix = "l");

 private:
  std::pair<Comment, SynthComment> build(
      const std::string& id, const std::vector<Language>& plan, bool positive,
      Subset subsetTag);
  std::string drawWord(Language language, bool positive);
  std::vector<Language> plan(std::size_t nonNeutral, Language majority,
                             std::size_t minority, std::size_t spans);
  void add(SynthCorpus& out, std::pair<Comment, SynthComment> item);

  SynthConfig config_;
  std::mt19937_64 rng_;
  std::vector<std::string> en_;
  std::vector<std::string> he_;
  std::vector<std::string> hopeEn_;
  std::vector<std::string> hopeHe_;
  std::vector<std::string> neutral_;
  std::discrete_distribution<std::size_t> zipf_;
};

}  // namespace codebridge
