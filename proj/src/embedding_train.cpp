// Skip-gram with negative sampling where a word's input representation is
// the mean of its own row and its character n-gram rows.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <thread>

#include "codebridge/embedding.hpp"

namespace codebridge {

namespace {

constexpr std::size_t kUnigramTableSize = 1'000'000;
constexpr double kMaxSigmoidArg = 30.0;

double sigmoid(double x) {
  x = std::clamp(x, -kMaxSigmoidArg, kMaxSigmoidArg);
  return 1.0 / (1.0 + std::exp(-x));
}

struct Vocabulary {
  std::vector<std::string> words;
  std::vector<std::uint64_t> counts;
  std::unordered_map<std::string, std::int32_t> ids;
  // Per word: input rows (word row first, then its n-gram rows).
  std::vector<std::vector<std::int32_t>> inputRows;
  std::vector<std::string> ngrams;
};

Vocabulary buildVocabulary(const Corpus& corpus, const TrainConfig& config) {
  std::map<std::string, std::uint64_t> raw;
  for (const auto& c : corpus)
    for (const auto& t : c.tokens) ++raw[t];

  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [word, count] : raw)
    if (count >= static_cast<std::uint64_t>(config.minCount))
      kept.emplace_back(word, count);
  // Descending frequency, then lexicographic; `raw` is already sorted by key.
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });

  Vocabulary vocab;
  for (auto& [word, count] : kept) {
    vocab.ids.emplace(word, static_cast<std::int32_t>(vocab.words.size()));
    vocab.words.push_back(word);
    vocab.counts.push_back(count);
  }

  const auto nwords = static_cast<std::int32_t>(vocab.words.size());
  std::unordered_map<std::string, std::int32_t> ngramIds;
  vocab.inputRows.resize(vocab.words.size());
  for (std::int32_t w = 0; w < nwords; ++w) {
    auto& rows = vocab.inputRows[w];
    rows.push_back(w);
    for (auto& g : charNgrams(vocab.words[w], config.minn, config.maxn)) {
      auto [it, inserted] = ngramIds.emplace(
          g, nwords + static_cast<std::int32_t>(vocab.ngrams.size()));
      if (inserted) vocab.ngrams.push_back(g);
      if (std::find(rows.begin(), rows.end(), it->second) == rows.end())
        rows.push_back(it->second);
    }
  }
  return vocab;
}

std::vector<std::int32_t> buildUnigramTable(const Vocabulary& vocab) {
  std::vector<double> weights(vocab.counts.size());
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    weights[i] = std::pow(static_cast<double>(vocab.counts[i]), 0.75);
    total += weights[i];
  }
  std::vector<std::int32_t> table;
  table.reserve(kUnigramTableSize);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const auto n = static_cast<std::size_t>(
        std::ceil(weights[i] / total * static_cast<double>(kUnigramTableSize)));
    table.insert(table.end(), n, static_cast<std::int32_t>(i));
  }
  return table;
}

class SkipGramTrainer {
 public:
  SkipGramTrainer(const Vocabulary& vocab, const TrainConfig& config,
                  std::vector<std::vector<std::int32_t>> sentences)
      : vocab_(vocab),
        config_(config),
        dim_(static_cast<std::size_t>(config.dim)),
        sentences_(std::move(sentences)),
        negatives_(buildUnigramTable(vocab)) {
    const std::size_t inputCount = vocab.words.size() + vocab.ngrams.size();
    input_.resize(inputCount * dim_);
    output_.assign(vocab.words.size() * dim_, 0.0);
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> init(-1.0 / config.dim,
                                                1.0 / config.dim);
    for (double& x : input_) x = init(rng);
    for (const auto& s : sentences_) tokenCount_ += s.size();
  }

  void run() {
    const int threads = std::max(1, config_.threads);
    if (threads == 1) {
      work(0, 1);
      return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([this, t, threads] { work(t, threads); });
    for (auto& th : pool) th.join();
  }

  EmbeddingTable table() const {
    EmbeddingTable table(config_.dim);
    table.setNgramRange(config_.minn, config_.maxn);
    Vector hidden(dim_);
    for (std::size_t w = 0; w < vocab_.words.size(); ++w) {
      computeHidden(vocab_.inputRows[w], hidden);
      table.addEntry(vocab_.words[w], hidden);
    }
    const std::size_t nwords = vocab_.words.size();
    for (std::size_t g = 0; g < vocab_.ngrams.size(); ++g)
      table.addSubword(vocab_.ngrams[g],
                       std::span<const double>(&input_[(nwords + g) * dim_],
                                               dim_));
    return table;
  }

 private:
  void computeHidden(const std::vector<std::int32_t>& rows,
                     Vector& hidden) const {
    std::fill(hidden.begin(), hidden.end(), 0.0);
    for (auto r : rows) {
      const double* v = &input_[static_cast<std::size_t>(r) * dim_];
      for (std::size_t d = 0; d < dim_; ++d) hidden[d] += v[d];
    }
    const double scale = 1.0 / static_cast<double>(rows.size());
    for (double& x : hidden) x *= scale;
  }

  void work(int threadId, int threads) {
    std::mt19937_64 rng(config_.seed + 0x9E3779B97F4A7C15ULL *
                                           static_cast<std::uint64_t>(threadId + 1));
    Vector hidden(dim_), grad(dim_);
    const double total =
        static_cast<double>(tokenCount_) * config_.epochs / threads;
    double processed = 0.0;
    for (int epoch = 0; epoch < config_.epochs; ++epoch) {
      for (std::size_t s = threadId; s < sentences_.size(); s += threads) {
        const auto& sentence = sentences_[s];
        const double lr =
            config_.learningRate * std::max(0.0001, 1.0 - processed / total);
        const auto n = static_cast<std::int64_t>(sentence.size());
        for (std::int64_t w = 0; w < n; ++w) {
          const auto boundary =
              static_cast<std::int64_t>(rng() % config_.window) + 1;
          const auto& rows = vocab_.inputRows[sentence[w]];
          for (std::int64_t c = w - boundary; c <= w + boundary; ++c) {
            if (c < 0 || c >= n || c == w) continue;
            update(rows, sentence[c], lr, rng, hidden, grad);
          }
        }
        processed += static_cast<double>(sentence.size());
      }
    }
  }

  void update(const std::vector<std::int32_t>& rows, std::int32_t target,
              double lr, std::mt19937_64& rng, Vector& hidden, Vector& grad) {
    computeHidden(rows, hidden);
    std::fill(grad.begin(), grad.end(), 0.0);
    for (int n = 0; n <= config_.negatives; ++n) {
      std::int32_t out = target;
      double label = 1.0;
      if (n > 0) {
        do {
          out = negatives_[rng() % negatives_.size()];
        } while (out == target && vocab_.words.size() > 1);
        label = 0.0;
      }
      double* o = &output_[static_cast<std::size_t>(out) * dim_];
      double score = 0.0;
      for (std::size_t d = 0; d < dim_; ++d) score += o[d] * hidden[d];
      const double alpha = lr * (label - sigmoid(score));
      for (std::size_t d = 0; d < dim_; ++d) {
        grad[d] += alpha * o[d];
        o[d] += alpha * hidden[d];
      }
    }
    for (auto r : rows) {
      double* v = &input_[static_cast<std::size_t>(r) * dim_];
      for (std::size_t d = 0; d < dim_; ++d) v[d] += grad[d];
    }
  }

  const Vocabulary& vocab_;
  const TrainConfig& config_;
  std::size_t dim_;
  std::vector<std::vector<std::int32_t>> sentences_;
  std::vector<std::int32_t> negatives_;
  std::vector<double> input_;
  std::vector<double> output_;
  std::size_t tokenCount_ = 0;
};

}  // namespace

EmbeddingTable trainEmbeddings(const Corpus& corpus,
                               const TrainConfig& config) {
  if (config.dim <= 0 || config.window <= 0 || config.epochs <= 0 ||
      config.negatives < 0 || config.minCount < 1)
    throw std::invalid_argument("invalid training configuration");
  if (config.minn < 1 || config.maxn < config.minn)
    throw std::invalid_argument("invalid n-gram range");

  const Vocabulary vocab = buildVocabulary(corpus, config);
  if (vocab.words.empty())
    throw TrainingError("vocabulary is empty after applying minCount " +
                        std::to_string(config.minCount));

  std::vector<std::vector<std::int32_t>> sentences;
  for (const auto& c : corpus) {
    std::vector<std::int32_t> ids;
    for (const auto& t : c.tokens)
      if (const auto it = vocab.ids.find(t); it != vocab.ids.end())
        ids.push_back(it->second);
    if (ids.size() >= 2) sentences.push_back(std::move(ids));
  }
  if (sentences.empty())
    throw TrainingError("no training pairs: no comment has two in-vocabulary "
                        "tokens");

  SkipGramTrainer trainer(vocab, config, std::move(sentences));
  trainer.run();
  return trainer.table();
}

}  // namespace codebridge
