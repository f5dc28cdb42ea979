#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "codebridge/corpus.hpp"

namespace codebridge {

using Vector = std::vector<double>;

// Dense token vectors plus character n-gram vectors used for back-off.
// Rows keep insertion order so that serialization is reproducible.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(int dim);

  int dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  std::size_t subwordCount() const { return subwords_.size(); }

  // Throws std::invalid_argument on dimension mismatch, non-finite
  // components or a repeated key.
  void addEntry(std::string token, std::span<const double> vector);
  void addSubword(std::string ngram, std::span<const double> vector);

  // nullptr when absent.
  const double* find(std::string_view token) const;
  const double* findSubword(std::string_view ngram) const;

  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<std::string>& subwords() const { return subwords_; }
  std::span<const double> row(std::size_t i) const;
  std::span<const double> subwordRow(std::size_t i) const;

  int minn() const { return minn_; }
  int maxn() const { return maxn_; }
  void setNgramRange(int minn, int maxn);

  bool operator==(const EmbeddingTable& other) const;

 private:
  int dim_;
  int minn_ = 3;
  int maxn_ = 6;
  std::vector<std::string> tokens_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> subwords_;
  std::vector<double> subwordData_;
  std::unordered_map<std::string, std::size_t> subwordIndex_;
};

// Result of resolving a token or document to a vector. `oov` is set when
// nothing resolved and `vector` is all zeros.
struct ResolvedVector {
  Vector vector;
  bool oov = false;
};

// Character n-grams of "<word>" with lengths in [minn, maxn], counted in
// code points. The bracketed word itself is excluded.
std::vector<std::string> charNgrams(std::string_view word, int minn, int maxn);

// Stored vector if known; else the mean of known n-gram vectors; else zero.
ResolvedVector tokenVector(const EmbeddingTable& table, std::string_view token);

// Mean of the resolvable token vectors (unweighted).
ResolvedVector docEmbedding(const EmbeddingTable& table,
                            std::span<const std::string> tokens);

double dot(std::span<const double> u, std::span<const double> v);
double norm(std::span<const double> u);

// 1 - cos(u, v); 1 when either norm is zero. Throws on dimension mismatch.
double cosineDistance(std::span<const double> u, std::span<const double> v);
// Same value given precomputed norms.
double cosineDistance(std::span<const double> u, std::span<const double> v,
                      double normU, double normV);
double euclideanDistance(std::span<const double> u, std::span<const double> v);

struct TrainConfig {
  int dim = 100;
  int window = 5;
  int epochs = 5;
  int minCount = 2;
  int negatives = 5;
  int minn = 3;
  int maxn = 6;
  double learningRate = 0.05;
  std::uint64_t seed = 1;
  // More than one thread trades bit-level determinism for speed.
  int threads = 1;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Skip-gram with negative sampling over word + subword input vectors.
EmbeddingTable trainEmbeddings(const Corpus& corpus, const TrainConfig& config);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Text vector format: "count dim" header, then "token c1 ... c_dim" rows.
EmbeddingTable readEmbeddings(std::istream& in);
EmbeddingTable loadEmbeddings(const std::filesystem::path& path);
void writeEmbeddings(std::ostream& out, const EmbeddingTable& table);
void saveEmbeddings(const std::filesystem::path& path,
                    const EmbeddingTable& table);

// Subword vectors use the same text format in a companion file.
void readSubwords(std::istream& in, EmbeddingTable& table);
void writeSubwords(std::ostream& out, const EmbeddingTable& table);
std::filesystem::path subwordPath(const std::filesystem::path& vectorsPath);

// Shortest decimal string that parses back to exactly `value`.
std::string formatDouble(double value);

}  // namespace codebridge
