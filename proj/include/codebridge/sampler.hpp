#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "codebridge/corpus.hpp"
#include "codebridge/embedding.hpp"

namespace codebridge {

// Exact cosine-distance index over pool document embeddings. Documents
// whose embedding does not resolve are excluded and listed.
class NNIndex {
 public:
  NNIndex(std::vector<std::string> ids, std::vector<Vector> vectors);

  static NNIndex build(const Corpus& pool, const EmbeddingTable& table);

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const Vector& vector(std::size_t i) const { return vectors_[i]; }
  double norm(std::size_t i) const { return norms_[i]; }
  const std::vector<std::string>& excluded() const { return excluded_; }

 private:
  std::vector<std::string> ids_;
  std::vector<Vector> vectors_;
  std::vector<double> norms_;
  std::vector<std::string> excluded_;
};

struct Query {
  std::string id;
  Vector vector;
};

struct SampleMember {
  std::string poolId;
  std::string seedId;
  double distance = 0.0;
  int rank = 0;  // 1-based position among this seed's additions

  bool operator==(const SampleMember&) const = default;
};

struct SampleBatch {
  std::string seedSetName;
  std::vector<SampleMember> members;

  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
};

struct Shortfall {
  std::string seedId;
  int requested = 0;
  int added = 0;
};

struct NNSampleResult {
  SampleBatch batch;
  std::vector<Shortfall> shortfalls;
};

// Seed-set expansion: for each seed in input order, walk the pool in
// ascending (cosine distance, pool id) order and add the first `size`
// items not already in E, the seed set, or `exclude`.
NNSampleResult nnSample(std::span<const Query> seeds, const NNIndex& index,
                        int size,
                        const std::unordered_set<std::string>& exclude = {},
                        std::string seedSetName = {});

// Uniform sample without replacement; throws if n > |pool|.
Corpus randomSample(const Corpus& pool, std::size_t n, std::uint64_t seed);

// Batch file: "poolId<TAB>seedId<TAB>distance<TAB>rank" per line.
void writeBatch(std::ostream& out, const SampleBatch& batch);
SampleBatch readBatch(std::istream& in);
void saveBatch(const std::filesystem::path& path, const SampleBatch& batch);
SampleBatch loadBatch(const std::filesystem::path& path);

}  // namespace codebridge
