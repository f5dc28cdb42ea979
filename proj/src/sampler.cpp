#include "codebridge/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace codebridge {

namespace {

struct Candidate {
  double distance;
  std::size_t index;
};

}  // namespace

NNIndex::NNIndex(std::vector<std::string> ids, std::vector<Vector> vectors) {
  if (ids.size() != vectors.size())
    throw std::invalid_argument("ids and vectors differ in length");
  std::unordered_set<std::string> seen;
  const std::size_t dim = vectors.empty() ? 0 : vectors[0].size();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!seen.insert(ids[i]).second)
      throw std::invalid_argument("duplicate pool id '" + ids[i] + "'");
    if (vectors[i].size() != dim)
      throw std::invalid_argument("pool vectors differ in dimension");
    for (double x : vectors[i])
      if (!std::isfinite(x))
        throw std::invalid_argument("pool vector '" + ids[i] +
                                    "' is not finite");
    const double n = codebridge::norm(vectors[i]);
    if (n == 0.0) {
      excluded_.push_back(std::move(ids[i]));
      continue;
    }
    ids_.push_back(std::move(ids[i]));
    vectors_.push_back(std::move(vectors[i]));
    norms_.push_back(n);
  }
}

NNIndex NNIndex::build(const Corpus& pool, const EmbeddingTable& table) {
  if (pool.empty()) throw std::invalid_argument("pool is empty");
  std::vector<std::string> ids;
  std::vector<Vector> vectors;
  for (const auto& c : pool) {
    ids.push_back(c.id);
    vectors.push_back(docEmbedding(table, c.tokens).vector);
  }
  NNIndex index(std::move(ids), std::move(vectors));
  if (index.size() == 0)
    throw std::runtime_error("no pool document has a resolvable embedding");
  return index;
}

NNSampleResult nnSample(std::span<const Query> seeds, const NNIndex& index,
                        int size,
                        const std::unordered_set<std::string>& exclude,
                        std::string seedSetName) {
  if (size < 0) throw std::invalid_argument("size must be non-negative");
  NNSampleResult result;
  result.batch.seedSetName = std::move(seedSetName);
  if (size == 0) return result;

  std::unordered_set<std::string> seedIds;
  for (const auto& s : seeds) seedIds.insert(s.id);
  std::unordered_set<std::string> taken;

  // Min-heap on (distance, pool id): popping it is the monotone cursor.
  auto after = [&](const Candidate& a, const Candidate& b) {
    if (a.distance != b.distance) return a.distance > b.distance;
    return index.ids()[a.index] > index.ids()[b.index];
  };
  std::vector<Candidate> heap;
  for (const auto& seed : seeds) {
    if (seed.vector.empty() ||
        (index.size() > 0 && seed.vector.size() != index.vector(0).size()))
      throw std::invalid_argument("seed '" + seed.id +
                                  "' has the wrong dimension");
    const double seedNorm = codebridge::norm(seed.vector);
    if (seedNorm == 0.0)
      throw std::invalid_argument("seed '" + seed.id +
                                  "' has no resolvable embedding");
    heap.clear();
    for (std::size_t i = 0; i < index.size(); ++i)
      heap.push_back({cosineDistance(seed.vector, index.vector(i), seedNorm,
                                     index.norm(i)),
                      i});
    std::make_heap(heap.begin(), heap.end(), after);

    int added = 0;
    while (added < size && !heap.empty()) {
      std::pop_heap(heap.begin(), heap.end(), after);
      const Candidate next = heap.back();
      heap.pop_back();
      const auto& id = index.ids()[next.index];
      if (seedIds.count(id) || exclude.count(id) || taken.count(id)) continue;
      taken.insert(id);
      ++added;
      result.batch.members.push_back({id, seed.id, next.distance, added});
    }
    if (added < size) result.shortfalls.push_back({seed.id, size, added});
  }
  return result;
}

Corpus randomSample(const Corpus& pool, std::size_t n, std::uint64_t seed) {
  if (n > pool.size())
    throw std::invalid_argument("cannot sample " + std::to_string(n) +
                                " of " + std::to_string(pool.size()) +
                                " comments");
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first n slots are a uniform sample.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng() % (order.size() - i);
    std::swap(order[i], order[j]);
  }
  Corpus out(pool.name() + "/random");
  for (std::size_t i = 0; i < n; ++i) out.add(pool[order[i]]);
  return out;
}

void writeBatch(std::ostream& out, const SampleBatch& batch) {
  for (const auto& m : batch.members)
    out << m.poolId << '\t' << m.seedId << '\t' << formatDouble(m.distance)
        << '\t' << m.rank << '\n';
}

SampleBatch readBatch(std::istream& in) {
  SampleBatch batch;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    SampleMember m;
    std::string extra;
    if (!(row >> m.poolId >> m.seedId >> m.distance >> m.rank) ||
        (row >> extra) || m.rank < 1)
      throw ParseError(lineNo, "expected 'poolId seedId distance rank'");
    batch.members.push_back(std::move(m));
  }
  return batch;
}

void saveBatch(const std::filesystem::path& path, const SampleBatch& batch) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  writeBatch(out, batch);
}

SampleBatch loadBatch(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  auto batch = readBatch(in);
  batch.seedSetName = path.stem().string();
  return batch;
}

}  // namespace codebridge
