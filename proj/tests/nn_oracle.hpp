#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "codebridge/sampler.hpp"

namespace codebridge::testing {

struct NNInstance {
  std::vector<std::string> poolIds;
  std::vector<Vector> poolVectors;
  std::vector<Query> seeds;
  int size = 0;
};

// Small integer coordinates make exact distance ties common; some seeds
// reuse pool ids and some pool vectors are zero.
inline NNInstance randomNNInstance(std::mt19937_64& rng, std::size_t maxPool,
                                   std::size_t maxSeeds, int maxSize) {
  NNInstance out;
  const int dim = 2 + static_cast<int>(rng() % 4);
  const std::size_t pool = 1 + rng() % maxPool;
  const bool integer = rng() % 2 == 0;
  std::normal_distribution<double> g;
  auto draw = [&] {
    Vector v(dim);
    for (auto& x : v)
      x = integer ? static_cast<double>(static_cast<int>(rng() % 5) - 2) : g(rng);
    return v;
  };
  for (std::size_t i = 0; i < pool; ++i) {
    out.poolIds.push_back("p" + std::to_string(i));
    out.poolVectors.push_back(rng() % 50 == 0 ? Vector(dim, 0.0) : draw());
  }
  const std::size_t seeds = 1 + rng() % maxSeeds;
  std::set<std::string> used;
  for (std::size_t j = 0; j < seeds; ++j) {
    Vector v = draw();
    while (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }))
      v = draw();
    std::string id = "s" + std::to_string(j);
    if (rng() % 4 == 0) {
      const auto k = rng() % pool;
      if (used.insert(out.poolIds[k]).second) id = out.poolIds[k];
    }
    out.seeds.push_back({id, v});
  }
  out.size = static_cast<int>(rng() % (maxSize + 1));
  return out;
}

// Sorts the whole pool per seed; shares nothing with NNIndex but
// cosineDistance.
inline std::vector<SampleMember> bruteForceNNSample(
    const std::vector<Query>& seeds, const std::vector<std::string>& poolIds,
    const std::vector<Vector>& poolVectors, int size) {
  std::set<std::string> blocked;
  for (const auto& s : seeds) blocked.insert(s.id);
  std::vector<SampleMember> out;
  for (const auto& seed : seeds) {
    std::vector<std::tuple<double, std::string>> order;
    for (std::size_t i = 0; i < poolIds.size(); ++i) {
      const auto& v = poolVectors[i];
      if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }))
        continue;
      order.emplace_back(cosineDistance(seed.vector, v), poolIds[i]);
    }
    std::sort(order.begin(), order.end());
    int rank = 0;
    for (const auto& [d, id] : order) {
      if (rank == size) break;
      if (blocked.count(id)) continue;
      blocked.insert(id);
      out.push_back({id, seed.id, d, ++rank});
    }
  }
  return out;
}

}  // namespace codebridge::testing
