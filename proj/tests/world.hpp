#pragma once

#include "codebridge/classifier.hpp"
#include "codebridge/embedding.hpp"
#include "codebridge/langid.hpp"
#include "codebridge/synthetic.hpp"

namespace codebridge::testing {

// A small trained setup over a synthetic corpus, built once per process.
struct World {
  SyntheticGenerator gen;
  SynthCorpus syn;
  SynthCorpus labeled;
  EmbeddingTable table;
  ClusterModel model;
  LogisticHopeModel hope;
};

const World& world();

}  // namespace codebridge::testing
