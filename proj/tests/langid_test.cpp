#include "codebridge/langid.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "world.hpp"

namespace codebridge {
namespace {

using testing::world;

// en centroid at (0,0), h_e centroid at (2,0).
ClusterModel lineModel() {
  ClusterModel m;
  m.centroids = {{0.0, 0.0}, {2.0, 0.0}};
  m.labels = {Language::En, Language::HE};
  return m;
}

std::vector<Vector> blobs(std::mt19937_64& rng, std::size_t perBlob) {
  std::normal_distribution<double> g(0.0, 0.3);
  std::vector<Vector> points;
  for (std::size_t i = 0; i < perBlob; ++i) {
    points.push_back({-5 + g(rng), g(rng)});
    points.push_back({5 + g(rng), g(rng)});
  }
  return points;
}

TEST(FitClusters, SeparatesTwoBlobs) {
  std::mt19937_64 rng(1);
  const auto points = blobs(rng, 100);
  const auto fit = fitClusters(points, 2, 7);
  EXPECT_TRUE(fit.converged);
  for (std::size_t i = 0; i < points.size(); i += 2) {
    EXPECT_EQ(fit.assignment[i], fit.assignment[0]);
    EXPECT_EQ(fit.assignment[i + 1], fit.assignment[1]);
  }
  EXPECT_NE(fit.assignment[0], fit.assignment[1]);
  for (const auto& c : fit.model.centroids) EXPECT_NEAR(std::abs(c[0]), 5, 0.2);
}

TEST(FitClusters, KEqualsDistinctPoints) {
  const std::vector<Vector> points{{0, 0}, {1, 0}, {0, 1}, {1, 0}};
  const auto fit = fitClusters(points, 3, 1);
  std::set<Vector> centroids(fit.model.centroids.begin(),
                             fit.model.centroids.end());
  EXPECT_EQ(centroids, (std::set<Vector>{{0, 0}, {1, 0}, {0, 1}}));
}

TEST(FitClusters, Errors) {
  const std::vector<Vector> two{{0, 0}, {1, 1}};
  EXPECT_THROW(fitClusters(two, 3, 1), ClusteringError);
  const std::vector<Vector> same{{1, 1}, {1, 1}, {1, 1}};
  EXPECT_THROW(fitClusters(same, 2, 1), ClusteringError);
  EXPECT_THROW(fitClusters(two, 1, 1), std::invalid_argument);
}

TEST(FitClusters, DeterministicAndNeverEmpty) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Vector> points;
    const std::size_t n = 5 + rng() % 60;
    for (std::size_t i = 0; i < n; ++i)
      points.push_back({std::round(g(rng) * 2), std::round(g(rng) * 2)});
    const std::size_t k = 2 + rng() % 4;
    std::set<Vector> distinct(points.begin(), points.end());
    if (distinct.size() < k) {
      EXPECT_THROW(fitClusters(points, k, trial), ClusteringError);
      continue;
    }
    const auto a = fitClusters(points, k, trial);
    const auto b = fitClusters(points, k, trial);
    EXPECT_EQ(a.model.centroids, b.model.centroids);
    std::vector<int> sizes(k, 0);
    for (auto c : a.assignment) ++sizes[c];
    for (int s : sizes) EXPECT_GT(s, 0);
  }
}

TEST(AnchorClusters, MapsSyntheticLanguagesInjectively) {
  const auto& w = world();
  ASSERT_TRUE(w.model.anchored());
  EXPECT_NE(w.model.clusterOf(Language::En), w.model.clusterOf(Language::HE));
}

TEST(AnchorClusters, SwappedAnchorsSwapLabels) {
  const auto& w = world();
  const auto anchors = w.gen.anchors();
  ClusterModel bare = w.model;
  bare.labels.clear();
  const auto swapped = anchorClusters(bare, {anchors.he, anchors.en}, w.table);
  EXPECT_EQ(swapped.clusterOf(Language::En), w.model.clusterOf(Language::HE));
  EXPECT_EQ(swapped.clusterOf(Language::HE), w.model.clusterOf(Language::En));
}

TEST(AnchorClusters, Errors) {
  const auto& w = world();
  ClusterModel bare = w.model;
  bare.labels.clear();
  EXPECT_THROW(anchorClusters(bare, {{"qqqq"}, {"zzzz"}}, w.table),
               ClusteringError);
  const auto anchors = w.gen.anchors();
  EXPECT_THROW(anchorClusters(bare, {anchors.en, anchors.en}, w.table),
               ClusteringError);
  EXPECT_THROW(anchorClusters(bare, {{}, anchors.he}, w.table),
               std::invalid_argument);
}

TEST(AssignDocLanguage, NearestCentroidWithEnglishTies) {
  const auto m = lineModel();
  EXPECT_EQ(assignDocLanguage(m, Vector{0, 0}), Language::En);
  EXPECT_EQ(assignDocLanguage(m, Vector{2, 0}), Language::HE);
  EXPECT_EQ(assignDocLanguage(m, Vector{1, 0}), Language::En);
  EXPECT_EQ(assignDocLanguage(m, Vector{1, 5}), Language::En);
  EXPECT_EQ(assignDocLanguage(m, Vector{1.01, 0}), Language::HE);
}

TEST(AssignToken, NeutralRule) {
  const auto m = lineModel();
  EXPECT_EQ(assignVectorLanguage(m, {{0, 0}, false}), Language::En);
  EXPECT_EQ(assignVectorLanguage(m, {{2, 0}, false}), Language::HE);
  EXPECT_EQ(assignVectorLanguage(m, {{1, 3}, false}), Language::Neutral);
  EXPECT_EQ(assignVectorLanguage(m, {{0, 0}, true}), Language::Neutral);
  EXPECT_DOUBLE_EQ(neutralityRatio(m, Vector{0, 0}), 1.0);
  // |0.875 - 1.125| / 2 equals epsilon exactly: the boundary is inclusive.
  auto boundary = m;
  boundary.epsilon = 0.125;
  EXPECT_EQ(assignVectorLanguage(boundary, {{0.875, 0}, false}),
            Language::Neutral);
  EXPECT_EQ(assignVectorLanguage(boundary, {{0.87, 0}, false}), Language::En);
}

TEST(AssignToken, OovIsNeutral) {
  const auto& w = world();
  EXPECT_EQ(assignTokenLanguage(w.model, w.table, "qqqqzzzz"), Language::Neutral);
}

TEST(LangidProperty, NeutralIffRatioWithinEpsilon) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  auto m = lineModel();
  for (int trial = 0; trial < 2000; ++trial) {
    m.epsilon = std::uniform_real_distribution<double>(0.01, 0.5)(rng);
    const Vector v{1 + 0.5 * g(rng), 2 * g(rng)};
    const bool neutral =
        assignVectorLanguage(m, {v, false}) == Language::Neutral;
    EXPECT_EQ(neutral, neutralityRatio(m, v) <= m.epsilon);
  }
}

TEST(LangidProperty, NeutralSetGrowsWithEpsilon) {
  const auto& w = world();
  const auto& vocab = w.table.tokens();
  auto loose = w.model;
  loose.epsilon = 0.3;
  for (const auto& token : vocab) {
    if (assignTokenLanguage(w.model, w.table, token) == Language::Neutral) {
      EXPECT_EQ(assignTokenLanguage(loose, w.table, token), Language::Neutral)
          << token;
    }
  }
}

TEST(LangidProperty, SwappingLabelsSwapsLanguagesKeepsNeutral) {
  const auto& w = world();
  auto swapped = w.model;
  std::swap(swapped.labels[0], swapped.labels[1]);
  for (std::size_t i = 0; i < 200; ++i) {
    const auto& c = w.syn.corpus[i];
    const auto a = labelComment(w.model, w.table, c).labels;
    const auto b = labelComment(swapped, w.table, c).labels;
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a[j] == Language::Neutral)
        EXPECT_EQ(b[j], Language::Neutral);
      else
        EXPECT_EQ(b[j], a[j] == Language::En ? Language::HE : Language::En);
    }
  }
}

TEST(LabelComment, LengthMatchesTokens) {
  const auto& w = world();
  for (const auto& c : w.syn.corpus)
    ASSERT_EQ(labelComment(w.model, w.table, c).labels.size(), c.tokens.size());
  EXPECT_TRUE(labelComment(w.model, w.table, makeComment("e", "")).labels.empty());
}

TEST(LabelComment, MonolingualEnglishHasNoHindiTokens) {
  const auto& w = world();
  std::size_t english = 0;
  std::size_t correct = 0;
  int checked = 0;
  for (std::size_t i = 0; i < w.syn.corpus.size() && checked < 200; ++i) {
    const auto& t = w.syn.truth[i];
    if (t.mixed || t.majority != Language::En) continue;
    ++checked;
    const auto labels = labelComment(w.model, w.table, w.syn.corpus[i]).labels;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      EXPECT_NE(labels[j], Language::HE) << w.syn.corpus[i].tokens[j];
      if (t.gold[j] != Language::En) continue;
      ++english;
      correct += labels[j] == Language::En;
    }
  }
  EXPECT_EQ(checked, 200);
  EXPECT_GE(static_cast<double>(correct), 0.98 * english);
}

TEST(LabelComment, MostPlantedSharedTokensAreNeutral) {
  const auto& w = world();
  int neutral = 0;
  for (const auto& token : w.gen.neutralTokens())
    neutral += assignTokenLanguage(w.model, w.table, token) == Language::Neutral;
  EXPECT_GE(neutral, 15);
}

TEST(NeutralLexicon, PlantedTokensDominate) {
  const auto& w = world();
  const auto lexicon = neutralLexicon(w.model, w.table, w.syn.corpus, 10);
  ASSERT_EQ(lexicon.size(), 10u);
  const auto& planted = w.gen.neutralTokens();
  int hits = 0;
  for (const auto& [token, count] : lexicon)
    hits += std::count(planted.begin(), planted.end(), token) > 0;
  EXPECT_GE(hits, 9);
  for (std::size_t i = 1; i < lexicon.size(); ++i)
    EXPECT_TRUE(lexicon[i - 1].second > lexicon[i].second ||
                (lexicon[i - 1].second == lexicon[i].second &&
                 lexicon[i - 1].first < lexicon[i].first));
  EXPECT_TRUE(neutralLexicon(w.model, w.table, w.syn.corpus, 0).empty());
}

TEST(NeutralLexicon, SingleNeutralToken) {
  EmbeddingTable table(2);
  table.addEntry("the", std::vector<double>{0, 0});
  table.addEntry("hai", std::vector<double>{2, 0});
  table.addEntry("modi", std::vector<double>{1, 1});
  Corpus corpus("c");
  corpus.add(makeComment("a", "the modi hai modi"));
  corpus.add(makeComment("b", "modi the"));
  const auto lexicon = neutralLexicon(lineModel(), table, corpus, 5);
  ASSERT_EQ(lexicon.size(), 1u);
  EXPECT_EQ(lexicon[0], (std::pair<std::string, std::size_t>{"modi", 3}));
}

TEST(ClusterModelFile, RoundTrip) {
  auto m = lineModel();
  m.epsilon = 0.15;
  std::stringstream buffer;
  writeClusterModel(buffer, m);
  const auto back = readClusterModel(buffer);
  EXPECT_EQ(back.centroids, m.centroids);
  EXPECT_EQ(back.labels, m.labels);
  EXPECT_EQ(back.epsilon, 0.15);
}

TEST(ClusterModelFile, Errors) {
  std::istringstream empty("");
  EXPECT_THROW(readClusterModel(empty), ParseError);
  std::istringstream shortRow("2 2 0.1\n0 1 2\n1 3\n");
  try {
    readClusterModel(shortRow);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream badEpsilon("2 2 1.5\n0 1 2\n1 3 4\n");
  EXPECT_THROW(readClusterModel(badEpsilon), ParseError);
}

}  // namespace
}  // namespace codebridge
