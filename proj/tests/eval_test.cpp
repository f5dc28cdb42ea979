#include "codebridge/eval.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

namespace codebridge {
namespace {

constexpr Language E = Language::En;
constexpr Language H = Language::HE;
constexpr Language N = Language::Neutral;

// Expands a count matrix (rows gold, columns predicted) into label lists.
void expand(const std::array<std::array<std::size_t, 3>, 3>& counts,
            std::vector<Language>& gold, std::vector<Language>& predicted) {
  for (std::size_t g = 0; g < 3; ++g)
    for (std::size_t p = 0; p < 3; ++p)
      for (std::size_t k = 0; k < counts[g][p]; ++k) {
        gold.push_back(ConfusionMatrix::kLabels[g]);
        predicted.push_back(ConfusionMatrix::kLabels[p]);
      }
}

TEST(Confusion, PublishedTokenCounts) {
  const std::array<std::array<std::size_t, 3>, 3> counts{
      {{702, 325, 144}, {334, 4690, 56}, {85, 148, 3235}}};
  std::vector<Language> gold, predicted;
  expand(counts, gold, predicted);
  const auto m = confusionMatrix(gold, predicted);
  EXPECT_EQ(m.counts, counts);
  EXPECT_EQ(m.total(), 9719u);
  EXPECT_EQ(m.trace(), 8627u);
  EXPECT_NEAR(m.accuracy(), 0.8876, 5e-5);
  EXPECT_EQ(m.support(N), 1171u);
  EXPECT_EQ(m.support(E), 5080u);
  EXPECT_EQ(m.support(H), 3468u);
}

TEST(Confusion, IdentityAndErrors) {
  const std::vector<Language> labels{E, H, N, H};
  EXPECT_EQ(confusionMatrix(labels, labels).accuracy(), 1.0);
  const std::vector<Language> shorter{E};
  EXPECT_THROW(confusionMatrix(labels, shorter), std::invalid_argument);
  EXPECT_THROW(confusionMatrix(std::vector<Language>{}, std::vector<Language>{}),
               std::invalid_argument);
  const std::vector<Language> other{Language::Other};
  EXPECT_THROW(confusionMatrix(other, other), std::invalid_argument);
}

TEST(Confusion, TraceNeverExceedsTotal) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Language> gold(1 + rng() % 50), predicted(gold.size());
    for (std::size_t i = 0; i < gold.size(); ++i) {
      gold[i] = ConfusionMatrix::kLabels[rng() % 3];
      predicted[i] = ConfusionMatrix::kLabels[rng() % 3];
    }
    const auto m = confusionMatrix(gold, predicted);
    EXPECT_EQ(m.total(), gold.size());
    EXPECT_LE(m.trace(), m.total());
    EXPECT_EQ(m.support(N) + m.support(E) + m.support(H), m.total());
  }
}

TEST(Confusion, WriterLayout) {
  const std::vector<Language> gold{E, H};
  const std::vector<Language> predicted{E, E};
  std::ostringstream out;
  writeConfusionMatrix(out, confusionMatrix(gold, predicted));
  EXPECT_NE(out.str().find("h_e"), std::string::npos);
  EXPECT_NE(out.str().find("0.5"), std::string::npos);
}

SampleBatch batchOf(std::size_t n) {
  SampleBatch b;
  for (std::size_t i = 0; i < n; ++i)
    b.members.push_back({"p" + std::to_string(i), "s", 0.0, 1});
  return b;
}

TEST(Yield, PositiveFraction) {
  const auto batch = batchOf(199);
  std::unordered_map<std::string, bool> labels;
  for (std::size_t i = 0; i < 199; ++i) labels["p" + std::to_string(i)] = i < 53;
  EXPECT_NEAR(samplingYield(batch, labels), 0.2663, 5e-5);
}

TEST(Yield, UnlabeledMembersAreListed) {
  const auto batch = batchOf(3);
  const std::unordered_map<std::string, bool> labels{{"p1", true}};
  try {
    samplingYield(batch, labels);
    FAIL();
  } catch (const UnlabeledMembersError& e) {
    EXPECT_EQ(e.ids(), (std::vector<std::string>{"p0", "p2"}));
  }
  EXPECT_THROW(samplingYield(SampleBatch{}, labels), std::invalid_argument);
}

TEST(Kappa, PerfectAndOpposedRaters) {
  EXPECT_EQ(fleissKappa({{2, 0}, {0, 2}, {2, 0}}).kappa, 1.0);
  EXPECT_EQ(fleissKappa({{1, 1}, {1, 1}}).kappa, -1.0);
}

TEST(Kappa, SingleCategoryIsDegenerate) {
  const auto r = fleissKappa({{3, 0}, {3, 0}});
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.kappa, 1.0);
}

TEST(Kappa, TextbookTable) {
  // Ten items, fourteen raters, five categories; value from a direct
  // evaluation of the pair-agreement formula.
  const std::vector<std::vector<int>> t{
      {0, 0, 0, 0, 14}, {0, 2, 6, 4, 2}, {0, 0, 3, 5, 6}, {0, 3, 9, 2, 0},
      {2, 2, 8, 1, 1},  {7, 7, 0, 0, 0}, {3, 2, 6, 3, 0}, {2, 5, 3, 2, 2},
      {6, 5, 2, 1, 0},  {0, 2, 2, 3, 7}};
  EXPECT_NEAR(fleissKappa(t).kappa, 0.20993070442195522, 1e-12);
}

TEST(Kappa, Errors) {
  EXPECT_THROW(fleissKappa({}), std::invalid_argument);
  EXPECT_THROW(fleissKappa({{2, 0}, {1, 0}}), std::invalid_argument);
  EXPECT_THROW(fleissKappa({{1, 0}}), std::invalid_argument);
  EXPECT_THROW(fleissKappa({{3, -1}}), std::invalid_argument);
  EXPECT_THROW(fleissKappa({{2, 0}, {2}}), std::invalid_argument);
}

TEST(Kappa, BoundedAndInvariantUnderCategoryOrder) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const int raters = 2 + static_cast<int>(rng() % 5);
    const std::size_t categories = 2 + rng() % 3;
    std::vector<std::vector<int>> ratings(1 + rng() % 20,
                                          std::vector<int>(categories, 0));
    for (auto& item : ratings)
      for (int r = 0; r < raters; ++r) ++item[rng() % categories];
    const auto k = fleissKappa(ratings);
    EXPECT_LE(k.kappa, 1.0 + 1e-12);
    EXPECT_GE(k.kappa, -1.0 - 1e-12);
    auto reversed = ratings;
    for (auto& item : reversed) std::reverse(item.begin(), item.end());
    EXPECT_NEAR(fleissKappa(reversed).kappa, k.kappa, 1e-12);
  }
}

double dist(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

TEST(Project2D, PlanarDataKeepsDistances) {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> g;
  // Points in a random 2-D plane of R^5.
  const Vector u{1, 2, 0, -1, 0.5};
  const Vector v{0, 1, 3, 1, -2};
  std::vector<Vector> points;
  for (int i = 0; i < 30; ++i) {
    const double a = g(rng), b = g(rng);
    Vector p(5);
    for (int d = 0; d < 5; ++d) p[d] = 7 + a * u[d] + b * v[d];
    points.push_back(p);
  }
  const auto out = project2D(points);
  ASSERT_EQ(out.size(), points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      EXPECT_NEAR(dist(out[i], out[j]), euclideanDistance(points[i], points[j]),
                  1e-9);
}

TEST(Project2D, CollinearMidpointStaysBetween) {
  const std::vector<Vector> points{{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {5, 5, 5}};
  const auto out = project2D(points);
  EXPECT_NEAR(out[1][0], (out[0][0] + out[2][0]) / 2, 1e-12);
  EXPECT_GT(out[3][0], out[2][0]);
  for (const auto& p : out) EXPECT_NEAR(p[1], 0.0, 1e-12);
}

TEST(Project2D, Errors) {
  EXPECT_THROW(project2D(std::vector<Vector>{{1, 2}}), std::invalid_argument);
  EXPECT_THROW(project2D(std::vector<Vector>{{1, 2}, {1}}),
               std::invalid_argument);
}

}  // namespace
}  // namespace codebridge
