#include "codebridge/langid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

namespace codebridge {

namespace {

double squaredDistance(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    s += d * d;
  }
  return s;
}

std::size_t nearest(const std::vector<Vector>& centroids,
                    std::span<const double> v) {
  std::size_t best = 0;
  double bestDist = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squaredDistance(centroids[c], v);
    if (d < bestDist) {
      bestDist = d;
      best = c;
    }
  }
  return best;
}

std::vector<Vector> seedPlusPlus(std::span<const Vector> points, std::size_t k,
                                 std::mt19937_64& rng) {
  std::vector<Vector> centroids;
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  centroids.push_back(points[pick(rng)]);
  std::vector<double> d2(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    d2[i] = squaredDistance(points[i], centroids[0]);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (centroids.size() < k) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t chosen = points.size() - 1;
    const double target = unit(rng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (d2[i] == 0.0) continue;
      acc += d2[i];
      chosen = i;
      if (acc >= target) break;
    }
    centroids.push_back(points[chosen]);
    for (std::size_t i = 0; i < points.size(); ++i)
      d2[i] = std::min(d2[i], squaredDistance(points[i], centroids.back()));
  }
  return centroids;
}

Vector meanOf(const std::vector<Vector>& vs, int dim) {
  Vector m(static_cast<std::size_t>(dim), 0.0);
  for (const auto& v : vs)
    for (std::size_t d = 0; d < m.size(); ++d) m[d] += v[d];
  for (double& x : m) x /= static_cast<double>(vs.size());
  return m;
}

}  // namespace

std::string_view toString(Language language) {
  switch (language) {
    case Language::En:
      return "en";
    case Language::HE:
      return "h_e";
    case Language::Neutral:
      return "neutral";
    case Language::Other:
      return "other";
  }
  return "other";
}

Language parseLanguage(std::string_view text) {
  if (text == "en") return Language::En;
  if (text == "h_e" || text == "he") return Language::HE;
  if (text == "neutral") return Language::Neutral;
  if (text == "other") return Language::Other;
  throw std::invalid_argument("unknown language label '" + std::string(text) +
                              "'");
}

std::size_t ClusterModel::clusterOf(Language language) const {
  for (std::size_t c = 0; c < labels.size(); ++c)
    if (labels[c] == language) return c;
  throw std::logic_error("cluster model has no cluster labelled " +
                         std::string(toString(language)));
}

ClusterFit fitClusters(std::span<const Vector> vectors, std::size_t k,
                       std::uint64_t seed, const KMeansOptions& options) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (vectors.size() < k)
    throw ClusteringError("need at least k=" + std::to_string(k) +
                          " vectors, got " + std::to_string(vectors.size()));
  const std::size_t dim = vectors[0].size();
  if (dim == 0) throw std::invalid_argument("vectors must be non-empty");
  for (const auto& v : vectors)
    if (v.size() != dim)
      throw std::invalid_argument("vectors differ in dimension");
  {
    std::set<Vector> distinct;
    for (const auto& v : vectors) {
      distinct.insert(v);
      if (distinct.size() >= k) break;
    }
    if (distinct.size() < k)
      throw ClusteringError("only " + std::to_string(distinct.size()) +
                            " distinct vectors for k=" + std::to_string(k));
  }

  std::mt19937_64 rng(seed);
  ClusterFit fit;
  auto& centroids = fit.model.centroids;
  centroids = seedPlusPlus(vectors, k, rng);
  fit.assignment.assign(vectors.size(), 0);

  std::vector<Vector> sums(k, Vector(dim));
  std::vector<std::size_t> counts(k);
  for (int iter = 0; iter < options.maxIterations; ++iter) {
    fit.iterations = iter + 1;
    for (std::size_t i = 0; i < vectors.size(); ++i)
      fit.assignment[i] = nearest(centroids, vectors[i]);

    // Re-seed empty clusters at the point farthest from its own centroid.
    std::fill(counts.begin(), counts.end(), 0);
    for (auto a : fit.assignment) ++counts[a];
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = 0;
      double farDist = -1.0;
      for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (counts[fit.assignment[i]] <= 1) continue;
        const double d =
            squaredDistance(vectors[i], centroids[fit.assignment[i]]);
        if (d > farDist) {
          farDist = d;
          far = i;
        }
      }
      --counts[fit.assignment[far]];
      fit.assignment[far] = c;
      counts[c] = 1;
      centroids[c] = vectors[far];
    }

    for (auto& s : sums) std::fill(s.begin(), s.end(), 0.0);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      auto& s = sums[fit.assignment[i]];
      for (std::size_t d = 0; d < dim; ++d) s[d] += vectors[i][d];
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t d = 0; d < dim; ++d)
        sums[c][d] /= static_cast<double>(counts[c]);
      shift = std::max(shift, std::sqrt(squaredDistance(sums[c], centroids[c])));
      centroids[c] = sums[c];
    }
    if (shift < options.tolerance) {
      fit.converged = true;
      break;
    }
  }
  for (std::size_t i = 0; i < vectors.size(); ++i)
    fit.assignment[i] = nearest(centroids, vectors[i]);
  return fit;
}

ClusterModel anchorClusters(ClusterModel model, const AnchorTokens& anchors,
                            const EmbeddingTable& table) {
  if (model.k() < 2) throw std::invalid_argument("model has fewer than 2 clusters");
  if (anchors.en.empty() || anchors.he.empty())
    throw std::invalid_argument("anchor lists must be non-empty");
  if (model.dim() != table.dim())
    throw std::invalid_argument("model and table dimensions differ");

  auto anchorCluster = [&](const std::vector<std::string>& tokens,
                           std::string_view language) {
    std::vector<Vector> found;
    for (const auto& t : tokens)
      if (const double* v = table.find(t)) found.emplace_back(v, v + table.dim());
    if (found.empty())
      throw ClusteringError("no " + std::string(language) +
                            " anchor token is in the vocabulary");
    return nearest(model.centroids, meanOf(found, table.dim()));
  };
  const std::size_t en = anchorCluster(anchors.en, "en");
  const std::size_t he = anchorCluster(anchors.he, "h_e");
  if (en == he)
    throw ClusteringError("clusters not linguistically separated: both "
                          "anchor sets map to cluster " +
                          std::to_string(en));
  model.labels.assign(model.k(), Language::Other);
  model.labels[en] = Language::En;
  model.labels[he] = Language::HE;
  return model;
}

Language assignDocLanguage(const ClusterModel& model,
                           std::span<const double> vector) {
  if (!model.anchored()) throw std::logic_error("cluster model not anchored");
  std::size_t best = model.clusterOf(Language::En);
  double bestDist = squaredDistance(model.centroids[best], vector);
  for (std::size_t c = 0; c < model.k(); ++c) {
    const double d = squaredDistance(model.centroids[c], vector);
    if (d < bestDist) {
      bestDist = d;
      best = c;
    }
  }
  return model.labels[best];
}

double neutralityRatio(const ClusterModel& model,
                       std::span<const double> vector) {
  const auto& en = model.centroids[model.clusterOf(Language::En)];
  const auto& he = model.centroids[model.clusterOf(Language::HE)];
  const double between = euclideanDistance(en, he);
  return std::abs(euclideanDistance(vector, en) -
                  euclideanDistance(vector, he)) /
         between;
}

Language assignVectorLanguage(const ClusterModel& model,
                              const ResolvedVector& vector) {
  if (!model.anchored()) throw std::logic_error("cluster model not anchored");
  if (vector.oov) return Language::Neutral;
  if (neutralityRatio(model, vector.vector) <= model.epsilon)
    return Language::Neutral;
  return assignDocLanguage(model, vector.vector);
}

Language assignTokenLanguage(const ClusterModel& model,
                             const EmbeddingTable& table,
                             std::string_view token) {
  return assignVectorLanguage(model, tokenVector(table, token));
}

TokenLabeling labelComment(const ClusterModel& model,
                           const EmbeddingTable& table,
                           const Comment& comment) {
  TokenLabeling labeling{comment.id, {}};
  labeling.labels.reserve(comment.tokens.size());
  for (const auto& t : comment.tokens)
    labeling.labels.push_back(assignTokenLanguage(model, table, t));
  return labeling;
}

std::vector<std::pair<std::string, std::size_t>> neutralLexicon(
    const ClusterModel& model, const EmbeddingTable& table,
    const Corpus& corpus, std::size_t topN) {
  if (topN == 0) return {};
  std::unordered_map<std::string, std::size_t> freq;
  for (const auto& c : corpus)
    for (const auto& t : c.tokens) ++freq[t];
  std::vector<std::pair<std::string, std::size_t>> neutral;
  for (const auto& [token, count] : freq)
    if (assignTokenLanguage(model, table, token) == Language::Neutral)
      neutral.emplace_back(token, count);
  std::sort(neutral.begin(), neutral.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (neutral.size() > topN) neutral.resize(topN);
  return neutral;
}

void writeClusterModel(std::ostream& out, const ClusterModel& model) {
  out << model.k() << ' ' << model.dim() << ' ' << formatDouble(model.epsilon)
      << '\n';
  for (std::size_t c = 0; c < model.k(); ++c) {
    out << c;
    for (double x : model.centroids[c]) out << ' ' << formatDouble(x);
    out << '\n';
  }
  if (model.anchored())
    for (std::size_t c = 0; c < model.k(); ++c)
      out << "label " << c << ' ' << toString(model.labels[c]) << '\n';
}

ClusterModel readClusterModel(std::istream& in) {
  std::string line;
  std::size_t lineNo = 0;
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineNo;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };
  if (!next()) throw ParseError(1, "missing header");
  std::size_t k = 0;
  int dim = 0;
  ClusterModel model;
  {
    std::istringstream header(line);
    if (!(header >> k >> dim >> model.epsilon) || k < 2 || dim <= 0)
      throw ParseError(lineNo, "header must be 'k dim epsilon'");
  }
  if (!(model.epsilon > 0.0 && model.epsilon < 1.0))
    throw ParseError(lineNo, "epsilon must lie in (0, 1)");
  for (std::size_t c = 0; c < k; ++c) {
    if (!next()) throw ParseError(lineNo, "missing centroid row");
    std::istringstream row(line);
    std::size_t index = 0;
    if (!(row >> index) || index != c)
      throw ParseError(lineNo, "expected centroid " + std::to_string(c));
    Vector v(static_cast<std::size_t>(dim));
    for (auto& x : v)
      if (!(row >> x)) throw ParseError(lineNo, "short centroid row");
    std::string extra;
    if (row >> extra) throw ParseError(lineNo, "long centroid row");
    model.centroids.push_back(std::move(v));
  }
  std::vector<std::optional<Language>> labels(k);
  std::size_t labelled = 0;
  while (next()) {
    std::istringstream row(line);
    std::string keyword, language;
    std::size_t index = 0;
    if (!(row >> keyword >> index >> language) || keyword != "label" ||
        index >= k)
      throw ParseError(lineNo, "expected 'label index language'");
    try {
      if (!labels[index]) ++labelled;
      labels[index] = parseLanguage(language);
    } catch (const std::invalid_argument& e) {
      throw ParseError(lineNo, e.what());
    }
  }
  if (labelled != 0) {
    if (labelled != k) throw ParseError(lineNo, "label map is not total");
    for (auto& l : labels) model.labels.push_back(*l);
  }
  return model;
}

void saveClusterModel(const std::filesystem::path& path,
                      const ClusterModel& model) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  writeClusterModel(out, model);
}

ClusterModel loadClusterModel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return readClusterModel(in);
}

}  // namespace codebridge
