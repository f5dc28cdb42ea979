#include "codebridge/eval.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace codebridge {

std::size_t ConfusionMatrix::indexOf(Language language) {
  switch (language) {
    case Language::Neutral:
      return 0;
    case Language::En:
      return 1;
    case Language::HE:
      return 2;
    case Language::Other:
      break;
  }
  throw std::invalid_argument("confusion matrix covers neutral, en, h_e only");
}

std::size_t ConfusionMatrix::total() const {
  std::size_t t = 0;
  for (const auto& row : counts)
    for (auto c : row) t += c;
  return t;
}

std::size_t ConfusionMatrix::trace() const {
  return counts[0][0] + counts[1][1] + counts[2][2];
}

double ConfusionMatrix::accuracy() const {
  const auto t = total();
  return t == 0 ? 0.0
                : static_cast<double>(trace()) / static_cast<double>(t);
}

std::size_t ConfusionMatrix::support(Language gold) const {
  const auto& row = counts[indexOf(gold)];
  return row[0] + row[1] + row[2];
}

ConfusionMatrix confusionMatrix(std::span<const Language> gold,
                                std::span<const Language> predicted) {
  if (gold.size() != predicted.size())
    throw std::invalid_argument("gold and predicted lengths differ (" +
                                std::to_string(gold.size()) + " vs " +
                                std::to_string(predicted.size()) + ")");
  if (gold.empty()) throw std::invalid_argument("no labels to compare");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < gold.size(); ++i)
    ++m.counts[ConfusionMatrix::indexOf(gold[i])]
              [ConfusionMatrix::indexOf(predicted[i])];
  return m;
}

void writeConfusionMatrix(std::ostream& out, const ConfusionMatrix& m) {
  out << std::left << std::setw(10) << "true\\pred";
  for (auto l : ConfusionMatrix::kLabels)
    out << std::right << std::setw(10) << toString(l);
  out << '\n';
  for (std::size_t r = 0; r < 3; ++r) {
    out << std::left << std::setw(10) << toString(ConfusionMatrix::kLabels[r]);
    for (std::size_t c = 0; c < 3; ++c)
      out << std::right << std::setw(10) << m.counts[r][c];
    out << '\n';
  }
  out << "accuracy " << std::fixed << std::setprecision(4) << m.accuracy()
      << '\n';
  out.unsetf(std::ios::fixed);
}

UnlabeledMembersError::UnlabeledMembersError(std::vector<std::string> ids)
    : std::runtime_error([&] {
        std::string msg = "unlabelled batch members:";
        for (const auto& id : ids) msg += " " + id;
        return msg;
      }()),
      ids_(std::move(ids)) {}

double samplingYield(const SampleBatch& batch,
                     const std::unordered_map<std::string, bool>& labels) {
  if (batch.empty()) throw std::invalid_argument("batch is empty");
  std::vector<std::string> missing;
  std::size_t positives = 0;
  for (const auto& m : batch.members) {
    const auto it = labels.find(m.poolId);
    if (it == labels.end()) {
      missing.push_back(m.poolId);
      continue;
    }
    positives += it->second ? 1 : 0;
  }
  if (!missing.empty()) throw UnlabeledMembersError(std::move(missing));
  return static_cast<double>(positives) / static_cast<double>(batch.size());
}

KappaResult fleissKappa(const std::vector<std::vector<int>>& ratings) {
  if (ratings.empty()) throw std::invalid_argument("no items to rate");
  const std::size_t categories = ratings[0].size();
  if (categories == 0) throw std::invalid_argument("no categories");
  long raters = -1;
  std::vector<double> categoryTotals(categories, 0.0);
  double agreement = 0.0;
  for (const auto& item : ratings) {
    if (item.size() != categories)
      throw std::invalid_argument("items differ in category count");
    long n = 0;
    double pairs = 0.0;
    for (std::size_t j = 0; j < categories; ++j) {
      if (item[j] < 0) throw std::invalid_argument("negative rating count");
      n += item[j];
      pairs += static_cast<double>(item[j]) * (item[j] - 1);
      categoryTotals[j] += item[j];
    }
    if (raters < 0) raters = n;
    if (n != raters)
      throw std::invalid_argument("items have unequal rater totals (" +
                                  std::to_string(raters) + " vs " +
                                  std::to_string(n) + ")");
    if (n < 2) throw std::invalid_argument("each item needs at least 2 raters");
    agreement += pairs / (static_cast<double>(n) * (n - 1));
  }
  const double items = static_cast<double>(ratings.size());
  const double pBar = agreement / items;
  double pe = 0.0;
  for (double t : categoryTotals) {
    const double p = t / (items * static_cast<double>(raters));
    pe += p * p;
  }
  if (pe >= 1.0) return {1.0, true};
  return {(pBar - pe) / (1.0 - pe), false};
}

std::vector<std::array<double, 2>> project2D(std::span<const Vector> vectors) {
  if (vectors.size() < 2)
    throw std::invalid_argument("project2D needs at least 2 vectors");
  const auto dim = static_cast<Eigen::Index>(vectors[0].size());
  if (dim == 0) throw std::invalid_argument("vectors are empty");
  const auto n = static_cast<Eigen::Index>(vectors.size());
  Eigen::MatrixXd x(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(vectors[i].size()) != dim)
      throw std::invalid_argument("vectors differ in dimension");
    for (Eigen::Index d = 0; d < dim; ++d) x(i, d) = vectors[i][d];
  }
  x.rowwise() -= x.colwise().mean();
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");

  // Eigenvalues come in ascending order.
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(dim, 2);
  for (Eigen::Index c = 0; c < std::min<Eigen::Index>(2, dim); ++c) {
    Eigen::VectorXd v = solver.eigenvectors().col(dim - 1 - c);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    basis.col(c) = v;
  }
  const Eigen::MatrixXd projected = x * basis;
  std::vector<std::array<double, 2>> out(vectors.size());
  for (Eigen::Index i = 0; i < n; ++i)
    out[i] = {projected(i, 0), projected(i, 1)};
  return out;
}

}  // namespace codebridge
