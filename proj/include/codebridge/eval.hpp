#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "codebridge/embedding.hpp"
#include "codebridge/langid.hpp"
#include "codebridge/sampler.hpp"

namespace codebridge {

// Rows are gold labels, columns predictions, both ordered neutral, en, h_e.
struct ConfusionMatrix {
  static constexpr std::array<Language, 3> kLabels{
      Language::Neutral, Language::En, Language::HE};

  std::array<std::array<std::size_t, 3>, 3> counts{};

  static std::size_t indexOf(Language language);
  std::size_t total() const;
  std::size_t trace() const;
  double accuracy() const;
  std::size_t support(Language gold) const;
};

ConfusionMatrix confusionMatrix(std::span<const Language> gold,
                                std::span<const Language> predicted);

void writeConfusionMatrix(std::ostream& out, const ConfusionMatrix& matrix);

class UnlabeledMembersError : public std::runtime_error {
 public:
  explicit UnlabeledMembersError(std::vector<std::string> ids);
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
};

// Fraction of batch members labelled positive.
double samplingYield(const SampleBatch& batch,
                     const std::unordered_map<std::string, bool>& labels);

struct KappaResult {
  double kappa = 0.0;
  // Chance agreement was 1 (a single category everywhere); kappa is then
  // reported as 1 by convention.
  bool degenerate = false;
};

// Fleiss' kappa; ratings[i][j] = raters assigning item i to category j.
// Every item must have the same rater total, at least 2.
KappaResult fleissKappa(const std::vector<std::vector<int>>& ratings);

// Centered projection onto the top two principal components. Each
// component's sign makes its largest-magnitude loading positive.
std::vector<std::array<double, 2>> project2D(std::span<const Vector> vectors);

}  // namespace codebridge
