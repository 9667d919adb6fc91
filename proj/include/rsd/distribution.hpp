#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "rsd/error.hpp"
#include "rsd/linalg/matrix.hpp"
#include "rsd/rng.hpp"

namespace rsd {

/// Finite distribution over search directions. Immutable once built.
class DirectionDistribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  DirectionDistribution(std::vector<Vector> directions, std::vector<double> probabilities,
                        std::string label = {})
      : directions_(std::move(directions)), probabilities_(std::move(probabilities)),
        label_(std::move(label)) {
    if (directions_.empty()) throw ValidationError("distribution needs at least one direction");
    require_same_size(directions_.size(), probabilities_.size(), "DirectionDistribution");
    const std::size_t n = directions_.front().size();
    double total = 0.0;
    for (std::size_t i = 0; i < directions_.size(); ++i) {
      if (directions_[i].size() != n) throw DimensionError("distribution directions differ in length");
      if (max_abs(directions_[i]) == 0.0) {
        throw ValidationError("distribution direction " + std::to_string(i) + " is zero");
      }
      if (!(probabilities_[i] > 0.0)) {
        throw ValidationError("distribution probability " + std::to_string(i) +
                              " must be positive");
      }
      total += probabilities_[i];
      cumulative_.push_back(total);
    }
    if (!(std::abs(total - 1.0) <= kSumTolerance)) {
      throw ValidationError("distribution probabilities sum to " + std::to_string(total) +
                            ", not 1");
    }
  }

  std::size_t size() const { return directions_.size(); }
  std::size_t dimension() const { return directions_.front().size(); }
  const Vector& direction(std::size_t i) const { return directions_.at(i); }
  double probability(std::size_t i) const { return probabilities_.at(i); }
  const std::vector<Vector>& directions() const { return directions_; }
  const std::vector<double>& probabilities() const { return probabilities_; }
  const std::string& label() const { return label_; }

  /// Inverts the cumulative probabilities at one uniform draw.
  std::size_t sample_index(Rng& rng) const {
    const double u = rng.uniform01() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto idx = static_cast<std::size_t>(it - cumulative_.begin());
    return std::min(idx, directions_.size() - 1);
  }

  const Vector& sample(Rng& rng) const { return directions_[sample_index(rng)]; }

 private:
  std::vector<Vector> directions_;
  std::vector<double> probabilities_;
  std::vector<double> cumulative_;
  std::string label_;
};

}  // namespace rsd
