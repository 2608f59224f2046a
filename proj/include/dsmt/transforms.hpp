#pragma once

#include <map>
#include <string>

#include "dsmt/bba.hpp"

namespace dsmt {

inline constexpr double kDefaultEpsilon = 0.001;

// Probability over the model's non-empty Venn cells. Under Shafer's model the
// cells are the atoms themselves.
class ProbabilityMap {
 public:
  ProbabilityMap(Frame frame, Model model, std::map<VennMask, double> cells);

  const Frame& frame() const { return frame_; }
  const Model& model() const { return model_; }
  const std::map<VennMask, double>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }

  double of_cell(const VennMask& cell) const;
  // P(A) as the sum over the cells of A.
  double of(const VennMask& element) const;
  double total() const;

 private:
  Frame frame_;
  Model model_;
  std::map<VennMask, double> cells_;
};

ProbabilityMap betp(const MassFunction& m, const Model& model);
ProbabilityMap dsmp(const MassFunction& m, const Model& model, double epsilon = kDefaultEpsilon);

double shannon_entropy(const ProbabilityMap& p);
double pic(const ProbabilityMap& p);

}  // namespace dsmt
