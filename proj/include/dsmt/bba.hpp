#pragma once

#include <map>
#include <string>
#include <vector>

#include "dsmt/lattice.hpp"

namespace dsmt {

inline constexpr double kMassTolerance = 1e-9;
inline constexpr double kRescaleTolerance = 1e-6;

using FocalMap = std::map<VennMask, double>;

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

// A generalized basic belief assignment. Keys are stored reduced under the
// source's own model; zero masses are dropped.
//
// An open-world assignment (the output of Smets' rule) may carry mass on the
// empty set. Every other assignment must not.
class MassFunction {
 public:
  MassFunction() = default;
  MassFunction(Frame frame, Model model, const FocalMap& masses, bool open_world = false);

  // Validates and throws ValidationError on failure. A total within
  // kRescaleTolerance of 1 is rescaled and flagged.
  static MassFunction checked(Frame frame, Model model, const FocalMap& masses,
                              bool open_world = false);

  const Frame& frame() const { return frame_; }
  const Model& model() const { return model_; }
  const FocalMap& focal() const { return focal_; }
  bool open_world() const { return open_world_; }
  bool rescaled() const { return rescaled_; }

  double mass(const VennMask& m) const;
  double total() const;
  std::size_t size() const { return focal_.size(); }

  // Same masses relabelled under another model on the same frame. Keys that
  // collapse onto each other are merged.
  MassFunction under(const Model& model) const;

 private:
  Frame frame_;
  Model model_;
  FocalMap focal_;
  bool open_world_ = false;
  bool rescaled_ = false;
};

ValidationReport validate(const MassFunction& m);
ValidationReport validate(const Frame& frame, const Model& model, const FocalMap& masses,
                          bool open_world = false);

double belief(const MassFunction& m, const VennMask& a);
double plausibility(const MassFunction& m, const VennMask& a);

// Vacuous assignment: all mass on the total ignorance of the model.
MassFunction vacuous(const Frame& frame, const Model& model);

// Sums the contributions of each key in ascending order, which makes the
// result independent of the order in which they were added.
class MassAccumulator {
 public:
  void add(const VennMask& key, double value) { parts_[key].push_back(value); }
  FocalMap finish() const;
  double total() const;

 private:
  std::map<VennMask, std::vector<double>> parts_;
};

}  // namespace dsmt
