#pragma once

#include <span>
#include <vector>

#include "dsmt/bba.hpp"
#include "dsmt/kernels.hpp"

namespace dsmt {

inline constexpr double kTotalConflictTolerance = 1e-12;

// Full table of conjunctive products of a set of sources, before any model is
// applied to the intersections.
class ConjunctiveResult {
 public:
  ConjunctiveResult(std::vector<MassFunction> sources, Model model, kernels::ProductTable table);

  const Model& model() const { return model_; }
  const Frame& frame() const { return sources_.front().frame(); }
  const std::vector<MassFunction>& sources() const { return sources_; }
  std::size_t rows() const { return table_.rows(); }

  double product(std::size_t row) const { return table_.products[row]; }
  VennMask intersection(std::size_t row) const;
  VennMask union_of(std::size_t row) const;
  // Focal element of source i used in this row.
  VennMask factor(std::size_t row, std::size_t source) const;
  std::size_t factor_index(std::size_t row, std::size_t source) const {
    return table_.factors[row * table_.sources + source];
  }
  double factor_mass(std::size_t row, std::size_t source) const;

  // Mass of every intersection, keyed by the unreduced mask.
  FocalMap joint() const;
  // Total product whose intersection is empty under the model.
  double conflict() const;

 private:
  std::vector<MassFunction> sources_;
  Model model_;
  kernels::ProductTable table_;
  std::vector<std::vector<VennMask>> keys_;
  std::vector<std::vector<double>> masses_;
};

ConjunctiveResult conjunctive(std::span<const MassFunction> sources, const Model& model,
                              Execution exec = Execution::parallel);

// Classic DSm rule on the free model.
MassFunction dsmc(std::span<const MassFunction> sources, Execution exec = Execution::parallel);
MassFunction dsmh(std::span<const MassFunction> sources, const Model& model,
                  Execution exec = Execution::parallel);

// The binary rules below are folded left to right over longer source lists.
MassFunction dempster(const MassFunction& m1, const MassFunction& m2, const Model& model);
MassFunction smets(const MassFunction& m1, const MassFunction& m2, const Model& model);
MassFunction yager(const MassFunction& m1, const MassFunction& m2, const Model& model);
MassFunction dempster(std::span<const MassFunction> sources, const Model& model);
MassFunction smets(std::span<const MassFunction> sources, const Model& model);
MassFunction yager(std::span<const MassFunction> sources, const Model& model);
MassFunction dubois_prade(const MassFunction& m1, const MassFunction& m2, const Model& model);
MassFunction pcr5(const MassFunction& m1, const MassFunction& m2, const Model& model);
MassFunction pcr6(std::span<const MassFunction> sources, const Model& model,
                  Execution exec = Execution::parallel);

// Atoms named in the canonical form of a focal element under its own model.
VennMask atom_union(const VennMask& focal, const Model& own_model);

}  // namespace dsmt
