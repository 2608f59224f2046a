#include "dsmt/transforms.hpp"

#include <cmath>

#include "dsmt/kernels.hpp"

namespace dsmt {

ProbabilityMap::ProbabilityMap(Frame frame, Model model, std::map<VennMask, double> cells)
    : frame_(std::move(frame)), model_(std::move(model)), cells_(std::move(cells)) {}

double ProbabilityMap::of_cell(const VennMask& cell) const {
  auto it = cells_.find(cell);
  return it == cells_.end() ? 0.0 : it->second;
}

double ProbabilityMap::of(const VennMask& element) const {
  const VennMask e = model_.reduce(element);
  std::vector<double> terms;
  for (const auto& [cell, p] : cells_) {
    if (cell.subset_of(e)) terms.push_back(p);
  }
  return kernels::ordered_sum(terms);
}

double ProbabilityMap::total() const {
  std::vector<double> terms;
  for (const auto& [cell, p] : cells_) terms.push_back(p);
  return kernels::ordered_sum(terms);
}

namespace {

std::vector<VennMask> cells_of(const VennMask& m) {
  std::vector<VennMask> out;
  for (unsigned part : m.parts()) out.push_back(VennMask::part(m.atoms(), part));
  return out;
}

void require_model(const MassFunction& m, const Model& model) {
  if (m.frame().size() != model.atoms()) {
    fail(ErrorCode::frame_mismatch, "mass and model use different frames");
  }
}

}  // namespace

ProbabilityMap betp(const MassFunction& m, const Model& model) {
  require_model(m, model);
  MassAccumulator acc;
  for (const auto& cell : cells_of(model.nonempty_parts())) acc.add(cell, 0.0);
  for (const auto& [key, mass] : m.focal()) {
    const VennMask x = relabel(key, m.model(), model);
    const int c = x.count();
    if (c == 0) {
      fail(ErrorCode::zero_cardinal_focal,
           "m(" + render(key, m.frame(), m.model()) + ") = " + std::to_string(mass) +
               " sits on an element with DSm cardinal 0");
    }
    for (const auto& cell : cells_of(x)) acc.add(cell, mass / c);
  }
  return ProbabilityMap(m.frame(), model, acc.finish());
}

ProbabilityMap dsmp(const MassFunction& m, const Model& model, double epsilon) {
  require_model(m, model);
  if (!(epsilon >= 0.0)) fail(ErrorCode::invalid_argument, "epsilon must be non-negative");

  std::map<VennMask, double> singleton;
  for (const auto& [key, mass] : m.focal()) {
    const VennMask x = relabel(key, m.model(), model);
    if (x.count() == 1) singleton[x] += mass;
  }
  auto single = [&](const VennMask& cell) {
    auto it = singleton.find(cell);
    return it == singleton.end() ? 0.0 : it->second;
  };

  MassAccumulator acc;
  for (const auto& cell : cells_of(model.nonempty_parts())) acc.add(cell, 0.0);
  for (const auto& [key, mass] : m.focal()) {
    const VennMask y = relabel(key, m.model(), model);
    const int c = y.count();
    if (c == 0) {
      fail(ErrorCode::zero_cardinal_focal,
           "m(" + render(key, m.frame(), m.model()) + ") sits on an element with DSm cardinal 0");
    }
    const auto cells = cells_of(y);
    std::vector<double> terms;
    for (const auto& z : cells) terms.push_back(single(z));
    const double den = kernels::ordered_sum(terms) + epsilon * c;
    if (den == 0.0) {
      fail(ErrorCode::degenerate_epsilon_zero,
           "no unit-cardinal part of " + render(y, m.frame(), model) +
               " carries mass; use epsilon > 0");
    }
    for (const auto& z : cells) acc.add(z, mass * (single(z) + epsilon) / den);
  }
  return ProbabilityMap(m.frame(), model, acc.finish());
}

double shannon_entropy(const ProbabilityMap& p) {
  std::vector<double> terms;
  for (const auto& [cell, v] : p.cells()) {
    if (v > 0.0) terms.push_back(-v * std::log2(v));
  }
  return kernels::ordered_sum(terms);
}

double pic(const ProbabilityMap& p) {
  if (p.size() < 2) {
    fail(ErrorCode::single_atom_frame, "PIC needs at least two cells (H_max = 0)");
  }
  return 1.0 - shannon_entropy(p) / std::log2(static_cast<double>(p.size()));
}

}  // namespace dsmt
