#include "dsmt/bba.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dsmt/kernels.hpp"

namespace dsmt {

std::string ValidationReport::summary() const {
  std::string out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out += "; ";
    out += violations[i];
  }
  return out;
}

namespace {

void require_frame(const Frame& frame, const Model& model) {
  if (frame.size() != model.atoms()) {
    fail(ErrorCode::frame_mismatch, "frame has " + std::to_string(frame.size()) +
                                        " atoms, model has " + std::to_string(model.atoms()));
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

MassFunction::MassFunction(Frame frame, Model model, const FocalMap& masses, bool open_world)
    : frame_(std::move(frame)), model_(std::move(model)), open_world_(open_world) {
  require_frame(frame_, model_);
  MassAccumulator acc;
  for (const auto& [key, value] : masses) {
    if (key.atoms() != frame_.size()) {
      fail(ErrorCode::frame_mismatch, "focal element over " + std::to_string(key.atoms()) +
                                          " atoms on a " + std::to_string(frame_.size()) +
                                          "-atom frame");
    }
    if (value == 0.0) continue;
    acc.add(model_.reduce(key), value);
  }
  focal_ = acc.finish();
}

MassFunction MassFunction::checked(Frame frame, Model model, const FocalMap& masses,
                                   bool open_world) {
  const ValidationReport report = validate(frame, model, masses, open_world);
  if (!report.ok()) fail(ErrorCode::validation_error, report.summary());

  MassFunction m(std::move(frame), std::move(model), masses, open_world);
  const double total = m.total();
  if (std::abs(total - 1.0) > kMassTolerance) {
    for (auto& [key, value] : m.focal_) value /= total;
    m.rescaled_ = true;
  }
  return m;
}

double MassFunction::mass(const VennMask& m) const {
  auto it = focal_.find(model_.reduce(m));
  return it == focal_.end() ? 0.0 : it->second;
}

double MassFunction::total() const {
  std::vector<double> values;
  for (const auto& [key, value] : focal_) values.push_back(value);
  return kernels::ordered_sum(values);
}

MassFunction MassFunction::under(const Model& model) const {
  FocalMap relabelled;
  for (const auto& [key, value] : focal_) relabelled[relabel(key, model_, model)] += value;
  return MassFunction(frame_, model, relabelled, open_world_);
}

ValidationReport validate(const Frame& frame, const Model& model, const FocalMap& masses,
                          bool open_world) {
  ValidationReport report;
  if (frame.size() != model.atoms()) {
    report.violations.push_back("frame and model sizes differ");
    return report;
  }
  std::vector<double> values;
  for (const auto& [key, value] : masses) {
    const std::string name = key.atoms() == frame.size() ? render(key, frame, Model::free(frame.size()))
                                                          : "<mask>";
    if (key.atoms() != frame.size()) {
      report.violations.push_back("focal element on a different frame");
      continue;
    }
    if (!std::isfinite(value)) {
      report.violations.push_back("m(" + name + ") is not finite");
      continue;
    }
    if (value < 0.0 || value > 1.0 + kMassTolerance) {
      report.violations.push_back("m(" + name + ") = " + fmt(value) + " is outside [0,1]");
    }
    if (value != 0.0 && model.is_empty(key) && !open_world) {
      report.violations.push_back("m(" + name + ") = " + fmt(value) +
                                  " but the element is empty under the model");
    }
    values.push_back(value);
  }
  const double total = kernels::ordered_sum(values);
  if (std::abs(total - 1.0) > kRescaleTolerance) {
    report.violations.push_back("masses sum to " + fmt(total) + ", not 1");
  }
  return report;
}

ValidationReport validate(const MassFunction& m) {
  ValidationReport report = validate(m.frame(), m.model(), m.focal(), m.open_world());
  if (std::abs(m.total() - 1.0) > kMassTolerance && report.ok()) {
    report.violations.push_back("masses sum to " + fmt(m.total()) + ", not 1");
  }
  return report;
}

double belief(const MassFunction& m, const VennMask& a) {
  const VennMask target = m.model().reduce(a);
  std::vector<double> terms;
  for (const auto& [key, value] : m.focal()) {
    if (!key.is_empty() && key.subset_of(target)) terms.push_back(value);
  }
  return kernels::ordered_sum(terms);
}

double plausibility(const MassFunction& m, const VennMask& a) {
  const VennMask target = m.model().reduce(a);
  std::vector<double> terms;
  for (const auto& [key, value] : m.focal()) {
    if (!(key & target).is_empty()) terms.push_back(value);
  }
  return kernels::ordered_sum(terms);
}

MassFunction vacuous(const Frame& frame, const Model& model) {
  return MassFunction(frame, model, FocalMap{{model.total_ignorance(), 1.0}});
}

FocalMap MassAccumulator::finish() const {
  FocalMap out;
  for (const auto& [key, values] : parts_) {
    std::vector<double> v = values;
    out[key] = kernels::ordered_sum(v);
  }
  return out;
}

double MassAccumulator::total() const {
  std::vector<double> v;
  for (const auto& [key, values] : parts_) v.insert(v.end(), values.begin(), values.end());
  return kernels::ordered_sum(v);
}

}  // namespace dsmt
