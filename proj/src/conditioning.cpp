#include "dsmt/conditioning.hpp"

#include "dsmt/rules.hpp"

namespace dsmt {

namespace {

VennMask require_event(const VennMask& a, const Model& model) {
  const VennMask event = model.reduce(a);
  if (event.is_empty()) {
    fail(ErrorCode::empty_conditioning_event, "the conditioning event is empty under the model");
  }
  return event;
}

// Union of the conjunctions over `atoms` that fit inside w; equals w exactly
// when w belongs to the sub-lattice those atoms generate.
bool generated_by(const VennMask& w, unsigned atoms, const Model& model) {
  if (atoms == 0) return false;
  const int n = model.atoms();
  VennMask reach = VennMask::empty(n);
  for (unsigned c = atoms; c; c = (c - 1) & atoms) {
    const VennMask cover = model.reduce(VennMask::conjunction(n, c));
    if (!cover.is_empty() && cover.subset_of(w)) reach = reach | cover;
  }
  return reach == w;
}

// Redistribution plan shared by the numeric and label versions. For each
// outside focal element W: either proportional to the D1 focal elements inside
// W, or whole onto A∩W, or proportional to every D1 focal element.
enum class Tier { inside, largest, everywhere };

struct Plan {
  Tier tier;
  std::vector<VennMask> targets;
};

template <class Mass>
Plan plan_for(const VennMask& w, const VennMask& event, const Model& model,
              const std::map<VennMask, Mass>& d1_focal, bool has_inside_mass) {
  if (has_inside_mass) {
    Plan p{Tier::inside, {}};
    for (const auto& [x, v] : d1_focal) {
      if (x.subset_of(w)) p.targets.push_back(x);
    }
    return p;
  }
  const VennMask largest = model.reduce(w & event);
  if (!largest.is_empty()) return {Tier::largest, {largest}};
  return {Tier::everywhere, {}};
}

}  // namespace

HpsdClass hpsd_class(const VennMask& w, const VennMask& a, const Model& model) {
  const VennMask event = require_event(a, model);
  const VennMask x = model.reduce(w);
  if (x.subset_of(event)) return HpsdClass::d1;
  const unsigned used = canonical_form(event, model).atoms_used();
  const unsigned outside = ((1U << model.atoms()) - 1) & ~used;
  if (generated_by(x, outside, model)) return HpsdClass::d2;
  return HpsdClass::d3;
}

HpsdDecomposition hpsd(const VennMask& a, const Frame& frame, const Model& model) {
  require_event(a, model);
  HpsdDecomposition out;
  for (const auto& w : enumerate_lattice(frame, model, Semantics::hyper)) {
    if (w.is_empty()) continue;
    switch (hpsd_class(w, a, model)) {
      case HpsdClass::d1: out.d1.push_back(w); break;
      case HpsdClass::d2: out.d2.push_back(w); break;
      case HpsdClass::d3: out.d3.push_back(w); break;
    }
  }
  return out;
}

MassFunction scr(const MassFunction& m, const VennMask& a) { return scr(m, a, m.model()); }

MassFunction scr(const MassFunction& m, const VennMask& a, const Model& model) {
  const VennMask event = require_event(a, model);
  std::vector<double> hits;
  for (const auto& [key, v] : m.focal()) {
    if (!(relabel(key, m.model(), model) & event).is_empty()) hits.push_back(v);
  }
  if (kernels::ordered_sum(hits) <= 0.0) {
    fail(ErrorCode::zero_plausibility_conditioning, "Pl(A) = 0");
  }
  const MassFunction focus(m.frame(), model, FocalMap{{event, 1.0}});
  return dempster(m, focus, model);
}

MassFunction bcr17(const MassFunction& m, const VennMask& a, const Model& model) {
  const VennMask event = require_event(a, model);
  if (m.frame().size() != model.atoms()) fail(ErrorCode::frame_mismatch, "mass and model differ");

  std::map<VennMask, double> d1_focal;
  std::map<VennMask, double> outside;
  for (const auto& [key, v] : m.focal()) {
    const VennMask x = relabel(key, m.model(), model);
    if (x.is_empty()) {
      throw NonExistentialInputError(
          "NonExistentialInput: mass on an element that is empty under the model", v, 1.0 - v);
    }
    (x.subset_of(event) ? d1_focal : outside)[x] += v;
  }

  std::vector<double> d1_values;
  for (const auto& [x, v] : d1_focal) d1_values.push_back(v);
  const double d1_total = kernels::ordered_sum(d1_values);
  if (d1_total == 0.0) return MassFunction(m.frame(), model, FocalMap{{event, 1.0}});

  MassAccumulator acc;
  for (const auto& [x, v] : d1_focal) acc.add(x, v);
  for (const auto& [w, mw] : outside) {
    std::vector<double> inside;
    for (const auto& [x, v] : d1_focal) {
      if (x.subset_of(w)) inside.push_back(v);
    }
    const double s = kernels::ordered_sum(inside);
    const Plan plan = plan_for(w, event, model, d1_focal, s > 0.0);
    switch (plan.tier) {
      case Tier::inside:
        for (const auto& x : plan.targets) acc.add(x, d1_focal[x] * mw / s);
        break;
      case Tier::largest:
        for (const auto& x : plan.targets) acc.add(x, mw / static_cast<double>(plan.targets.size()));
        break;
      case Tier::everywhere:
        for (const auto& [x, v] : d1_focal) acc.add(x, v * mw / d1_total);
        break;
    }
  }
  return MassFunction(m.frame(), model, acc.finish());
}

QualMass qbcr17(const QualMass& qm, const VennMask& a, const Model& model) {
  const VennMask event = require_event(a, model);
  if (qm.frame().size() != model.atoms()) fail(ErrorCode::frame_mismatch, "mass and model differ");
  const LabelScale scale = qm.scale();

  std::map<VennMask, Rational> d1_focal;
  std::map<VennMask, Rational> outside;
  for (const auto& [key, v] : qm.focal()) {
    const VennMask x = relabel(key, qm.model(), model);
    if (x.is_empty()) {
      const double share = to_double(v / scale.top());
      throw NonExistentialInputError(
          "NonExistentialInput: label on an element that is empty under the model", share,
          1.0 - share);
    }
    (x.subset_of(event) ? d1_focal : outside)[x] += v;
  }

  Label d1_total = Label::zero(scale);
  for (const auto& [x, v] : d1_focal) d1_total = d1_total + Label(scale, v);
  if (d1_total.index() == 0) return QualMass(qm.frame(), model, scale, LabelMap{{event, scale.top()}});

  LabelMap out;
  for (const auto& [x, v] : d1_focal) out[x] += v;
  for (const auto& [w, iw] : outside) {
    const Label mw(scale, iw);
    Label s = Label::zero(scale);
    for (const auto& [x, v] : d1_focal) {
      if (x.subset_of(w)) s = s + Label(scale, v);
    }
    const Plan plan = plan_for(w, event, model, d1_focal, s.index() != 0);
    switch (plan.tier) {
      case Tier::inside:
        for (const auto& x : plan.targets) {
          out[x] += (Label(scale, d1_focal[x]) * mw / s).index();
        }
        break;
      case Tier::largest:
        for (const auto& x : plan.targets) {
          out[x] += label_div_scalar(mw, static_cast<long>(plan.targets.size())).index();
        }
        break;
      case Tier::everywhere:
        for (const auto& [x, v] : d1_focal) out[x] += (Label(scale, v) * mw / d1_total).index();
        break;
    }
  }
  return QualMass(qm.frame(), model, scale, out);
}

}  // namespace dsmt
