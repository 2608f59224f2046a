#include "dsmt/rules.hpp"

#include <algorithm>
#include <functional>

namespace dsmt {

namespace {

void require_sources(std::span<const MassFunction> sources, const Model& model,
                     std::size_t minimum = 2) {
  if (sources.size() < minimum) {
    fail(ErrorCode::fewer_than_two_sources,
         "got " + std::to_string(sources.size()) + " source(s)");
  }
  const Frame& frame = sources.front().frame();
  for (const auto& s : sources) {
    if (!(s.frame() == frame)) fail(ErrorCode::frame_mismatch, "sources use different frames");
  }
  if (model.atoms() != frame.size()) {
    fail(ErrorCode::frame_mismatch, "model and sources use different frames");
  }
}

VennMask atoms_to_mask(unsigned atoms, int n) {
  std::uint64_t bits = 0;
  for (int a = 0; a < n; ++a) {
    if ((atoms >> a) & 1U) bits |= VennMask::atom(n, a).bits();
  }
  return VennMask(n, bits);
}

using PairRule = std::function<MassFunction(const MassFunction&, const MassFunction&)>;

MassFunction fold(std::span<const MassFunction> sources, const PairRule& rule) {
  MassFunction acc = rule(sources[0], sources[1]);
  for (std::size_t i = 2; i < sources.size(); ++i) acc = rule(acc, sources[i]);
  return acc;
}

}  // namespace

VennMask atom_union(const VennMask& focal, const Model& own_model) {
  return atoms_to_mask(canonical_form(focal, own_model).atoms_used(), focal.atoms());
}

ConjunctiveResult::ConjunctiveResult(std::vector<MassFunction> sources, Model model,
                                     kernels::ProductTable table)
    : sources_(std::move(sources)), model_(std::move(model)), table_(std::move(table)) {
  for (const auto& s : sources_) {
    keys_.emplace_back();
    masses_.emplace_back();
    for (const auto& [k, v] : s.focal()) {
      keys_.back().push_back(lift_to_free(k, s.model()));
      masses_.back().push_back(v);
    }
  }
}

VennMask ConjunctiveResult::intersection(std::size_t row) const {
  return VennMask(frame().size(), table_.intersections[row]);
}

VennMask ConjunctiveResult::union_of(std::size_t row) const {
  return VennMask(frame().size(), table_.unions[row]);
}

VennMask ConjunctiveResult::factor(std::size_t row, std::size_t source) const {
  return keys_[source][table_.factors[row * table_.sources + source]];
}

double ConjunctiveResult::factor_mass(std::size_t row, std::size_t source) const {
  return masses_[source][table_.factors[row * table_.sources + source]];
}

FocalMap ConjunctiveResult::joint() const {
  MassAccumulator acc;
  for (std::size_t r = 0; r < rows(); ++r) acc.add(intersection(r), product(r));
  return acc.finish();
}

double ConjunctiveResult::conflict() const {
  std::vector<double> terms;
  for (std::size_t r = 0; r < rows(); ++r) {
    if (model_.is_empty(intersection(r))) terms.push_back(product(r));
  }
  return kernels::ordered_sum(terms);
}

ConjunctiveResult conjunctive(std::span<const MassFunction> sources, const Model& model,
                              Execution exec) {
  require_sources(sources, model);
  std::vector<kernels::SourceColumn> columns;
  for (const auto& s : sources) {
    kernels::SourceColumn c;
    for (const auto& [k, v] : s.focal()) {
      c.masks.push_back(lift_to_free(k, s.model()).bits());
      c.masses.push_back(v);
    }
    columns.push_back(std::move(c));
  }
  auto table = kernels::product_table(columns, exec);
  return ConjunctiveResult(std::vector<MassFunction>(sources.begin(), sources.end()), model,
                           std::move(table));
}

MassFunction dsmc(std::span<const MassFunction> sources, Execution exec) {
  require_sources(sources, Model::free(sources.empty() ? 0 : sources.front().frame().size()));
  const Model free_model = Model::free(sources.front().frame().size());
  for (const auto& s : sources) {
    if (s.focal().count(VennMask::empty(free_model.atoms()))) {
      fail(ErrorCode::validation_error, "the classic rule takes closed-world sources");
    }
  }
  const auto result = conjunctive(sources, free_model, exec);
  return MassFunction(result.frame(), free_model, result.joint());
}

MassFunction dsmh(std::span<const MassFunction> sources, const Model& model, Execution exec) {
  const auto result = conjunctive(sources, model, exec);
  const int n = model.atoms();
  const std::size_t s = sources.size();

  std::vector<std::vector<VennMask>> spread(s);
  for (std::size_t i = 0; i < s; ++i) {
    for (const auto& [k, v] : sources[i].focal()) {
      spread[i].push_back(atom_union(k, sources[i].model()));
    }
  }

  MassAccumulator acc;
  for (std::size_t r = 0; r < result.rows(); ++r) {
    const VennMask inter = model.reduce(result.intersection(r));
    if (!inter.is_empty()) {
      acc.add(inter, result.product(r));
      continue;
    }
    bool all_empty = true;
    for (std::size_t i = 0; i < s && all_empty; ++i) {
      all_empty = model.is_empty(result.factor(r, i));
    }
    if (all_empty) {
      VennMask u = VennMask::empty(n);
      for (std::size_t i = 0; i < s; ++i) u = u | spread[i][result.factor_index(r, i)];
      const VennMask target = model.reduce(u);
      acc.add(target.is_empty() ? model.total_ignorance() : target, result.product(r));
    } else {
      acc.add(model.reduce(result.union_of(r)), result.product(r));
    }
  }
  return MassFunction(result.frame(), model, acc.finish());
}

namespace {

MassFunction dempster_pair(const MassFunction& a, const MassFunction& b, const Model& model) {
  const MassFunction pair[] = {a, b};
  const auto result = conjunctive(pair, model);
  MassAccumulator acc;
  for (std::size_t r = 0; r < result.rows(); ++r) {
    const VennMask inter = model.reduce(result.intersection(r));
    if (!inter.is_empty()) acc.add(inter, result.product(r));
  }
  const double k = result.conflict();
  const double kept = acc.total();
  if (1.0 - k <= kTotalConflictTolerance || kept <= kTotalConflictTolerance) {
    fail(ErrorCode::total_conflict, "conflict mass " + std::to_string(k));
  }
  FocalMap out = acc.finish();
  for (auto& [key, v] : out) v /= (1.0 - k);
  return MassFunction(a.frame(), model, out);
}

MassFunction smets_pair(const MassFunction& a, const MassFunction& b, const Model& model) {
  const MassFunction pair[] = {a, b};
  const auto result = conjunctive(pair, model);
  MassAccumulator acc;
  for (std::size_t r = 0; r < result.rows(); ++r) {
    acc.add(model.reduce(result.intersection(r)), result.product(r));
  }
  return MassFunction(a.frame(), model, acc.finish(), true);
}

MassFunction yager_pair(const MassFunction& a, const MassFunction& b, const Model& model) {
  const MassFunction pair[] = {a, b};
  const auto result = conjunctive(pair, model);
  MassAccumulator acc;
  for (std::size_t r = 0; r < result.rows(); ++r) {
    const VennMask inter = model.reduce(result.intersection(r));
    acc.add(inter.is_empty() ? model.total_ignorance() : inter, result.product(r));
  }
  return MassFunction(a.frame(), model, acc.finish());
}

}  // namespace

MassFunction dempster(const MassFunction& m1, const MassFunction& m2, const Model& model) {
  const MassFunction pair[] = {m1, m2};
  return dempster(pair, model);
}

MassFunction smets(const MassFunction& m1, const MassFunction& m2, const Model& model) {
  const MassFunction pair[] = {m1, m2};
  return smets(pair, model);
}

MassFunction yager(const MassFunction& m1, const MassFunction& m2, const Model& model) {
  const MassFunction pair[] = {m1, m2};
  return yager(pair, model);
}

MassFunction dempster(std::span<const MassFunction> sources, const Model& model) {
  require_sources(sources, model);
  return fold(sources, [&](const MassFunction& a, const MassFunction& b) {
    return dempster_pair(a, b, model);
  });
}

MassFunction smets(std::span<const MassFunction> sources, const Model& model) {
  require_sources(sources, model);
  return fold(sources, [&](const MassFunction& a, const MassFunction& b) {
    return smets_pair(a, b, model);
  });
}

MassFunction yager(std::span<const MassFunction> sources, const Model& model) {
  require_sources(sources, model);
  return fold(sources, [&](const MassFunction& a, const MassFunction& b) {
    return yager_pair(a, b, model);
  });
}

MassFunction dubois_prade(const MassFunction& m1, const MassFunction& m2, const Model& model) {
  const MassFunction pair[] = {m1, m2};
  const auto result = conjunctive(pair, model);

  bool non_existential = false;
  for (const auto& s : pair) {
    for (const auto& [k, v] : s.focal()) non_existential |= model.is_empty(lift_to_free(k, s.model()));
  }

  MassAccumulator acc;
  std::vector<double> lost;
  for (std::size_t r = 0; r < result.rows(); ++r) {
    const VennMask inter = model.reduce(result.intersection(r));
    const VennMask uni = model.reduce(result.union_of(r));
    if (!inter.is_empty()) {
      acc.add(inter, result.product(r));
    } else if (!uni.is_empty()) {
      acc.add(uni, result.product(r));
    } else {
      lost.push_back(result.product(r));
    }
  }
  if (non_existential) {
    const double lost_mass = kernels::ordered_sum(lost);
    const double kept = acc.total();
    throw NonExistentialInputError(
        "NonExistentialInput: a source commits mass to an element that is empty under the "
        "model; " + std::to_string(lost_mass) + " of the mass would be lost (total " +
            std::to_string(kept) + ")",
        lost_mass, kept);
  }
  return MassFunction(m1.frame(), model, acc.finish());
}

namespace {

void require_existential(std::span<const MassFunction> sources, const Model& model,
                         const char* rule) {
  for (const auto& s : sources) {
    for (const auto& [k, v] : s.focal()) {
      if (model.is_empty(lift_to_free(k, s.model()))) {
        throw NonExistentialInputError(
            std::string("NonExistentialInput: ") + rule +
                " cannot redistribute mass committed to an element that is empty under the model",
            v, 1.0 - v);
      }
    }
  }
}

}  // namespace

MassFunction pcr5(const MassFunction& m1, const MassFunction& m2, const Model& model) {
  const MassFunction pair[] = {m1, m2};
  require_sources(pair, model);
  require_existential(pair, model, "PCR5");
  const auto result = conjunctive(pair, model);

  MassAccumulator acc;
  for (std::size_t r = 0; r < result.rows(); ++r) {
    const VennMask inter = model.reduce(result.intersection(r));
    const double p = result.product(r);
    if (!inter.is_empty()) {
      acc.add(inter, p);
      continue;
    }
    const double x = result.factor_mass(r, 0);
    const double y = result.factor_mass(r, 1);
    const double den = x + y;
    if (den == 0.0) continue;
    acc.add(model.reduce(result.factor(r, 0)), x * p / den);
    acc.add(model.reduce(result.factor(r, 1)), y * p / den);
  }
  return MassFunction(m1.frame(), model, acc.finish());
}

MassFunction pcr6(std::span<const MassFunction> sources, const Model& model, Execution exec) {
  require_sources(sources, model);
  require_existential(sources, model, "PCR6");
  const auto result = conjunctive(sources, model, exec);
  const std::size_t s = sources.size();

  MassAccumulator acc;
  std::vector<double> weights(s);
  for (std::size_t r = 0; r < result.rows(); ++r) {
    const VennMask inter = model.reduce(result.intersection(r));
    const double p = result.product(r);
    if (!inter.is_empty()) {
      acc.add(inter, p);
      continue;
    }
    for (std::size_t i = 0; i < s; ++i) weights[i] = result.factor_mass(r, i);
    std::vector<double> sorted = weights;
    const double den = kernels::ordered_sum(sorted);
    if (den == 0.0) continue;
    for (std::size_t i = 0; i < s; ++i) {
      acc.add(model.reduce(result.factor(r, i)), weights[i] * p / den);
    }
  }
  return MassFunction(sources.front().frame(), model, acc.finish());
}

}  // namespace dsmt
