#include "dsmt/lattice.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "dsmt/kernels.hpp"

namespace dsmt {

namespace {

bool is_reserved(char c) {
  switch (c) {
    case '&': case '|': case '!': case '~': case '(': case ')':
    case ' ': case '\t': case '\n': case '\r': case ',':
      return true;
    default:
      return false;
  }
}

void require_atoms(int a, int b, const char* where) {
  if (a != b) {
    fail(ErrorCode::frame_mismatch, std::string(where) + ": masks over " +
                                        std::to_string(a) + " and " +
                                        std::to_string(b) + " atoms");
  }
}

}  // namespace

Frame::Frame(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) fail(ErrorCode::validation_error, "a frame needs at least one atom");
  if (size() > kMaxAtoms) {
    fail(ErrorCode::frame_too_large, "frames are limited to " +
                                         std::to_string(kMaxAtoms) + " atoms, got " +
                                         std::to_string(size()));
  }
  std::set<std::string> seen;
  for (const auto& a : atoms_) {
    if (a.empty() || a == "0" || std::any_of(a.begin(), a.end(), is_reserved)) {
      fail(ErrorCode::validation_error, "invalid atom name '" + a + "'");
    }
    if (!seen.insert(a).second) fail(ErrorCode::validation_error, "duplicate atom '" + a + "'");
  }
}

Frame Frame::numbered(int n, std::string_view prefix) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back(std::string(prefix) + std::to_string(i));
  return Frame(std::move(names));
}

std::optional<int> Frame::index_of(std::string_view name) const {
  for (int i = 0; i < size(); ++i) {
    if (atoms_[i] == name) return i;
  }
  return std::nullopt;
}

VennMask::VennMask(int atoms, std::uint64_t bits) : atoms_(atoms), bits_(bits) {
  if (atoms < 0 || atoms > kMaxAtoms) {
    fail(ErrorCode::frame_too_large, "mask over " + std::to_string(atoms) + " atoms");
  }
  bits_ &= venn_full_bits(atoms);
}

VennMask VennMask::atom(int atoms, int index) {
  if (index < 0 || index >= atoms) fail(ErrorCode::unknown_atom, "atom index " + std::to_string(index));
  return conjunction(atoms, 1U << index);
}

VennMask VennMask::part(int atoms, unsigned subset) {
  if (subset == 0 || subset >= (1U << atoms)) {
    fail(ErrorCode::invalid_argument, "part " + std::to_string(subset));
  }
  return VennMask(atoms, std::uint64_t{1} << (subset - 1));
}

VennMask VennMask::conjunction(int atoms, unsigned subset) {
  std::uint64_t bits = 0;
  const unsigned limit = 1U << atoms;
  for (unsigned s = 1; s < limit; ++s) {
    if ((s & subset) == subset) bits |= std::uint64_t{1} << (s - 1);
  }
  return VennMask(atoms, bits);
}

int VennMask::count() const { return std::popcount(bits_); }

bool VennMask::subset_of(const VennMask& other) const {
  require_same_frame(other);
  return (bits_ & ~other.bits_) == 0;
}

unsigned VennMask::support() const {
  unsigned atoms = 0;
  for (std::uint64_t b = bits_; b; b &= b - 1) {
    atoms |= static_cast<unsigned>(std::countr_zero(b)) + 1;
  }
  return atoms;
}

std::vector<unsigned> VennMask::parts() const {
  std::vector<unsigned> out;
  for (std::uint64_t b = bits_; b; b &= b - 1) {
    out.push_back(static_cast<unsigned>(std::countr_zero(b)) + 1);
  }
  return out;
}

VennMask VennMask::operator|(const VennMask& o) const {
  require_same_frame(o);
  return VennMask(atoms_, bits_ | o.bits_);
}

VennMask VennMask::operator&(const VennMask& o) const {
  require_same_frame(o);
  return VennMask(atoms_, bits_ & o.bits_);
}

VennMask VennMask::minus(const VennMask& o) const {
  require_same_frame(o);
  return VennMask(atoms_, bits_ & ~o.bits_);
}

VennMask VennMask::complement() const { return VennMask(atoms_, ~bits_); }

std::strong_ordering VennMask::operator<=>(const VennMask& o) const {
  if (auto c = atoms_ <=> o.atoms_; c != 0) return c;
  if (auto c = count() <=> o.count(); c != 0) return c;
  return bits_ <=> o.bits_;
}

void VennMask::require_same_frame(const VennMask& o) const {
  require_atoms(atoms_, o.atoms_, "mask operation");
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::free: return "free";
    case ModelKind::shafer: return "shafer";
    case ModelKind::hybrid: return "hybrid";
  }
  return "?";
}

std::string_view to_string(Semantics semantics) {
  switch (semantics) {
    case Semantics::power: return "power";
    case Semantics::hyper: return "hyper";
    case Semantics::super: return "super";
  }
  return "?";
}

std::optional<ModelKind> parse_model_kind(std::string_view text) {
  if (text == "free") return ModelKind::free;
  if (text == "shafer") return ModelKind::shafer;
  if (text == "hybrid") return ModelKind::hybrid;
  return std::nullopt;
}

std::optional<Semantics> parse_semantics(std::string_view text) {
  if (text == "power") return Semantics::power;
  if (text == "hyper") return Semantics::hyper;
  if (text == "super") return Semantics::super;
  return std::nullopt;
}

Model Model::free(int atoms) { return from_empty_mask(VennMask::empty(atoms)); }

Model Model::shafer(int atoms) {
  std::uint64_t bits = 0;
  for (unsigned s = 1; s < (1U << atoms); ++s) {
    if (std::popcount(s) >= 2) bits |= std::uint64_t{1} << (s - 1);
  }
  return from_empty_mask(VennMask(atoms, bits));
}

Model Model::from_empty_mask(const VennMask& forced_empty) {
  Model m;
  m.empty_ = forced_empty;
  const int n = forced_empty.atoms();
  std::uint64_t shafer_bits = 0;
  for (unsigned s = 1; s < (1U << n); ++s) {
    if (std::popcount(s) >= 2) shafer_bits |= std::uint64_t{1} << (s - 1);
  }
  if (forced_empty.is_empty()) {
    m.kind_ = ModelKind::free;
  } else if (forced_empty.bits() == shafer_bits) {
    m.kind_ = ModelKind::shafer;
  } else {
    m.kind_ = ModelKind::hybrid;
  }
  return m;
}

Model Model::with_constraints(const Frame& frame, const Model& base,
                              std::span<const Expression> forced_empty) {
  require_atoms(frame.size(), base.atoms(), "model constraints");
  const Model free_model = Model::free(frame.size());
  VennMask empty = base.empty_mask();
  for (const auto& e : forced_empty) {
    empty = empty | dsmt::to_mask(e, frame, free_model, Semantics::super);
  }
  return from_empty_mask(empty);
}

VennMask Model::reduce(const VennMask& m) const {
  require_atoms(m.atoms(), atoms(), "model reduction");
  return m.minus(empty_);
}

bool atom_set_less(unsigned a, unsigned b) {
  while (a != b) {
    if (a == 0) return true;
    if (b == 0) return false;
    const int la = std::countr_zero(a);
    const int lb = std::countr_zero(b);
    if (la != lb) return la < lb;
    a &= a - 1;
    b &= b - 1;
  }
  return false;
}

unsigned CanonicalForm::atoms_used() const {
  unsigned used = 0;
  for (unsigned t : terms_) used |= t;
  return used;
}

std::string CanonicalForm::render(const Frame& frame) const {
  require_atoms(frame.size(), atoms_, "rendering");
  if (terms_.empty()) return "∅";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    std::vector<std::string> literals;
    for (int a = 0; a < atoms_; ++a) {
      const bool in = (terms_[i] >> a) & 1U;
      if (in) {
        literals.push_back(frame.atom(a));
      } else if (kind_ == Kind::venn_parts) {
        literals.push_back("!" + frame.atom(a));
      }
    }
    std::string term;
    for (std::size_t j = 0; j < literals.size(); ++j) {
      if (j) term += "&";
      term += literals[j];
    }
    if (terms_.size() > 1 && literals.size() > 1) term = "(" + term + ")";
    if (i) out += "|";
    out += term;
  }
  return out;
}

VennMask lift_to_free(const VennMask& m, const Model& own) {
  if (own.empty_mask().is_empty()) return m;
  return canonical_form(m, own).to_mask(Model::free(m.atoms()));
}

VennMask relabel(const VennMask& m, const Model& own, const Model& target) {
  if (own == target) return m;
  return target.reduce(lift_to_free(m, own));
}

VennMask CanonicalForm::to_mask(const Model& model) const {
  require_atoms(model.atoms(), atoms_, "canonical form");
  VennMask m = VennMask::empty(atoms_);
  for (unsigned t : terms_) {
    m = m | (kind_ == Kind::dnf ? VennMask::conjunction(atoms_, t)
                                : VennMask::part(atoms_, t));
  }
  return model.reduce(m);
}

namespace {

bool find_cover(const std::vector<std::uint64_t>& covers, std::uint64_t target,
                std::size_t start, int remaining, std::uint64_t acc,
                std::vector<std::size_t>& chosen) {
  if (remaining == 0) return acc == target;
  for (std::size_t i = start; i + remaining <= covers.size(); ++i) {
    chosen.push_back(i);
    if (find_cover(covers, target, i + 1, remaining - 1, acc | covers[i], chosen)) return true;
    chosen.pop_back();
  }
  return false;
}

}  // namespace

CanonicalForm canonical_form(const VennMask& mask, const Model& model) {
  const int n = model.atoms();
  const VennMask m = model.reduce(mask);
  if (m.is_empty()) return CanonicalForm(CanonicalForm::Kind::dnf, n, {});

  const std::uint64_t target = m.bits();
  const std::uint64_t dead = model.empty_mask().bits();

  // Conjuncts whose (model-reduced) extent lies inside the mask.
  std::vector<unsigned> valid;
  std::uint64_t reachable = 0;
  for (unsigned c = 1; c < (1U << n); ++c) {
    const std::uint64_t cover = VennMask::conjunction(n, c).bits() & ~dead;
    if (cover != 0 && (cover & ~target) == 0) {
      valid.push_back(c);
      reachable |= cover;
    }
  }
  if (reachable != target) {
    return CanonicalForm(CanonicalForm::Kind::venn_parts, n, m.parts());
  }

  // Drop conjuncts that have a valid proper subset: the smaller conjunct
  // covers at least as much.
  std::vector<unsigned> primes;
  for (unsigned c : valid) {
    bool dominated = std::any_of(valid.begin(), valid.end(), [c](unsigned d) {
      return d != c && (d & c) == d;
    });
    if (!dominated) primes.push_back(c);
  }
  std::sort(primes.begin(), primes.end(), atom_set_less);

  std::vector<std::uint64_t> covers;
  for (unsigned c : primes) covers.push_back(VennMask::conjunction(n, c).bits() & ~dead);

  std::vector<std::size_t> chosen;
  for (int k = 1; k <= static_cast<int>(primes.size()); ++k) {
    chosen.clear();
    if (find_cover(covers, target, 0, k, 0, chosen)) break;
  }
  std::vector<unsigned> terms;
  for (std::size_t i : chosen) terms.push_back(primes[i]);
  return CanonicalForm(CanonicalForm::Kind::dnf, n, std::move(terms));
}

std::string render(const VennMask& m, const Frame& frame, const Model& model) {
  return canonical_form(m, model).render(frame);
}

std::vector<VennMask> enumerate_lattice(const Frame& frame, const Model& model,
                                        Semantics semantics, Execution exec) {
  const int n = frame.size();
  require_atoms(n, model.atoms(), "lattice enumeration");
  std::vector<std::uint64_t> raw;

  switch (semantics) {
    case Semantics::power: {
      for (unsigned t = 1; t < (1U << n); ++t) {
        std::uint64_t bits = 0;
        for (int a = 0; a < n; ++a) {
          if ((t >> a) & 1U) bits |= VennMask::atom(n, a).bits();
        }
        raw.push_back(bits);
      }
      break;
    }
    case Semantics::hyper: {
      if (n > kMaxHyperAtoms) {
        fail(ErrorCode::frame_too_large, "hyper-power set enumeration supports at most " +
                                             std::to_string(kMaxHyperAtoms) + " atoms");
      }
      raw = kernels::monotone_masks(n, exec);
      break;
    }
    case Semantics::super: {
      if (n > kMaxSuperAtoms) {
        fail(ErrorCode::frame_too_large, "super-power set enumeration supports at most " +
                                             std::to_string(kMaxSuperAtoms) + " atoms");
      }
      const std::vector<unsigned> parts = model.nonempty_parts().parts();
      const std::size_t p = parts.size();
      for (std::uint64_t pick = 1; pick < (std::uint64_t{1} << p); ++pick) {
        std::uint64_t bits = 0;
        for (std::size_t i = 0; i < p; ++i) {
          if ((pick >> i) & 1U) bits |= std::uint64_t{1} << (parts[i] - 1);
        }
        raw.push_back(bits);
      }
      break;
    }
  }

  const std::uint64_t keep = ~model.empty_mask().bits();
  for (auto& b : raw) b &= keep;
  raw.push_back(0);
  std::sort(raw.begin(), raw.end());
  raw.erase(std::unique(raw.begin(), raw.end()), raw.end());

  std::vector<VennMask> out;
  out.reserve(raw.size());
  for (std::uint64_t b : raw) out.emplace_back(n, b);
  std::sort(out.begin(), out.end());
  return out;
}

int venn_width(const Frame& frame) { return venn_width(frame.size()); }

VennMask mask_union(const VennMask& a, const VennMask& b, const Model& model) {
  return model.reduce(a | b);
}

VennMask mask_intersect(const VennMask& a, const VennMask& b, const Model& model) {
  return model.reduce(a & b);
}

VennMask mask_complement(const VennMask& a, const Model& model) {
  return model.reduce(a.complement());
}

int dsm_cardinality(const VennMask& m, const Model& model) {
  return model.reduce(m).count();
}

}  // namespace dsmt
