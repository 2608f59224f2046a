#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsmt/errors.hpp"

namespace dsmt {

inline constexpr int kMaxAtoms = 6;
inline constexpr int kMaxHyperAtoms = 6;
inline constexpr int kMaxSuperAtoms = 4;

enum class Execution { serial, parallel };

// Named atoms theta_1..theta_n. The order of the names fixes the bit layout of
// every mask built on the frame.
class Frame {
 public:
  Frame() = default;
  explicit Frame(std::vector<std::string> atoms);
  static Frame numbered(int n, std::string_view prefix = "t");

  int size() const { return static_cast<int>(atoms_.size()); }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const std::string& atom(int i) const { return atoms_.at(i); }
  std::optional<int> index_of(std::string_view name) const;

  bool operator==(const Frame&) const = default;

 private:
  std::vector<std::string> atoms_;
};

// Number of Venn parts of an n-atom diagram, one bit per non-empty atom subset.
constexpr int venn_width(int n) { return (1 << n) - 1; }
constexpr std::uint64_t venn_full_bits(int n) {
  return n >= 6 ? ~std::uint64_t{0} >> 1 : (std::uint64_t{1} << venn_width(n)) - 1;
}

// A set of Venn parts. Bit (S - 1) stands for the part whose atoms are exactly
// the subset S of the frame (S encoded as a bitmask over atom indices).
class VennMask {
 public:
  constexpr VennMask() = default;
  VennMask(int atoms, std::uint64_t bits);

  static VennMask empty(int atoms) { return VennMask(atoms, 0); }
  static VennMask full(int atoms) { return VennMask(atoms, venn_full_bits(atoms)); }
  static VennMask atom(int atoms, int index);
  static VennMask part(int atoms, unsigned subset);
  // All parts containing every atom of `subset`: the free-model mask of the
  // conjunction of those atoms.
  static VennMask conjunction(int atoms, unsigned subset);

  int atoms() const { return atoms_; }
  std::uint64_t bits() const { return bits_; }
  bool is_empty() const { return bits_ == 0; }
  int count() const;
  bool has_part(unsigned subset) const { return (bits_ >> (subset - 1)) & 1U; }
  bool subset_of(const VennMask& other) const;
  // Bitmask of the atoms that appear in at least one part of the mask.
  unsigned support() const;
  std::vector<unsigned> parts() const;

  VennMask operator|(const VennMask& o) const;
  VennMask operator&(const VennMask& o) const;
  VennMask minus(const VennMask& o) const;
  VennMask complement() const;

  bool operator==(const VennMask&) const = default;
  // Canonical order: fewer parts first, then by raw bits.
  std::strong_ordering operator<=>(const VennMask& o) const;

 private:
  void require_same_frame(const VennMask& o) const;

  int atoms_ = 0;
  std::uint64_t bits_ = 0;
};

enum class ModelKind { free, shafer, hybrid };
enum class Semantics { power, hyper, super };

std::string_view to_string(ModelKind kind);
std::string_view to_string(Semantics semantics);
std::optional<ModelKind> parse_model_kind(std::string_view text);
std::optional<Semantics> parse_semantics(std::string_view text);

class Expression;

// A set of integrity constraints, stored as the union of the Venn parts they
// force empty.
class Model {
 public:
  Model() = default;
  static Model free(int atoms);
  static Model shafer(int atoms);
  static Model from_empty_mask(const VennMask& forced_empty);
  static Model with_constraints(const Frame& frame, const Model& base,
                                std::span<const Expression> forced_empty);

  int atoms() const { return empty_.atoms(); }
  ModelKind kind() const { return kind_; }
  const VennMask& empty_mask() const { return empty_; }
  VennMask nonempty_parts() const { return empty_.complement(); }

  VennMask reduce(const VennMask& m) const;
  bool is_empty(const VennMask& m) const { return reduce(m).is_empty(); }
  VennMask total_ignorance() const { return nonempty_parts(); }
  VennMask atom(int index) const { return reduce(VennMask::atom(atoms(), index)); }

  bool operator==(const Model& o) const { return empty_ == o.empty_; }

 private:
  VennMask empty_;
  ModelKind kind_ = ModelKind::free;
};

// Parsed set expression over the atoms of a frame.
class Expression {
 public:
  enum class Op { empty, atom, union_of, intersection_of, complement_of };

  static Expression none();
  static Expression atom(int index);
  static Expression unite(Expression a, Expression b);
  static Expression intersect(Expression a, Expression b);
  static Expression complement(Expression a);

  Op op() const;
  int atom_index() const;
  Expression left() const;
  Expression right() const;
  bool uses_complement() const;

  std::string to_string(const Frame& frame) const;

 private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Grammar: atoms, '&', '|', '!' (or '~'), parentheses; '!' binds tightest,
// then '&', then '|'. "0" and "∅" denote the empty set.
Expression parse_expression(std::string_view text, const Frame& frame);

VennMask to_mask(const Expression& e, const Frame& frame, const Model& model,
                 Semantics semantics = Semantics::hyper);
VennMask to_mask(std::string_view text, const Frame& frame, const Model& model,
                 Semantics semantics = Semantics::hyper);

// Shortest union-of-intersections form of a mask, or a list of Venn parts when
// the mask is outside the hyper-power set of the model.
class CanonicalForm {
 public:
  enum class Kind { dnf, venn_parts };

  CanonicalForm(Kind kind, int atoms, std::vector<unsigned> terms)
      : kind_(kind), atoms_(atoms), terms_(std::move(terms)) {}

  Kind kind() const { return kind_; }
  // Conjunct atom sets for a DNF, part subsets otherwise.
  const std::vector<unsigned>& terms() const { return terms_; }
  // Atoms that occur in some conjunct (DNF only; every part atom otherwise).
  unsigned atoms_used() const;

  std::string render(const Frame& frame) const;
  VennMask to_mask(const Model& model) const;

  bool operator==(const CanonicalForm&) const = default;

 private:
  Kind kind_;
  int atoms_;
  std::vector<unsigned> terms_;
};

CanonicalForm canonical_form(const VennMask& m, const Model& model);
std::string render(const VennMask& m, const Frame& frame, const Model& model);

// Distinct elements of the chosen lattice under the model, empty set included,
// in canonical mask order.
std::vector<VennMask> enumerate_lattice(const Frame& frame, const Model& model,
                                        Semantics semantics,
                                        Execution exec = Execution::parallel);

// Reads a mask built under `own` as its canonical expression and evaluates that
// expression on the free model. The identity when `own` is free.
VennMask lift_to_free(const VennMask& m, const Model& own);
// The same proposition under another model of the frame.
VennMask relabel(const VennMask& m, const Model& own, const Model& target);

int venn_width(const Frame& frame);
int dsm_cardinality(const VennMask& m, const Model& model);

// Set algebra followed by removal of the parts the model forces empty.
VennMask mask_union(const VennMask& a, const VennMask& b, const Model& model);
VennMask mask_intersect(const VennMask& a, const VennMask& b, const Model& model);
VennMask mask_complement(const VennMask& a, const Model& model);

// Compares atom index lists lexicographically: {0} < {0,1} < {0,2} < {1}.
bool atom_set_less(unsigned a, unsigned b);

}  // namespace dsmt
