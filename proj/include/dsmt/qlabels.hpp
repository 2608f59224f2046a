#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "dsmt/lattice.hpp"

namespace dsmt {

using Rational = boost::multiprecision::cpp_rational;

// "1.78", "-0.5", "7/3", "2". Decimals are read exactly.
Rational parse_rational(std::string_view text);
// Exact decimal when the denominator allows it, "p/q" otherwise.
std::string format_rational(const Rational& r);
double to_double(const Rational& r);

// Equidistant labels L_0 < L_1 < ... < L_{m+1}.
class LabelScale {
 public:
  LabelScale() = default;
  explicit LabelScale(int interior);

  int interior() const { return m_; }
  int top() const { return m_ + 1; }
  bool operator==(const LabelScale&) const = default;

 private:
  int m_ = 1;
};

// Refined label L_a with an exact rational index a.
class Label {
 public:
  Label(LabelScale scale, Rational index) : scale_(scale), index_(std::move(index)) {}
  static Label zero(LabelScale scale) { return Label(scale, 0); }
  static Label max(LabelScale scale) { return Label(scale, scale.top()); }
  // "L3", "L1.78", "L7/3" or "L(7/3)".
  static Label parse(std::string_view text, LabelScale scale);

  const LabelScale& scale() const { return scale_; }
  const Rational& index() const { return index_; }
  // The number i/(m+1) the label stands for.
  Rational value() const { return index_ / scale_.top(); }

  // Nearest integer index, halves rounded away from zero. Display only.
  long long rounded_index() const;
  std::string to_string() const;
  // "~L2": the nearest integer label, marked as approximate.
  std::string rounded() const;

  bool operator==(const Label&) const = default;

 private:
  LabelScale scale_;
  Rational index_;
};

Label label_add(const Label& a, const Label& b);
Label label_sub(const Label& a, const Label& b);
Label label_mul(const Label& a, const Label& b);
Label label_div(const Label& a, const Label& b);
Label label_div_scalar(const Label& a, const Rational& r);

inline Label operator+(const Label& a, const Label& b) { return label_add(a, b); }
inline Label operator-(const Label& a, const Label& b) { return label_sub(a, b); }
inline Label operator*(const Label& a, const Label& b) { return label_mul(a, b); }
inline Label operator/(const Label& a, const Label& b) { return label_div(a, b); }

using LabelMap = std::map<VennMask, Rational>;

// Qualitative belief assignment: focal element -> label index. Keys are
// reduced under the source's own model and zero labels are dropped.
class QualMass {
 public:
  QualMass() = default;
  QualMass(Frame frame, Model model, LabelScale scale, const LabelMap& focal);
  // Also requires non-negative indices summing to m+1 and non-empty keys.
  static QualMass checked(Frame frame, Model model, LabelScale scale, const LabelMap& focal);

  const Frame& frame() const { return frame_; }
  const Model& model() const { return model_; }
  const LabelScale& scale() const { return scale_; }
  const LabelMap& focal() const { return focal_; }

  Label label(const VennMask& m) const;
  Label total() const;
  bool normalized() const { return total().index() == scale_.top(); }

 private:
  Frame frame_;
  Model model_;
  LabelScale scale_;
  LabelMap focal_;
};

struct QcrResult {
  // Every intersection, including the ones the model empties, on the free model.
  QualMass joint;
  Label conflict;
};

QcrResult qcr(std::span<const QualMass> sources, const Model& model);
QualMass qdsmc(std::span<const QualMass> sources);
QualMass qdsmh(std::span<const QualMass> sources, const Model& model);
QualMass qpcr5(const QualMass& qm1, const QualMass& qm2, const Model& model);

// Label-valued probability over the model's non-empty cells.
struct QualProbability {
  Frame frame;
  Model model;
  LabelScale scale;
  std::map<VennMask, Rational> cells;

  Label of_cell(const VennMask& cell) const;
  Label of(const VennMask& element) const;
};

QualProbability qdsmp(const QualMass& qm, const Model& model, const Rational& epsilon);

// A label whose index went through floating point (logarithms).
struct ApproximateLabel {
  LabelScale scale;
  double index = 0.0;
  std::string to_string() const;
};

ApproximateLabel qpic(const QualProbability& p);

}  // namespace dsmt
