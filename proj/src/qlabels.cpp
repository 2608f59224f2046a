#include "dsmt/qlabels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <vector>

namespace dsmt {

using boost::multiprecision::cpp_int;

Rational parse_rational(std::string_view text) {
  auto bad = [&](std::size_t pos) -> Rational {
    throw ParseError("ParseError: '" + std::string(text) + "' is not a rational number at column " +
                         std::to_string(pos + 1),
                     1, static_cast<int>(pos) + 1);
  };
  std::size_t i = 0;
  while (i < text.size() && text[i] == ' ') ++i;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) negative = text[i++] == '-';

  cpp_int num = 0;
  cpp_int den = 1;
  std::size_t digits = 0;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i, ++digits) {
    num = num * 10 + (text[i] - '0');
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i, ++digits) {
      num = num * 10 + (text[i] - '0');
      den *= 10;
    }
  }
  if (digits == 0) return bad(i);
  Rational r(num, den);
  if (i < text.size() && text[i] == '/') {
    ++i;
    cpp_int q = 0;
    std::size_t qd = 0;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i, ++qd) {
      q = q * 10 + (text[i] - '0');
    }
    if (qd == 0) return bad(i);
    if (q == 0) fail(ErrorCode::divide_by_zero_label, "zero denominator in '" + std::string(text) + "'");
    r /= Rational(q);
  }
  while (i < text.size() && text[i] == ' ') ++i;
  if (i != text.size()) return bad(i);
  return negative ? Rational(-r) : r;
}

std::string format_rational(const Rational& r) {
  const cpp_int num = boost::multiprecision::numerator(r);
  const cpp_int den = boost::multiprecision::denominator(r);
  cpp_int rest = den;
  int twos = 0;
  int fives = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1) return num.str() + "/" + den.str();

  const int places = std::max(twos, fives);
  cpp_int scale = 1;
  for (int k = 0; k < places; ++k) scale *= 10;
  const cpp_int scaled = num * scale / den;
  const bool negative = scaled < 0;
  std::string digits = (negative ? cpp_int(-scaled) : scaled).str();
  if (places > 0) {
    if (digits.size() <= static_cast<std::size_t>(places)) {
      digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - places, ".");
  }
  return negative ? "-" + digits : digits;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

LabelScale::LabelScale(int interior) : m_(interior) {
  if (interior < 1) fail(ErrorCode::validation_error, "a label scale needs m >= 1");
}

Label Label::parse(std::string_view text, LabelScale scale) {
  std::string_view body = text;
  while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
  while (!body.empty() && body.back() == ' ') body.remove_suffix(1);
  if (body.empty() || (body.front() != 'L' && body.front() != 'l')) {
    throw ParseError("ParseError: label '" + std::string(text) + "' must start with 'L'", 1, 1);
  }
  body.remove_prefix(1);
  if (!body.empty() && body.front() == '_') body.remove_prefix(1);
  if (body.size() >= 2 && body.front() == '(' && body.back() == ')') {
    body = body.substr(1, body.size() - 2);
  } else if (body.size() >= 2 && body.front() == '{' && body.back() == '}') {
    body = body.substr(1, body.size() - 2);
  }
  return Label(scale, parse_rational(body));
}

long long Label::rounded_index() const {
  const cpp_int num = boost::multiprecision::numerator(index_);
  const cpp_int den = boost::multiprecision::denominator(index_);
  const cpp_int mag = num < 0 ? cpp_int(-num) : num;
  const cpp_int r = (2 * mag + den) / (2 * den);
  const long long v = r.convert_to<long long>();
  return num < 0 ? -v : v;
}

std::string Label::to_string() const {
  const std::string s = format_rational(index_);
  return s.find('/') == std::string::npos ? "L" + s : "L(" + s + ")";
}

std::string Label::rounded() const { return "~L" + std::to_string(rounded_index()); }

namespace {

void same_scale(const Label& a, const Label& b) {
  if (!(a.scale() == b.scale())) {
    fail(ErrorCode::scale_mismatch, "labels on scales m=" + std::to_string(a.scale().interior()) +
                                        " and m=" + std::to_string(b.scale().interior()));
  }
}

}  // namespace

Label label_add(const Label& a, const Label& b) {
  same_scale(a, b);
  return Label(a.scale(), a.index() + b.index());
}

Label label_sub(const Label& a, const Label& b) {
  same_scale(a, b);
  return Label(a.scale(), a.index() - b.index());
}

Label label_mul(const Label& a, const Label& b) {
  same_scale(a, b);
  return Label(a.scale(), a.index() * b.index() / a.scale().top());
}

Label label_div(const Label& a, const Label& b) {
  same_scale(a, b);
  if (b.index() == 0) fail(ErrorCode::divide_by_zero_label, a.to_string() + " / L0");
  return Label(a.scale(), a.index() / b.index() * a.scale().top());
}

Label label_div_scalar(const Label& a, const Rational& r) {
  if (r == 0) fail(ErrorCode::divide_by_zero_label, a.to_string() + " / 0");
  return Label(a.scale(), a.index() / r);
}

QualMass::QualMass(Frame frame, Model model, LabelScale scale, const LabelMap& focal)
    : frame_(std::move(frame)), model_(std::move(model)), scale_(scale) {
  if (frame_.size() != model_.atoms()) fail(ErrorCode::frame_mismatch, "frame and model sizes differ");
  for (const auto& [key, index] : focal) {
    if (index == 0) continue;
    focal_[model_.reduce(key)] += index;
  }
  for (auto it = focal_.begin(); it != focal_.end();) {
    it = it->second == 0 ? focal_.erase(it) : std::next(it);
  }
}

QualMass QualMass::checked(Frame frame, Model model, LabelScale scale, const LabelMap& focal) {
  std::vector<std::string> problems;
  for (const auto& [key, index] : focal) {
    if (index < 0) problems.push_back("negative label index");
    if (index != 0 && model.is_empty(key)) {
      problems.push_back("label on an element that is empty under the model");
    }
  }
  QualMass q(std::move(frame), std::move(model), scale, focal);
  if (!q.normalized()) {
    problems.push_back("labels sum to " + q.total().to_string() + ", not L" +
                       std::to_string(scale.top()));
  }
  if (!problems.empty()) {
    std::string msg;
    for (std::size_t i = 0; i < problems.size(); ++i) msg += (i ? "; " : "") + problems[i];
    fail(ErrorCode::validation_error, msg);
  }
  return q;
}

Label QualMass::label(const VennMask& m) const {
  auto it = focal_.find(model_.reduce(m));
  return Label(scale_, it == focal_.end() ? Rational(0) : it->second);
}

Label QualMass::total() const {
  Rational sum = 0;
  for (const auto& [key, index] : focal_) sum += index;
  return Label(scale_, sum);
}

namespace {

void require_qsources(std::span<const QualMass> sources, const Model& model, std::size_t minimum) {
  if (sources.size() < minimum) {
    fail(ErrorCode::fewer_than_two_sources, "got " + std::to_string(sources.size()) + " source(s)");
  }
  for (const auto& s : sources) {
    if (!(s.frame() == sources.front().frame()) || s.frame().size() != model.atoms()) {
      fail(ErrorCode::frame_mismatch, "sources use different frames");
    }
    if (!(s.scale() == sources.front().scale())) {
      fail(ErrorCode::scale_mismatch, "sources use different label scales");
    }
  }
}

struct QTuple {
  std::vector<VennMask> keys;
  std::vector<Label> labels;
  VennMask intersection;
  VennMask union_of;
  Label product;
};

template <class Visit>
void for_each_qtuple(std::span<const QualMass> sources, Visit visit) {
  const std::size_t s = sources.size();
  const int n = sources.front().frame().size();
  const LabelScale scale = sources.front().scale();
  std::vector<std::vector<std::pair<VennMask, Rational>>> cols(s);
  for (std::size_t i = 0; i < s; ++i) {
    for (const auto& [key, index] : sources[i].focal()) {
      cols[i].emplace_back(lift_to_free(key, sources[i].model()), index);
    }
    if (cols[i].empty()) return;
  }
  std::vector<std::size_t> idx(s, 0);
  while (true) {
    QTuple t{{}, {}, VennMask::full(n), VennMask::empty(n), Label::max(scale)};
    for (std::size_t i = 0; i < s; ++i) {
      const auto& [key, index] = cols[i][idx[i]];
      t.keys.push_back(key);
      t.labels.emplace_back(scale, index);
      t.intersection = t.intersection & key;
      t.union_of = t.union_of | key;
      t.product = t.product * t.labels.back();
    }
    visit(t);
    std::size_t i = s;
    while (i > 0) {
      --i;
      if (++idx[i] < cols[i].size()) break;
      idx[i] = 0;
      if (i == 0) return;
    }
  }
}

VennMask atoms_of(const VennMask& focal, const Model& own_model) {
  const unsigned used = canonical_form(focal, own_model).atoms_used();
  VennMask out = VennMask::empty(focal.atoms());
  for (int a = 0; a < focal.atoms(); ++a) {
    if ((used >> a) & 1U) out = out | VennMask::atom(focal.atoms(), a);
  }
  return out;
}

}  // namespace

QcrResult qcr(std::span<const QualMass> sources, const Model& model) {
  require_qsources(sources, model, 1);
  const LabelScale scale = sources.front().scale();
  const Model free_model = Model::free(model.atoms());
  LabelMap joint;
  Rational conflict = 0;
  for_each_qtuple(sources, [&](const QTuple& t) {
    joint[t.intersection] += t.product.index();
    if (model.is_empty(t.intersection)) conflict += t.product.index();
  });
  return {QualMass(sources.front().frame(), free_model, scale, joint), Label(scale, conflict)};
}

QualMass qdsmc(std::span<const QualMass> sources) {
  require_qsources(sources, Model::free(sources.empty() ? 1 : sources.front().frame().size()), 1);
  return qcr(sources, Model::free(sources.front().frame().size())).joint;
}

QualMass qdsmh(std::span<const QualMass> sources, const Model& model) {
  require_qsources(sources, model, 1);
  const int n = model.atoms();
  LabelMap out;
  for_each_qtuple(sources, [&](const QTuple& t) {
    VennMask target = model.reduce(t.intersection);
    if (target.is_empty()) {
      bool all_empty = true;
      for (const auto& k : t.keys) all_empty = all_empty && model.is_empty(k);
      if (all_empty) {
        VennMask u = VennMask::empty(n);
        for (const auto& k : t.keys) u = u | atoms_of(k, Model::free(n));
        target = model.reduce(u);
        if (target.is_empty()) target = model.total_ignorance();
      } else {
        target = model.reduce(t.union_of);
      }
    }
    // phi(target) = L_{m+1} gates the element in; anything routed here is non-empty.
    out[target] += t.product.index();
  });
  return QualMass(sources.front().frame(), model, sources.front().scale(), out);
}

QualMass qpcr5(const QualMass& qm1, const QualMass& qm2, const Model& model) {
  const QualMass pair[] = {qm1, qm2};
  require_qsources(pair, model, 2);
  for (const auto& s : pair) {
    for (const auto& [k, v] : s.focal()) {
      if (model.is_empty(lift_to_free(k, s.model()))) {
        throw NonExistentialInputError(
            "NonExistentialInput: qPCR5 cannot redistribute a label committed to an element that "
            "is empty under the model",
            to_double(v / s.scale().top()), 1.0 - to_double(v / s.scale().top()));
      }
    }
  }
  LabelMap out;
  for_each_qtuple(pair, [&](const QTuple& t) {
    const VennMask inter = model.reduce(t.intersection);
    if (!inter.is_empty()) {
      out[inter] += t.product.index();
      return;
    }
    const Label& x = t.labels[0];
    const Label& y = t.labels[1];
    const Label den = x + y;
    if (den.index() == 0) return;
    out[model.reduce(t.keys[0])] += (x * (t.product / den)).index();
    out[model.reduce(t.keys[1])] += (y * (t.product / den)).index();
  });
  return QualMass(qm1.frame(), model, qm1.scale(), out);
}

Label QualProbability::of_cell(const VennMask& cell) const {
  auto it = cells.find(cell);
  return Label(scale, it == cells.end() ? Rational(0) : it->second);
}

Label QualProbability::of(const VennMask& element) const {
  const VennMask e = model.reduce(element);
  Rational sum = 0;
  for (const auto& [cell, index] : cells) {
    if (cell.subset_of(e)) sum += index;
  }
  return Label(scale, sum);
}

QualProbability qdsmp(const QualMass& qm, const Model& model, const Rational& epsilon) {
  if (qm.frame().size() != model.atoms()) fail(ErrorCode::frame_mismatch, "mass and model differ");
  if (epsilon < 0) fail(ErrorCode::invalid_argument, "epsilon must be non-negative");
  const LabelScale scale = qm.scale();
  const int n = model.atoms();

  std::map<VennMask, Rational> single;
  for (const auto& [key, index] : qm.focal()) {
    const VennMask x = relabel(key, qm.model(), model);
    if (x.count() == 1) single[x] += index;
  }
  auto single_of = [&](const VennMask& cell) {
    auto it = single.find(cell);
    return Label(scale, it == single.end() ? Rational(0) : it->second);
  };
  // epsilon * C enters the label algebra as the label standing for that number.
  auto eps_label = [&](int c) { return Label(scale, epsilon * c * scale.top()); };

  QualProbability p{qm.frame(), model, scale, {}};
  for (unsigned part : model.nonempty_parts().parts()) p.cells[VennMask::part(n, part)] = 0;

  for (const auto& [key, index] : qm.focal()) {
    const VennMask y = relabel(key, qm.model(), model);
    const int c = y.count();
    if (c == 0) fail(ErrorCode::zero_cardinal_focal, "label on an element with DSm cardinal 0");
    Label den = eps_label(c);
    for (unsigned part : y.parts()) den = den + single_of(VennMask::part(n, part));
    if (den.index() == 0) {
      fail(ErrorCode::degenerate_epsilon_zero,
           "no unit-cardinal part of " + render(y, qm.frame(), model) + " carries a label");
    }
    const Label mass(scale, index);
    for (unsigned part : y.parts()) {
      const VennMask z = VennMask::part(n, part);
      const Label share = (single_of(z) + eps_label(1)) / den * mass;
      p.cells[z] += share.index();
    }
  }
  return p;
}

std::string ApproximateLabel::to_string() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "~L%.2f", index);
  return buf;
}

ApproximateLabel qpic(const QualProbability& p) {
  if (p.cells.size() < 2) fail(ErrorCode::single_atom_frame, "PIC needs at least two cells");
  std::vector<double> terms;
  for (const auto& [cell, index] : p.cells) {
    const double v = to_double(index / p.scale.top());
    if (v > 0.0) terms.push_back(-v * std::log2(v));
  }
  std::sort(terms.begin(), terms.end());
  double h = 0.0;
  for (double t : terms) h += t;
  const double value = 1.0 - h / std::log2(static_cast<double>(p.cells.size()));
  return {p.scale, value * p.scale.top()};
}

}  // namespace dsmt
