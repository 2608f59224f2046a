#include "dsmt/imprecise.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <tuple>

#include "dsmt/rules.hpp"

namespace dsmt {

bool Piece::contains(double x, double tol) const {
  const bool above = lo_closed ? x >= lo - tol : x > lo + tol;
  const bool below = hi_closed ? x <= hi + tol : x < hi - tol;
  return above && below;
}

namespace {

bool near(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= kEndpointTolerance;
}

std::vector<Piece> normalize(std::vector<Piece> in) {
  std::vector<Piece> kept;
  for (Piece p : in) {
    if (std::isnan(p.lo) || std::isnan(p.hi)) continue;
    if (near(p.lo, p.hi) && std::isfinite(p.lo)) {
      if (!(p.lo_closed && p.hi_closed)) continue;
      p.hi = p.lo;
    } else if (p.lo > p.hi) {
      continue;
    }
    if (p.lo == 0.0) p.lo = 0.0;  // drop the sign of -0
    if (p.hi == 0.0) p.hi = 0.0;
    kept.push_back(p);
  }
  std::sort(kept.begin(), kept.end(), [](const Piece& a, const Piece& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.lo_closed && !b.lo_closed;
  });

  std::vector<Piece> out;
  for (const Piece& p : kept) {
    if (out.empty()) {
      out.push_back(p);
      continue;
    }
    Piece& cur = out.back();
    bool joins;
    if (near(p.lo, cur.hi)) {
      joins = cur.hi_closed || p.lo_closed;
    } else {
      joins = p.lo < cur.hi;
    }
    if (!joins) {
      out.push_back(p);
      continue;
    }
    if (near(p.lo, cur.lo)) cur.lo_closed = cur.lo_closed || p.lo_closed;
    if (near(p.hi, cur.hi)) {
      cur.hi_closed = cur.hi_closed || p.hi_closed;
    } else if (p.hi > cur.hi) {
      cur.hi = p.hi;
      cur.hi_closed = p.hi_closed;
    }
  }
  return out;
}

struct Candidate {
  double value;
  bool closed;
};

// Extremes of a monotone-per-argument operation sit on the corners of the
// operand box; an extreme is attained when a corner attaining it is closed.
Piece from_corners(const Candidate (&c)[4], bool zero_attained) {
  Piece out;
  out.lo = c[0].value;
  out.hi = c[0].value;
  for (const auto& k : c) {
    out.lo = std::min(out.lo, k.value);
    out.hi = std::max(out.hi, k.value);
  }
  out.lo_closed = false;
  out.hi_closed = false;
  for (const auto& k : c) {
    if (k.value == out.lo && k.closed) out.lo_closed = true;
    if (k.value == out.hi && k.closed) out.hi_closed = true;
  }
  if (zero_attained) {
    if (out.lo == 0.0) out.lo_closed = true;
    if (out.hi == 0.0) out.hi_closed = true;
  }
  return out;
}

double times(double x, double y) {
  if (x == 0.0 || y == 0.0) return 0.0;
  return x * y;
}

double over(double x, double y) {
  if (x == 0.0) return 0.0;
  return x / y;  // y may be a signed zero standing for an open end
}

Piece piece_mul(const Piece& a, const Piece& b) {
  const Candidate c[4] = {
      {times(a.lo, b.lo), a.lo_closed && b.lo_closed},
      {times(a.lo, b.hi), a.lo_closed && b.hi_closed},
      {times(a.hi, b.lo), a.hi_closed && b.lo_closed},
      {times(a.hi, b.hi), a.hi_closed && b.hi_closed},
  };
  return from_corners(c, a.contains(0.0) || b.contains(0.0));
}

Piece piece_div(const Piece& a, const Piece& b) {
  // An open end at zero is approached from inside the divisor.
  const double blo = b.lo == 0.0 ? +0.0 : b.lo;
  const double bhi = b.hi == 0.0 ? -0.0 : b.hi;
  const Candidate c[4] = {
      {over(a.lo, blo), a.lo_closed && b.lo_closed},
      {over(a.lo, bhi), a.lo_closed && b.hi_closed},
      {over(a.hi, blo), a.hi_closed && b.lo_closed},
      {over(a.hi, bhi), a.hi_closed && b.hi_closed},
  };
  return from_corners(c, a.contains(0.0));
}

template <class Op>
SubunitSet combine(const SubunitSet& a, const SubunitSet& b, Op op) {
  std::vector<Piece> out;
  out.reserve(a.pieces().size() * b.pieces().size());
  for (const auto& p : a.pieces()) {
    for (const auto& q : b.pieces()) out.push_back(op(p, q));
  }
  return SubunitSet(std::move(out));
}

}  // namespace

SubunitSet::SubunitSet(std::vector<Piece> pieces) : pieces_(normalize(std::move(pieces))) {}

SubunitSet SubunitSet::point(double x) { return SubunitSet({Piece{x, x, true, true}}); }

SubunitSet SubunitSet::interval(double lo, double hi, bool lo_closed, bool hi_closed) {
  return SubunitSet({Piece{lo, hi, lo_closed, hi_closed}});
}

double SubunitSet::point_value() const {
  if (!is_point()) fail(ErrorCode::invalid_argument, "set " + to_string() + " is not a point");
  return pieces_.front().lo;
}

bool SubunitSet::contains(double x, double tol) const {
  return std::any_of(pieces_.begin(), pieces_.end(),
                     [&](const Piece& p) { return p.contains(x, tol); });
}

double SubunitSet::infimum() const {
  return pieces_.empty() ? std::numeric_limits<double>::quiet_NaN() : pieces_.front().lo;
}

double SubunitSet::supremum() const {
  return pieces_.empty() ? std::numeric_limits<double>::quiet_NaN() : pieces_.back().hi;
}

bool SubunitSet::within_unit() const {
  return !pieces_.empty() && infimum() >= -kEndpointTolerance &&
         supremum() <= 1.0 + kEndpointTolerance;
}

bool SubunitSet::operator<(const SubunitSet& o) const {
  return std::lexicographical_compare(
      pieces_.begin(), pieces_.end(), o.pieces_.begin(), o.pieces_.end(),
      [](const Piece& a, const Piece& b) {
        return std::tie(a.lo, a.hi, b.lo_closed, a.hi_closed) <
               std::tie(b.lo, b.hi, a.lo_closed, b.hi_closed);
      });
}

std::string format_endpoint(double v, int decimals) {
  if (v == 0.0) v = 0.0;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (decimals < 0) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  if (s == "-0" || s.find_first_not_of("-0.") == std::string::npos) return "0";
  const auto dot = s.find('.');
  if (dot == std::string::npos) return s;
  std::size_t keep = s.size();
  while (keep > dot + 3 && s[keep - 1] == '0') --keep;
  s.resize(keep);
  if (s.compare(dot, std::string::npos, ".00") == 0) s.resize(dot);
  return s;
}

std::string SubunitSet::to_string(int decimals) const {
  if (pieces_.empty()) return "∅";
  std::string out;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    if (i) out += " u ";
    if (p.is_point()) {
      // Runs of points share one brace: {0.5,0.6}.
      out += "{" + format_endpoint(p.lo, decimals);
      while (i + 1 < pieces_.size() && pieces_[i + 1].is_point()) {
        out += "," + format_endpoint(pieces_[++i].lo, decimals);
      }
      out += "}";
    } else {
      out += p.lo_closed ? "[" : "(";
      out += format_endpoint(p.lo, decimals) + "," + format_endpoint(p.hi, decimals);
      out += p.hi_closed ? "]" : ")";
    }
  }
  return out;
}

namespace {

class SetParser {
 public:
  explicit SetParser(std::string_view s) : s_(s) {}

  SubunitSet parse() {
    std::vector<Piece> pieces;
    skip();
    if (done()) error("empty set expression");
    item(pieces);
    while (true) {
      skip();
      if (done()) break;
      if (eat("u") || eat("U") || eat("∪")) {
        item(pieces);
      } else {
        error("expected 'u' between pieces");
      }
    }
    return SubunitSet(std::move(pieces));
  }

 private:
  void item(std::vector<Piece>& out) {
    skip();
    if (done()) error("missing piece");
    const char c = s_[pos_];
    if (c == '[' || c == '(') {
      ++pos_;
      const double lo = number();
      expect(',');
      const double hi = number();
      skip();
      if (done() || (s_[pos_] != ']' && s_[pos_] != ')')) error("expected ']' or ')'");
      const bool hi_closed = s_[pos_++] == ']';
      if (lo > hi) error("interval bounds out of order");
      out.push_back({lo, hi, c == '[', hi_closed});
    } else if (c == '{') {
      ++pos_;
      do {
        const double x = number();
        out.push_back({x, x, true, true});
        skip();
      } while (!done() && s_[pos_] == ',' && ++pos_);
      expect('}');
    } else {
      const double x = number();
      out.push_back({x, x, true, true});
    }
  }

  double number() {
    skip();
    const char* begin = s_.data() + pos_;
    double v = 0.0;
    auto res = std::from_chars(begin, s_.data() + s_.size(), v);
    if (res.ec != std::errc()) error("expected a number");
    pos_ += static_cast<std::size_t>(res.ptr - begin);
    return v;
  }

  void expect(char c) {
    skip();
    if (done() || s_[pos_] != c) error(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool eat(std::string_view word) {
    if (s_.substr(pos_, word.size()) == word) {
      pos_ += word.size();
      return true;
    }
    return false;
  }

  void skip() {
    while (!done() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool done() const { return pos_ >= s_.size(); }

  [[noreturn]] void error(const std::string& msg) const {
    const int col = static_cast<int>(pos_) + 1;
    throw ParseError("ParseError: " + msg + " in set '" + std::string(s_) + "' at column " +
                         std::to_string(col),
                     1, col);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

SubunitSet SubunitSet::parse(std::string_view text) { return SetParser(text).parse(); }

SubunitSet set_union(const SubunitSet& a, const SubunitSet& b) {
  std::vector<Piece> all = a.pieces();
  all.insert(all.end(), b.pieces().begin(), b.pieces().end());
  return SubunitSet(std::move(all));
}

SubunitSet set_add(const SubunitSet& a, const SubunitSet& b) {
  return combine(a, b, [](const Piece& p, const Piece& q) {
    return Piece{p.lo + q.lo, p.hi + q.hi, p.lo_closed && q.lo_closed, p.hi_closed && q.hi_closed};
  });
}

SubunitSet set_sub(const SubunitSet& a, const SubunitSet& b) {
  return combine(a, b, [](const Piece& p, const Piece& q) {
    return Piece{p.lo - q.hi, p.hi - q.lo, p.lo_closed && q.hi_closed, p.hi_closed && q.lo_closed};
  });
}

SubunitSet set_mul(const SubunitSet& a, const SubunitSet& b) { return combine(a, b, piece_mul); }

SubunitSet set_div(const SubunitSet& a, const SubunitSet& b) {
  if (b.contains(0.0)) {
    fail(ErrorCode::divisor_contains_zero, "divisor " + b.to_string() + " contains 0");
  }
  return combine(a, b, piece_div);
}

namespace {

SubunitSet ordered_fold(std::vector<SubunitSet> sets,
                        SubunitSet (*op)(const SubunitSet&, const SubunitSet&)) {
  std::sort(sets.begin(), sets.end());
  SubunitSet acc = sets.front();
  for (std::size_t i = 1; i < sets.size(); ++i) acc = op(acc, sets[i]);
  return acc;
}

}  // namespace

ImpreciseMass::ImpreciseMass(Frame frame, Model model, const ImpreciseFocalMap& focal)
    : frame_(std::move(frame)), model_(std::move(model)) {
  if (frame_.size() != model_.atoms()) {
    fail(ErrorCode::frame_mismatch, "frame and model sizes differ");
  }
  std::map<VennMask, std::vector<SubunitSet>> grouped;
  for (const auto& [key, set] : focal) {
    if (set.empty()) fail(ErrorCode::validation_error, "empty mass set");
    if (set == SubunitSet::point(0.0)) continue;
    grouped[model_.reduce(key)].push_back(set);
  }
  for (auto& [key, sets] : grouped) {
    focal_[key] = ordered_fold(std::move(sets), set_add);
    if (!focal_[key].within_unit()) {
      diagnostics_.push_back("m(" + render(key, frame_, model_) + ") = " + focal_[key].to_string() +
                             " leaves [0,1]");
    }
  }
}

SubunitSet ImpreciseMass::mass(const VennMask& m) const {
  auto it = focal_.find(model_.reduce(m));
  return it == focal_.end() ? SubunitSet::point(0.0) : it->second;
}

SubunitSet total_mass(const ImpreciseMass& m) {
  std::vector<SubunitSet> sets;
  for (const auto& [key, set] : m.focal()) sets.push_back(set);
  if (sets.empty()) return SubunitSet::point(0.0);
  return ordered_fold(std::move(sets), set_add);
}

bool is_admissible(const ImpreciseMass& m) {
  return total_mass(m).contains(1.0, kEndpointTolerance);
}

namespace {

struct Tuple {
  std::vector<VennMask> keys;
  std::vector<SubunitSet> sets;
};

template <class Visit>
void for_each_tuple(std::span<const ImpreciseMass> sources, Visit visit) {
  const std::size_t s = sources.size();
  std::vector<std::vector<std::pair<VennMask, SubunitSet>>> cols(s);
  for (std::size_t i = 0; i < s; ++i) {
    for (const auto& [key, set] : sources[i].focal()) {
      cols[i].emplace_back(lift_to_free(key, sources[i].model()), set);
    }
    if (cols[i].empty()) return;
  }
  std::vector<std::size_t> idx(s, 0);
  Tuple t{std::vector<VennMask>(s), std::vector<SubunitSet>(s)};
  while (true) {
    for (std::size_t i = 0; i < s; ++i) {
      t.keys[i] = cols[i][idx[i]].first;
      t.sets[i] = cols[i][idx[i]].second;
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

void require_imprecise_sources(std::span<const ImpreciseMass> sources, const Model& model) {
  if (sources.size() < 2) {
    fail(ErrorCode::fewer_than_two_sources, "got " + std::to_string(sources.size()) + " source(s)");
  }
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (!(sources[i].frame() == sources.front().frame()) ||
        sources[i].frame().size() != model.atoms()) {
      fail(ErrorCode::frame_mismatch, "sources use different frames");
    }
    if (!is_admissible(sources[i])) {
      fail(ErrorCode::inadmissible_source,
           "source " + std::to_string(i + 1) + " admits no selection summing to 1 (total " +
               total_mass(sources[i]).to_string() + ")");
    }
  }
}

ImpreciseMass finish(const Frame& frame, const Model& model,
                     std::map<VennMask, std::vector<SubunitSet>>& groups) {
  ImpreciseFocalMap out;
  for (auto& [key, sets] : groups) out[key] = ordered_fold(std::move(sets), set_add);
  return ImpreciseMass(frame, model, out);
}

}  // namespace

ImpreciseMass imprecise_dsmc(std::span<const ImpreciseMass> sources) {
  const int n = sources.empty() ? 0 : sources.front().frame().size();
  const Model free_model = Model::free(n);
  require_imprecise_sources(sources, free_model);
  std::map<VennMask, std::vector<SubunitSet>> groups;
  for_each_tuple(sources, [&](const Tuple& t) {
    VennMask inter = VennMask::full(n);
    for (const auto& k : t.keys) inter = inter & k;
    groups[inter].push_back(ordered_fold(t.sets, set_mul));
  });
  return finish(sources.front().frame(), free_model, groups);
}

ImpreciseMass imprecise_dsmh(std::span<const ImpreciseMass> sources, const Model& model) {
  require_imprecise_sources(sources, model);
  const int n = model.atoms();
  std::map<VennMask, std::vector<SubunitSet>> groups;
  for_each_tuple(sources, [&](const Tuple& t) {
    VennMask inter = VennMask::full(n);
    VennMask uni = VennMask::empty(n);
    bool all_empty = true;
    for (const auto& k : t.keys) {
      inter = inter & k;
      uni = uni | k;
      all_empty = all_empty && model.is_empty(k);
    }
    VennMask target = model.reduce(inter);
    if (target.is_empty()) {
      if (all_empty) {
        VennMask u = VennMask::empty(n);
        for (const auto& k : t.keys) u = u | atom_union(k, Model::free(n));
        target = model.reduce(u);
        if (target.is_empty()) target = model.total_ignorance();
      } else {
        target = model.reduce(uni);
      }
    }
    groups[target].push_back(ordered_fold(t.sets, set_mul));
  });
  return finish(sources.front().frame(), model, groups);
}

}  // namespace dsmt
