#pragma once

#include <cmath>
#include <string>

#include "dsmt/bba.hpp"
#include "dsmt/imprecise.hpp"
#include "dsmt/qlabels.hpp"
#include "oracles.hpp"

namespace support {

using namespace dsmt;

inline VennMask mask(const Frame& f, const Model& m, const std::string& expr) {
  return to_mask(expr, f, m);
}

inline MassFunction bba(const Frame& f, const Model& m,
                        std::initializer_list<std::pair<const char*, double>> masses) {
  FocalMap focal;
  for (const auto& [e, v] : masses) focal[mask(f, m, e)] += v;
  return MassFunction::checked(f, m, focal);
}

inline QualMass qbba(const Frame& f, const Model& m, int scale,
                     std::initializer_list<std::pair<const char*, const char*>> labels) {
  LabelMap focal;
  for (const auto& [e, l] : labels) focal[mask(f, m, e)] += Label::parse(l, LabelScale(scale)).index();
  return QualMass::checked(f, m, LabelScale(scale), focal);
}

inline double mass_of(const MassFunction& m, const std::string& expr) {
  return m.mass(mask(m.frame(), m.model(), expr));
}

inline MassFunction from_oracle(const Frame& f, const Model& model, const oracle::Focal<double>& o) {
  FocalMap focal;
  for (const auto& [b, v] : o) focal[VennMask(f.size(), b)] += v;
  return MassFunction(f, model, focal);
}

inline oracle::Focal<double> to_oracle(const MassFunction& m) {
  oracle::Focal<double> out;
  for (const auto& [k, v] : m.focal()) out[k.bits()] = v;
  return out;
}

// Largest absolute difference, missing keys counting as zero.
template <class T>
double max_gap(const oracle::Focal<T>& a, const oracle::Focal<T>& b) {
  double gap = 0.0;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    gap = std::max(gap, std::abs(static_cast<double>(v - (it == b.end() ? T(0) : it->second))));
  }
  for (const auto& [k, v] : b) {
    if (!a.count(k)) gap = std::max(gap, std::abs(static_cast<double>(v)));
  }
  return gap;
}

// Non-empty elements of the hyper-power set under `dead`, as free-model upsets.
inline std::vector<oracle::Bits> free_pool(int n, oracle::Bits dead) {
  oracle::Lifter lift(n, dead);
  std::vector<oracle::Bits> pool;
  for (oracle::Bits b : oracle::closure(n, dead, Semantics::hyper)) {
    if (b) pool.push_back(lift(b));
  }
  return pool;
}

inline oracle::Focal<double> random_focal(std::mt19937_64& rng, const std::vector<oracle::Bits>& pool,
                                          std::size_t max_focal) {
  std::uniform_int_distribution<std::size_t> k(1, max_focal);
  const auto keys = oracle::pick(rng, pool, k(rng));
  const auto w = oracle::random_simplex(rng, keys.size());
  oracle::Focal<double> out;
  for (std::size_t i = 0; i < keys.size(); ++i) out[keys[i]] = w[i];
  return out;
}

inline oracle::Focal<Rational> random_qfocal(std::mt19937_64& rng, const std::vector<oracle::Bits>& pool,
                                             std::size_t max_focal, int scale) {
  std::uniform_int_distribution<std::size_t> k(1, max_focal);
  const auto keys = oracle::pick(rng, pool, k(rng));
  const auto idx = oracle::random_composition(rng, scale + 1, keys.size());
  oracle::Focal<Rational> out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (idx[i]) out[keys[i]] = Rational(idx[i]);
  }
  if (out.empty()) out[keys.front()] = Rational(scale + 1);
  return out;
}

inline QualMass from_qoracle(const Frame& f, const Model& model, int scale,
                             const oracle::Focal<Rational>& o) {
  LabelMap focal;
  for (const auto& [b, v] : o) focal[VennMask(f.size(), b)] += v;
  return QualMass(f, model, LabelScale(scale), focal);
}

inline oracle::Focal<Rational> to_qoracle(const QualMass& q) {
  oracle::Focal<Rational> out;
  for (const auto& [k, v] : q.focal()) out[k.bits()] = v;
  return out;
}

// Label indices to numbers in [0,1] and back, L_i <-> i/(m+1).
inline oracle::Focal<Rational> to_numbers(const oracle::Focal<Rational>& q, int scale) {
  oracle::Focal<Rational> out;
  for (const auto& [k, v] : q) out[k] = v / (scale + 1);
  return out;
}

inline oracle::Focal<Rational> to_indices(const oracle::Focal<Rational>& p, int scale) {
  oracle::Focal<Rational> out;
  for (const auto& [k, v] : p) {
    if (v != 0) out[k] = v * (scale + 1);
  }
  return out;
}

// Values guaranteed to lie in the set: closed endpoints exactly, open ones
// nudged inwards, and the midpoint of every interval.
inline std::vector<double> representatives(const SubunitSet& s) {
  std::vector<double> out;
  for (const Piece& p : s.pieces()) {
    if (p.is_point()) {
      out.push_back(p.lo);
      continue;
    }
    const double nudge = 1e-7 * (p.hi - p.lo);
    out.push_back(p.lo_closed ? p.lo : p.lo + nudge);
    out.push_back(p.hi_closed ? p.hi : p.hi - nudge);
    out.push_back(0.5 * (p.lo + p.hi));
  }
  return out;
}

// A uniform draw from a randomly chosen piece, resampled when it lands on an
// excluded endpoint.
inline double sample(std::mt19937_64& rng, const SubunitSet& s) {
  const auto& pieces = s.pieces();
  std::uniform_int_distribution<std::size_t> which(0, pieces.size() - 1);
  const Piece& p = pieces[which(rng)];
  if (p.is_point()) return p.lo;
  std::uniform_real_distribution<double> u(p.lo, p.hi);
  while (true) {
    const double x = u(rng);
    if (p.contains(x)) return x;
  }
}

// One to three pieces inside [lo, hi], each an interval with random ends or a
// point.
inline SubunitSet random_set(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_real_distribution<double> u(lo, hi);
  std::bernoulli_distribution coin(0.5), point(0.25);
  std::vector<Piece> pieces;
  for (int i = count(rng); i > 0; --i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    if (point(rng) || a == b) {
      pieces.push_back({a, a, true, true});
    } else {
      pieces.push_back({a, b, coin(rng), coin(rng)});
    }
  }
  return SubunitSet(pieces);
}

}  // namespace support
