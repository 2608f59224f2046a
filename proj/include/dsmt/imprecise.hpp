#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsmt/lattice.hpp"

namespace dsmt {

inline constexpr double kEndpointTolerance = 1e-12;

// One interval with independently open or closed ends. A point is [x,x].
struct Piece {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  bool is_point() const { return lo == hi && lo_closed && hi_closed; }
  // With tol > 0, closed ends accept values within tol and open ends reject them.
  bool contains(double x, double tol = 0.0) const;
  bool operator==(const Piece&) const = default;
};

// A finite union of intervals and points, kept sorted and merged. Values are
// not clamped: intermediate results of set arithmetic may leave [0,1].
class SubunitSet {
 public:
  SubunitSet() = default;
  explicit SubunitSet(std::vector<Piece> pieces);

  static SubunitSet point(double x);
  static SubunitSet interval(double lo, double hi, bool lo_closed = true, bool hi_closed = true);
  // Accepts "[0.1,0.2] u {0.3}", "(0.4,0.6) ∪ [0.7,0.8]", "{0.15,0.18}", "0.3".
  static SubunitSet parse(std::string_view text);

  const std::vector<Piece>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  bool is_point() const { return pieces_.size() == 1 && pieces_.front().is_point(); }
  double point_value() const;
  bool contains(double x, double tol = 0.0) const;
  double infimum() const;
  double supremum() const;
  bool within_unit() const;

  // decimals < 0 prints the shortest round-trip form of every endpoint.
  std::string to_string(int decimals = -1) const;

  bool operator==(const SubunitSet&) const = default;
  // Piece-list order, used to fix the order of operands in sums and products.
  bool operator<(const SubunitSet& o) const;

 private:
  std::vector<Piece> pieces_;
};

// Fixed decimals with trailing zeros trimmed to two places; whole numbers print
// without a fraction. decimals < 0 gives the shortest exact form.
std::string format_endpoint(double v, int decimals);

SubunitSet set_union(const SubunitSet& a, const SubunitSet& b);
SubunitSet set_add(const SubunitSet& a, const SubunitSet& b);
SubunitSet set_sub(const SubunitSet& a, const SubunitSet& b);
SubunitSet set_mul(const SubunitSet& a, const SubunitSet& b);
SubunitSet set_div(const SubunitSet& a, const SubunitSet& b);

using ImpreciseFocalMap = std::map<VennMask, SubunitSet>;

class ImpreciseMass {
 public:
  ImpreciseMass() = default;
  ImpreciseMass(Frame frame, Model model, const ImpreciseFocalMap& focal);

  const Frame& frame() const { return frame_; }
  const Model& model() const { return model_; }
  const ImpreciseFocalMap& focal() const { return focal_; }
  // Elements whose set reaches outside [0,1]. Nothing is clipped.
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

  SubunitSet mass(const VennMask& m) const;

 private:
  Frame frame_;
  Model model_;
  ImpreciseFocalMap focal_;
  std::vector<std::string> diagnostics_;
};

// Sum over focal sets, each operand list in piece-list order.
SubunitSet total_mass(const ImpreciseMass& m);
bool is_admissible(const ImpreciseMass& m);

ImpreciseMass imprecise_dsmc(std::span<const ImpreciseMass> sources);
ImpreciseMass imprecise_dsmh(std::span<const ImpreciseMass> sources, const Model& model);

}  // namespace dsmt
