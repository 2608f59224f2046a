#pragma once

#include <vector>

#include "dsmt/bba.hpp"
#include "dsmt/qlabels.hpp"

namespace dsmt {

enum class HpsdClass { d1, d2, d3 };

// D1: non-empty elements inside A. D2: elements of the sub-lattice generated
// by the atoms that do not occur in A. D3: everything else.
struct HpsdDecomposition {
  std::vector<VennMask> d1;
  std::vector<VennMask> d2;
  std::vector<VennMask> d3;
};

HpsdClass hpsd_class(const VennMask& w, const VennMask& a, const Model& model);
HpsdDecomposition hpsd(const VennMask& a, const Frame& frame, const Model& model);

// Dempster combination with the categorical assignment on A.
MassFunction scr(const MassFunction& m, const VennMask& a);
MassFunction scr(const MassFunction& m, const VennMask& a, const Model& model);

MassFunction bcr17(const MassFunction& m, const VennMask& a, const Model& model);
QualMass qbcr17(const QualMass& qm, const VennMask& a, const Model& model);

}  // namespace dsmt
