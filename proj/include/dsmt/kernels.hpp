#pragma once

// Data-parallel kernels behind the lattice enumeration and the conjunctive
// product table. Each kernel has a serial reference and an OpenMP variant that
// writes the same values into the same slots.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dsmt/lattice.hpp"

namespace dsmt::kernels {

bool parallel_available();
int max_threads();

// Non-empty upsets of the free hyper-power set on n atoms, as Venn masks.
// Built from the recursion M(k) = { g | h << 2^(k-1) : g subset of h }.
std::vector<std::uint64_t> monotone_masks(int n, Execution exec);

struct SourceColumn {
  std::vector<std::uint64_t> masks;
  std::vector<double> masses;
};

// One row per tuple of focal elements. Row r picks focal index
// factors[r * sources + i] from source i; tuples run in odometer order with the
// last source varying fastest.
struct ProductTable {
  std::size_t sources = 0;
  std::vector<std::uint32_t> factors;
  std::vector<double> products;
  std::vector<std::uint64_t> intersections;
  std::vector<std::uint64_t> unions;

  std::size_t rows() const { return products.size(); }
};

// The factors of each product are multiplied in ascending order so that the
// value of a row does not depend on the order of the sources.
ProductTable product_table(std::span<const SourceColumn> columns, Execution exec);

double ordered_product(std::span<double> factors);
double ordered_sum(std::span<double> terms);

}  // namespace dsmt::kernels
