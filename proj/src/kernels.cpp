#include "dsmt/kernels.hpp"

#include <algorithm>
#include <numeric>

#ifdef DSMT_HAVE_OPENMP
#include <omp.h>
#endif

namespace dsmt::kernels {

bool parallel_available() {
#ifdef DSMT_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef DSMT_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

// Truth tables indexed by atom subset; bit 0 is the empty subset.
std::vector<std::uint64_t> next_level(const std::vector<std::uint64_t>& prev,
                                      int k, Execution exec) {
  const int shift = 1 << (k - 1);
  const auto count = static_cast<std::ptrdiff_t>(prev.size());
  std::vector<std::vector<std::uint64_t>> rows(prev.size());

  auto fill_row = [&](std::ptrdiff_t i) {
    const std::uint64_t g = prev[i];
    auto& row = rows[i];
    for (std::uint64_t h : prev) {
      if ((g & ~h) == 0) row.push_back(g | (h << shift));
    }
  };

  if (exec == Execution::parallel) {
#ifdef DSMT_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < count; ++i) fill_row(i);
#else
    for (std::ptrdiff_t i = 0; i < count; ++i) fill_row(i);
#endif
  } else {
    for (std::ptrdiff_t i = 0; i < count; ++i) fill_row(i);
  }

  std::size_t total = 0;
  for (const auto& r : rows) total += r.size();
  std::vector<std::uint64_t> out;
  out.reserve(total);
  for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

}  // namespace

std::vector<std::uint64_t> monotone_masks(int n, Execution exec) {
  // Level 0: the two constant functions on the single empty input.
  std::vector<std::uint64_t> level{0, 1};
  for (int k = 1; k <= n; ++k) level = next_level(level, k, exec);

  std::vector<std::uint64_t> masks;
  masks.reserve(level.size());
  for (std::uint64_t tt : level) {
    if (tt & 1U) continue;  // constant true would put the empty subset inside
    masks.push_back(tt >> 1);
  }
  return masks;
}

double ordered_product(std::span<double> factors) {
  std::sort(factors.begin(), factors.end());
  double p = 1.0;
  for (double f : factors) p *= f;
  return p;
}

double ordered_sum(std::span<double> terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

ProductTable product_table(std::span<const SourceColumn> columns, Execution exec) {
  ProductTable table;
  const std::size_t s = columns.size();
  table.sources = s;
  if (s == 0) return table;

  std::size_t rows = 1;
  for (const auto& c : columns) rows *= c.masks.size();

  table.factors.resize(rows * s);
  table.products.resize(rows);
  table.intersections.resize(rows);
  table.unions.resize(rows);

  auto fill = [&](std::ptrdiff_t r) {
    // Decode the odometer position of row r, last source fastest.
    std::size_t rest = static_cast<std::size_t>(r);
    std::uint32_t* idx = &table.factors[static_cast<std::size_t>(r) * s];
    for (std::size_t i = s; i-- > 0;) {
      const std::size_t len = columns[i].masks.size();
      idx[i] = static_cast<std::uint32_t>(rest % len);
      rest /= len;
    }
    double local[64];
    std::vector<double> spill;
    double* f = local;
    if (s > 64) {
      spill.resize(s);
      f = spill.data();
    }
    std::uint64_t inter = ~std::uint64_t{0};
    std::uint64_t uni = 0;
    for (std::size_t i = 0; i < s; ++i) {
      f[i] = columns[i].masses[idx[i]];
      inter &= columns[i].masks[idx[i]];
      uni |= columns[i].masks[idx[i]];
    }
    table.products[r] = ordered_product(std::span<double>(f, s));
    table.intersections[r] = inter;
    table.unions[r] = uni;
  };

  const auto n = static_cast<std::ptrdiff_t>(rows);
  if (exec == Execution::parallel) {
#ifdef DSMT_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (n > 4096)
    for (std::ptrdiff_t r = 0; r < n; ++r) fill(r);
#else
    for (std::ptrdiff_t r = 0; r < n; ++r) fill(r);
#endif
  } else {
    for (std::ptrdiff_t r = 0; r < n; ++r) fill(r);
  }
  return table;
}

}  // namespace dsmt::kernels
