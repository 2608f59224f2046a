#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"

#include "dsmt/transforms.hpp"

using namespace dsmt;
using doctest::Approx;
using support::bba;
using support::mask;

namespace {

struct ThreeAtomsHybrid {
  Frame f{{"A", "B", "C"}};
  Model model = Model::with_constraints(
      f, Model::free(3), std::vector<Expression>{parse_expression("A&C", f), parse_expression("B&C", f)});
  MassFunction m = bba(f, model,
                       {{"A&B", 0.2}, {"A", 0.1}, {"C", 0.2}, {"A|B", 0.3}, {"A|C", 0.1}, {"A|B|C", 0.1}});
  // A', B', C' and D' = A&B.
  VennMask a = VennMask::part(3, 0b001), b = VennMask::part(3, 0b010), c = VennMask::part(3, 0b100),
           d = VennMask::part(3, 0b011);
};

std::vector<double> values(const ProbabilityMap& p) {
  std::vector<double> out;
  for (const auto& [k, v] : p.cells()) out.push_back(v);
  return out;
}

}  // namespace

TEST_CASE("pignistic probability on two exclusive atoms") {
  const Frame f({"A", "B"});
  const Model shafer = Model::shafer(2);
  const MassFunction m = bba(f, shafer, {{"A", 0.4}, {"A|B", 0.6}});
  const ProbabilityMap p = betp(m, shafer);
  CHECK(p.of(mask(f, shafer, "A")) == Approx(0.7));
  CHECK(p.of(mask(f, shafer, "B")) == Approx(0.3));
  CHECK(p.of(mask(f, shafer, "A|B")) == Approx(1.0));
  CHECK(pic(p) == Approx(0.1187).epsilon(1e-3));
  CHECK(shannon_entropy(p) == Approx(0.8813).epsilon(1e-4));

  const ProbabilityMap q = dsmp(m, shafer, 0.001);
  CHECK(q.of(mask(f, shafer, "A")) == Approx(0.9985).epsilon(1e-4));
  CHECK(q.of(mask(f, shafer, "B")) == Approx(0.0015).epsilon(1e-4));
  CHECK(pic(q) == Approx(0.9838).epsilon(1e-3));

  const ProbabilityMap z = dsmp(m, shafer, 0.0);
  CHECK(z.of(mask(f, shafer, "A")) == 1.0);
  CHECK(z.of(mask(f, shafer, "B")) == 0.0);
  CHECK(pic(z) == Approx(1.0));
}

TEST_CASE("transforms on the hybrid model") {
  ThreeAtomsHybrid t;
  const ProbabilityMap p = betp(t.m, t.model);
  CHECK(p.size() == 4);
  CHECK(p.of_cell(t.d) == Approx(0.4083).epsilon(1e-4));
  CHECK(p.of_cell(t.a) == Approx(0.2084).epsilon(1e-4));
  CHECK(p.of_cell(t.b) == Approx(0.1250).epsilon(1e-4));
  CHECK(p.of_cell(t.c) == Approx(0.2583).epsilon(1e-4));
  CHECK(pic(p) == Approx(0.0607).epsilon(1e-3));

  const ProbabilityMap q = dsmp(t.m, t.model, 0.001);
  CHECK(q.of_cell(t.a) == Approx(0.0025).epsilon(1e-4));
  CHECK(q.of_cell(t.b) == Approx(0.0017).epsilon(1e-4));
  CHECK(q.of_cell(t.c) == Approx(0.2996).epsilon(1e-4));
  CHECK(q.of_cell(t.d) == Approx(0.6962).epsilon(1e-4));
  CHECK(pic(q) == Approx(0.5390).epsilon(1e-3));

  CHECK(pic(q) >= pic(dsmp(t.m, t.model, 1.0)));
}

TEST_CASE("transforms on the free model") {
  const Frame f({"A", "B", "C"});
  const Model free3 = Model::free(3);
  const MassFunction m = bba(f, free3, {{"A&B&C", 0.1}, {"A&B", 0.2}, {"A", 0.3}, {"A|B", 0.1}, {"A|B|C", 0.3}});
  const ProbabilityMap p = betp(m, free3);
  CHECK(p.size() == 7);
  CHECK(pic(p) == Approx(0.1176).epsilon(1e-3));
  const ProbabilityMap q = dsmp(m, free3, 0.001);
  CHECK(pic(q) == Approx(0.8986).epsilon(1e-3));
  CHECK(pic(q) >= pic(dsmp(m, free3, 1.0)));
}

TEST_CASE("Bayesian masses are their own pignistic probability") {
  const Frame f = Frame::numbered(3);
  const Model shafer = Model::shafer(3);
  const MassFunction m = bba(f, shafer, {{"t1", 0.2}, {"t2", 0.5}, {"t3", 0.3}});
  for (const ProbabilityMap& p : {betp(m, shafer), dsmp(m, shafer, 0.001), dsmp(m, shafer, 0.0)}) {
    CHECK(p.of(mask(f, shafer, "t1")) == Approx(0.2));
    CHECK(p.of(mask(f, shafer, "t2")) == Approx(0.5));
    CHECK(p.of(mask(f, shafer, "t3")) == Approx(0.3));
  }
}

TEST_CASE("entropy and PIC") {
  const Frame f({"A", "B"});
  const Model shafer = Model::shafer(2);
  const ProbabilityMap uniform(f, shafer, {{mask(f, shafer, "A"), 0.5}, {mask(f, shafer, "B"), 0.5}});
  CHECK(shannon_entropy(uniform) == Approx(1.0));
  CHECK(pic(uniform) == Approx(0.0));
  const ProbabilityMap sure(f, shafer, {{mask(f, shafer, "A"), 1.0}, {mask(f, shafer, "B"), 0.0}});
  CHECK(shannon_entropy(sure) == 0.0);
  CHECK(pic(sure) == 1.0);

  const Frame one({"A"});
  const ProbabilityMap single(one, Model::free(1), {{VennMask::full(1), 1.0}});
  try {
    pic(single);
    FAIL("PIC of a single cell");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::single_atom_frame);
  }
}

TEST_CASE("transform errors") {
  const Frame f({"A", "B"});
  const Model shafer = Model::shafer(2);
  const MassFunction ignorant = bba(f, shafer, {{"A|B", 1.0}});
  try {
    dsmp(ignorant, shafer, 0.0);
    FAIL("degenerate epsilon accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_epsilon_zero);
  }
  const MassFunction paradox = bba(f, Model::free(2), {{"A&B", 1.0}});
  try {
    betp(paradox, shafer);
    FAIL("mass on an empty element accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::zero_cardinal_focal);
  }
  CHECK_THROWS_AS(dsmp(ignorant, shafer, -1.0), Error);
}

TEST_CASE("transforms agree with the direct formulas") {
  std::mt19937_64 rng(31);
  for (int n = 2; n <= 4; ++n) {
    const Frame f = Frame::numbered(n);
    for (const Model& model : {Model::free(n), Model::shafer(n)}) {
      const oracle::Bits dead = model.empty_mask().bits();
      const auto pool = support::free_pool(n, dead);
      for (int trial = 0; trial < 100; ++trial) {
        const MassFunction m = support::from_oracle(f, model, support::random_focal(rng, pool, 5));
        const auto reduced = support::to_oracle(m);
        const ProbabilityMap p = betp(m, model);
        for (const auto& [s, v] : oracle::betp(n, dead, reduced)) {
          CHECK(p.of_cell(VennMask::part(n, s)) == Approx(v).epsilon(1e-12));
        }
        const ProbabilityMap q = dsmp(m, model, 0.001);
        for (const auto& [s, v] : oracle::dsmp<double>(n, dead, reduced, 0.001)) {
          CHECK(q.of_cell(VennMask::part(n, s)) == Approx(v).epsilon(1e-12));
        }
        CHECK(pic(p) == Approx(oracle::pic(values(p))).epsilon(1e-12));
        CHECK(pic(p) == Approx(1.0 - shannon_entropy(p) / std::log2(static_cast<double>(p.size()))));
      }
    }
  }
}
