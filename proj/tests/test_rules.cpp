#include <random>

#include "doctest.h"
#include "support.hpp"

#include "dsmt/rules.hpp"

using namespace dsmt;
using support::bba;
using support::mask;
using support::mass_of;

namespace {

using doctest::Approx;

struct Comparison {
  Frame f = Frame::numbered(3);
  Model shafer = Model::shafer(3);
  // t3 turns out not to exist.
  Model dynamic =
      Model::with_constraints(f, Model::shafer(3), std::vector<Expression>{parse_expression("t3", f)});
  MassFunction m1 = bba(f, shafer, {{"t1", 0.1}, {"t2", 0.4}, {"t3", 0.2}, {"t1|t2", 0.3}});
  MassFunction m2 = bba(f, shafer, {{"t1", 0.5}, {"t2", 0.1}, {"t3", 0.3}, {"t1|t2", 0.1}});
};

struct Zadeh {
  Frame f{{"M", "C", "T"}};
  Model shafer = Model::shafer(3);
  MassFunction m1 = bba(f, shafer, {{"M", 0.9}, {"T", 0.1}});
  MassFunction m2 = bba(f, shafer, {{"C", 0.9}, {"T", 0.1}});
};

struct TwoAtoms {
  Frame f{{"A", "B"}};
  Model shafer = Model::shafer(2);
  MassFunction e1_m1 = bba(f, shafer, {{"A", 0.6}, {"A|B", 0.4}});
  MassFunction e1_m2 = bba(f, shafer, {{"B", 0.3}, {"A|B", 0.7}});
  MassFunction e2_m2 = bba(f, shafer, {{"A", 0.2}, {"B", 0.3}, {"A|B", 0.5}});
  MassFunction e3_m1 = bba(f, shafer, {{"A", 0.6}, {"B", 0.3}, {"A|B", 0.1}});
};

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST_CASE("conjunctive consensus") {
  Comparison c;
  const std::vector<MassFunction> s{c.m1, c.m2};
  CHECK(conjunctive(s, c.dynamic).conflict() == Approx(0.65));

  TwoAtoms t;
  const std::vector<MassFunction> e1{t.e1_m1, t.e1_m2};
  const ConjunctiveResult r = conjunctive(e1, t.shafer);
  CHECK(r.rows() == 4);
  const FocalMap joint = r.joint();
  const Model free2 = Model::free(2);
  CHECK(joint.at(mask(t.f, free2, "A")) == Approx(0.42));
  CHECK(joint.at(mask(t.f, free2, "B")) == Approx(0.12));
  CHECK(joint.at(mask(t.f, free2, "A|B")) == Approx(0.28));
  CHECK(joint.at(mask(t.f, free2, "A&B")) == Approx(0.18));

  // The vacuous assignment is neutral.
  const std::vector<MassFunction> with_vacuous{t.e3_m1, vacuous(t.f, t.shafer)};
  for (const auto& [k, v] : conjunctive(with_vacuous, t.shafer).joint()) {
    CHECK(v == Approx(t.e3_m1.mass(t.shafer.reduce(k))));
  }

  CHECK(code_of([&] { conjunctive(std::vector<MassFunction>{t.e1_m1}, t.shafer); }) ==
        ErrorCode::fewer_than_two_sources);
  const MassFunction other = bba(Frame::numbered(2), Model::shafer(2), {{"t1", 1.0}});
  CHECK(code_of([&] { conjunctive(std::vector<MassFunction>{t.e1_m1, other}, t.shafer); }) ==
        ErrorCode::frame_mismatch);
}

TEST_CASE("classic rule keeps paradoxes") {
  const Frame f = Frame::numbered(4);
  const Model shafer = Model::shafer(4);
  const Model free4 = Model::free(4);
  const std::vector<MassFunction> s{bba(f, shafer, {{"t1", 0.6}, {"t3", 0.4}}),
                                    bba(f, shafer, {{"t2", 0.2}, {"t4", 0.8}})};
  const MassFunction r = dsmc(s);
  CHECK(r.model() == free4);
  CHECK(r.mass(mask(f, free4, "t1&t2")) == Approx(0.12));
  CHECK(r.mass(mask(f, free4, "t1&t4")) == Approx(0.48));
  CHECK(r.mass(mask(f, free4, "t2&t3")) == Approx(0.08));
  CHECK(r.mass(mask(f, free4, "t3&t4")) == Approx(0.32));

  const MassFunction h = dsmh(s, shafer);
  CHECK(mass_of(h, "t1|t2") == Approx(0.12));
  CHECK(mass_of(h, "t1|t4") == Approx(0.48));
  CHECK(mass_of(h, "t2|t3") == Approx(0.08));
  CHECK(mass_of(h, "t3|t4") == Approx(0.32));
  CHECK(code_of([&] { dempster(s[0], s[1], shafer); }) == ErrorCode::total_conflict);
}

TEST_CASE("suspects: classic and hybrid rules") {
  const Frame f({"J", "G", "D"});
  const Model free3 = Model::free(3);
  const Model hybrid = Model::with_constraints(
      f, free3, std::vector<Expression>{parse_expression("J&D", f), parse_expression("G&D", f)});
  const MassFunction m1 = bba(f, free3, {{"J", 0.9}, {"D", 0.1}});
  const MassFunction m2 = bba(f, free3, {{"G", 0.8}, {"D", 0.2}});
  const std::vector<MassFunction> s{m1, m2};

  const MassFunction c = dsmc(s);
  CHECK(mass_of(c, "J&G") == Approx(0.72));
  CHECK(mass_of(c, "J&D") == Approx(0.18));
  CHECK(mass_of(c, "G&D") == Approx(0.08));
  CHECK(mass_of(c, "D") == Approx(0.02));

  const MassFunction p = pcr5(m1, m2, hybrid);
  CHECK(mass_of(p, "J") == Approx(0.15).epsilon(1e-2));
  CHECK(mass_of(p, "G") == Approx(0.07).epsilon(1e-2));
  CHECK(mass_of(p, "D") == Approx(0.06).epsilon(1e-2));
  CHECK(mass_of(p, "J&G") == Approx(0.72));
  // Unrounded transfers.
  CHECK(mass_of(p, "J") == Approx(0.9 * 0.9 * 0.2 / 1.1));
  CHECK(mass_of(p, "G") == Approx(0.8 * 0.8 * 0.1 / 0.9));
}

TEST_CASE("comparison of rules on a dynamic problem") {
  Comparison c;
  const MassFunction ds = dempster(c.m1, c.m2, c.dynamic);
  CHECK(mass_of(ds, "t1") == Approx(0.6).epsilon(1e-6));
  CHECK(mass_of(ds, "t2") == Approx(0.314286).epsilon(1e-6));
  CHECK(mass_of(ds, "t1|t2") == Approx(0.085714).epsilon(1e-6));

  const MassFunction sm = smets(c.m1, c.m2, c.dynamic);
  CHECK(sm.open_world());
  CHECK(sm.mass(VennMask::empty(3)) == Approx(0.65));
  CHECK(mass_of(sm, "t1") == Approx(0.21));
  CHECK(mass_of(sm, "t2") == Approx(0.11));
  CHECK(mass_of(sm, "t1|t2") == Approx(0.03));

  const MassFunction y = yager(c.m1, c.m2, c.dynamic);
  CHECK(mass_of(y, "t1") == Approx(0.21));
  CHECK(mass_of(y, "t2") == Approx(0.11));
  CHECK(mass_of(y, "t1|t2") == Approx(0.68));

  const MassFunction h = dsmh(std::vector<MassFunction>{c.m1, c.m2}, c.dynamic);
  CHECK(mass_of(h, "t1") == Approx(0.34));
  CHECK(mass_of(h, "t2") == Approx(0.25));
  CHECK(mass_of(h, "t1|t2") == Approx(0.41));

  try {
    dubois_prade(c.m1, c.m2, c.dynamic);
    FAIL("Dubois-Prade accepted mass on a vanished atom");
  } catch (const NonExistentialInputError& e) {
    CHECK(e.lost_mass() == Approx(0.06));
    CHECK(e.retained_mass() == Approx(0.94));
  }
}

TEST_CASE("Zadeh's example") {
  Zadeh z;
  CHECK(mass_of(dempster(z.m1, z.m2, z.shafer), "T") == Approx(1.0));
  const MassFunction y = yager(z.m1, z.m2, z.shafer);
  CHECK(mass_of(y, "M|C|T") == Approx(0.99));
  CHECK(mass_of(y, "T") == Approx(0.01));
  for (const MassFunction& h :
       {dsmh(std::vector<MassFunction>{z.m1, z.m2}, z.shafer), dubois_prade(z.m1, z.m2, z.shafer)}) {
    CHECK(mass_of(h, "M|C") == Approx(0.81));
    CHECK(mass_of(h, "T") == Approx(0.01));
    CHECK(mass_of(h, "M|T") == Approx(0.09));
    CHECK(mass_of(h, "C|T") == Approx(0.09));
  }
  const MassFunction p = pcr5(z.m1, z.m2, z.shafer);
  CHECK(mass_of(p, "M") == Approx(0.486).epsilon(1e-3));
  CHECK(mass_of(p, "C") == Approx(0.486).epsilon(1e-3));
  CHECK(mass_of(p, "T") == Approx(0.028).epsilon(1e-3));
}

TEST_CASE("generalized Zadeh family") {
  const Frame f = Frame::numbered(3);
  const Model shafer = Model::shafer(3);
  for (double e1 = 0.05; e1 < 1.0; e1 += 0.1) {
    for (double e2 = 0.05; e2 < 1.0; e2 += 0.1) {
      const MassFunction m1 = bba(f, shafer, {{"t1", 1 - e1}, {"t3", e1}});
      const MassFunction m2 = bba(f, shafer, {{"t2", 1 - e2}, {"t3", e2}});
      CHECK(mass_of(dempster(m1, m2, shafer), "t3") == Approx(1.0));
      const MassFunction c = dsmc(std::vector<MassFunction>{m1, m2});
      CHECK(mass_of(c, "t1&t2") == Approx((1 - e1) * (1 - e2)));
      CHECK(mass_of(c, "t3") == Approx(e1 * e2));
    }
  }
  const MassFunction m1 = bba(f, shafer, {{"t1", 0.5}, {"t3", 0.5}});
  const MassFunction m2 = bba(f, shafer, {{"t2", 0.5}, {"t3", 0.5}});
  const MassFunction h = dsmh(std::vector<MassFunction>{m1, m2}, shafer);
  for (const char* e : {"t3", "t1|t2", "t1|t3", "t2|t3"}) CHECK(mass_of(h, e) == Approx(0.25));
}

TEST_CASE("PCR5 examples on two atoms") {
  TwoAtoms t;
  const MassFunction p1 = pcr5(t.e1_m1, t.e1_m2, t.shafer);
  CHECK(mass_of(p1, "A") == Approx(0.54));
  CHECK(mass_of(p1, "B") == Approx(0.18));
  CHECK(mass_of(p1, "A|B") == Approx(0.28));

  const MassFunction p2 = pcr5(t.e1_m1, t.e2_m2, t.shafer);
  CHECK(mass_of(p2, "A") == Approx(0.62));
  CHECK(mass_of(p2, "B") == Approx(0.18));
  CHECK(mass_of(p2, "A|B") == Approx(0.20));

  const MassFunction p3 = pcr5(t.e3_m1, t.e2_m2, t.shafer);
  CHECK(mass_of(p3, "A") == Approx(0.584));
  CHECK(mass_of(p3, "B") == Approx(0.366));
  CHECK(mass_of(p3, "A|B") == Approx(0.05));

  for (const auto& [a, b] : {std::pair{t.e1_m1, t.e1_m2}, {t.e1_m1, t.e2_m2}, {t.e3_m1, t.e2_m2}}) {
    const MassFunction five = pcr5(a, b, t.shafer);
    const MassFunction six = pcr6(std::vector<MassFunction>{a, b}, t.shafer);
    CHECK(support::max_gap(support::to_oracle(five), support::to_oracle(six)) < 1e-15);
  }
}

TEST_CASE("PCR6 on three sources") {
  TwoAtoms t;
  const MassFunction a = bba(t.f, t.shafer, {{"A", 1.0}});
  const MassFunction r = pcr6(std::vector<MassFunction>{a, a, a}, t.shafer);
  CHECK(mass_of(r, "A") == 1.0);

  // Three-source conflict A, B, A: the B source gets back its share.
  const MassFunction b = bba(t.f, t.shafer, {{"B", 0.6}, {"A|B", 0.4}});
  const MassFunction m3 = pcr6(std::vector<MassFunction>{t.e1_m1, b, t.e1_m1}, t.shafer);
  CHECK(m3.total() == Approx(1.0).epsilon(1e-12));
  CHECK(pcr6(std::vector<MassFunction>{b, t.e1_m1, t.e1_m1}, t.shafer).focal().size() ==
        m3.focal().size());
}

TEST_CASE("dynamic sequence in the transferable belief model") {
  const Frame f({"A", "B", "C"});
  const Model shafer = Model::shafer(3);
  const MassFunction m1 = bba(f, shafer, {{"A", 0.4}, {"C", 0.6}});
  const MassFunction m2 = bba(f, shafer, {{"A", 0.7}, {"B", 0.3}});
  const MassFunction m3 = bba(f, shafer, {{"B", 0.8}, {"C", 0.2}});
  const MassFunction m4 = bba(f, shafer, {{"A", 0.5}, {"B", 0.3}, {"C", 0.2}});

  const MassFunction tbm12 = smets(m1, m2, shafer);
  CHECK(tbm12.mass(VennMask::empty(3)) == Approx(0.72));
  CHECK(mass_of(tbm12, "A") == Approx(0.28));
  const MassFunction tbm123 = smets(tbm12, m3, shafer);
  CHECK(tbm123.mass(VennMask::empty(3)) == Approx(1.0));
  CHECK(smets(tbm123, m4, shafer).mass(VennMask::empty(3)) == Approx(1.0));

  const MassFunction ds12 = dempster(m1, m2, shafer);
  CHECK(code_of([&] { dempster(ds12, m3, shafer); }) == ErrorCode::total_conflict);

  const MassFunction p123 = pcr5(pcr5(m1, m2, shafer), m3, shafer);
  CHECK(mass_of(p123, "A") == Approx(0.277490).epsilon(1e-6));
  CHECK(mass_of(p123, "B") == Approx(0.545010).epsilon(1e-6));
  CHECK(mass_of(p123, "C") == Approx(0.177500).epsilon(1e-6));
}

TEST_CASE("Yager, Dempster and Smets agree without conflict") {
  TwoAtoms t;
  const MassFunction a = bba(t.f, t.shafer, {{"A", 0.3}, {"A|B", 0.7}});
  const MassFunction b = bba(t.f, t.shafer, {{"A", 0.5}, {"A|B", 0.5}});
  const auto d = support::to_oracle(dempster(a, b, t.shafer));
  CHECK(support::max_gap(d, support::to_oracle(yager(a, b, t.shafer))) < 1e-15);
  CHECK(support::max_gap(d, support::to_oracle(smets(a, b, t.shafer))) < 1e-15);
  CHECK(support::max_gap(d, support::to_oracle(dubois_prade(a, b, t.shafer))) < 1e-15);
  CHECK(support::max_gap(d, support::to_oracle(pcr5(a, b, t.shafer))) < 1e-15);
}

TEST_CASE("rules agree with the brute-force oracles") {
  std::mt19937_64 rng(2024);
  for (int n = 2; n <= 4; ++n) {
    const Frame f = Frame::numbered(n);
    const Model shafer = Model::shafer(n);
    const oracle::Bits dead = shafer.empty_mask().bits();
    const auto free_elements = support::free_pool(n, 0);
    const auto shafer_elements = support::free_pool(n, dead);
    for (int trial = 0; trial < 200; ++trial) {
      const auto a = support::random_focal(rng, free_elements, 4);
      const auto b = support::random_focal(rng, free_elements, 4);
      const auto c = support::random_focal(rng, free_elements, 3);
      const Model free_model = Model::free(n);
      const std::vector<MassFunction> s{support::from_oracle(f, free_model, a),
                                        support::from_oracle(f, free_model, b),
                                        support::from_oracle(f, free_model, c)};
      CHECK(support::max_gap(support::to_oracle(dsmc(s)), oracle::dsmc<double>({a, b, c})) < 1e-12);
      CHECK(support::max_gap(support::to_oracle(dsmh(s, shafer)), oracle::dsmh<double>(n, dead, {a, b, c})) <
            1e-12);

      const auto x = support::random_focal(rng, shafer_elements, 4);
      const auto y = support::random_focal(rng, shafer_elements, 4);
      const MassFunction mx = support::from_oracle(f, shafer, x);
      const MassFunction my = support::from_oracle(f, shafer, y);
      CHECK(support::max_gap(support::to_oracle(pcr5(mx, my, shafer)), oracle::pcr5<double>(n, dead, x, y)) <
            1e-12);
      const std::vector<MassFunction> xy{mx, my};
      CHECK(conjunctive(xy, shafer).conflict() == Approx(oracle::conflict<double>(dead, {x, y}, n)));
    }
  }
}

TEST_CASE("serial and parallel products agree bit for bit") {
  std::mt19937_64 rng(5);
  const int n = 4;
  const Frame f = Frame::numbered(n);
  const auto pool = support::free_pool(n, 0);
  std::vector<MassFunction> s;
  for (int i = 0; i < 4; ++i) s.push_back(support::from_oracle(f, Model::free(n), support::random_focal(rng, pool, 8)));
  CHECK(dsmc(s, Execution::serial).focal() == dsmc(s, Execution::parallel).focal());
  CHECK(dsmh(s, Model::shafer(n), Execution::serial).focal() ==
        dsmh(s, Model::shafer(n), Execution::parallel).focal());
}

TEST_CASE("PCR5 rejects mass on elements the model empties") {
  Comparison c;
  CHECK(code_of([&] { pcr5(c.m1, c.m2, c.dynamic); }) == ErrorCode::non_existential_input);
}
