#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace dsmt;
using support::mask;
using support::qbba;

namespace {

const LabelScale m4(4);

Label L(const char* text, LabelScale s = m4) { return Label::parse(text, s); }

struct TwoLabelSources {
  Frame f = Frame::numbered(2);
  Model free2 = Model::free(2);
  Model shafer = Model::shafer(2);
  QualMass qm1 = qbba(f, free2, 4, {{"t1", "L1"}, {"t2", "L3"}, {"t1|t2", "L1"}});
  QualMass qm2 = qbba(f, free2, 4, {{"t1", "L2"}, {"t2", "L1"}, {"t1|t2", "L2"}});
};

Rational R(const char* text) { return parse_rational(text); }

}  // namespace

TEST_CASE("rational parsing and formatting") {
  CHECK(R("1.78") == Rational(178, 100));
  CHECK(R("-0.5") == Rational(-1, 2));
  CHECK(R("7/3") == Rational(7, 3));
  CHECK(format_rational(Rational(89, 50)) == "1.78");
  CHECK(format_rational(Rational(7, 3)) == "7/3");
  CHECK(format_rational(Rational(2)) == "2");
  CHECK_THROWS_AS(R("1.2.3"), ParseError);
  CHECK_THROWS_AS(R("1/0"), Error);
}

TEST_CASE("label parsing, printing and rounding") {
  CHECK(L("L3").index() == 3);
  CHECK(L("L1.78").index() == R("1.78"));
  CHECK(L("L(7/3)").index() == Rational(7, 3));
  CHECK(L("L7/3").index() == Rational(7, 3));
  CHECK(L("L1.78").to_string() == "L1.78");
  CHECK(L("L1.78").rounded() == "~L2");
  CHECK(L("L0.4").rounded() == "~L0");
  CHECK(L("L2.5").rounded_index() == 3);
  CHECK(L("L2.82").rounded() == "~L3");
  CHECK(Label(m4, Rational(1003, 802)).to_string() == "L(1003/802)");
  CHECK_THROWS_AS(L("3"), ParseError);
  CHECK_THROWS_AS(LabelScale(0), Error);
}

TEST_CASE("label arithmetic") {
  CHECK((L("L1") + L("L3") + L("L1")).index() == 5);
  CHECK((L("L0") + L("L2.5")).index() == R("2.5"));
  CHECK((L("L2") - L("L2")).index() == 0);
  CHECK((L("L1") * L("L2")).index() == R("0.4"));
  CHECK((L("L2") * L("L3")).index() == R("1.2"));
  CHECK((L("L2.3") * Label::max(m4)) == L("L2.3"));
  CHECK((L("L0.2") / L("L2")).index() == R("0.5"));
  CHECK((L("L1.2") / L("L5")).index() == R("1.2"));
  CHECK(label_div_scalar(L("L0.2"), 2).index() == R("0.1"));
  try {
    L("L1") / L("L0");
    FAIL("division by L0");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::divide_by_zero_label);
  }
  CHECK_THROWS_AS(label_div_scalar(L("L1"), 0), Error);
  try {
    L("L1") + L("L1", LabelScale(5));
    FAIL("mixed scales");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::scale_mismatch);
  }
}

TEST_CASE("label multiplication inverts division exactly") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<long> num(0, 400), den(1, 97);
  for (int i = 0; i < 1000; ++i) {
    const Label a(m4, Rational(num(rng), den(rng)));
    const Label b(m4, Rational(num(rng) + 1, den(rng)));
    CHECK((a * b) / b == a);
    CHECK((a + b) - b == a);
  }
}

TEST_CASE("qualitative masses validate normalization") {
  TwoLabelSources s;
  CHECK(s.qm1.normalized());
  CHECK(s.qm1.total() == Label::max(m4));
  CHECK_THROWS_AS(qbba(s.f, s.free2, 4, {{"t1", "L1"}, {"t2", "L3"}}), Error);
  CHECK_THROWS_AS(qbba(s.f, s.shafer, 4, {{"t1", "L6"}, {"t2", "L-1"}}), Error);
}

TEST_CASE("qualitative conjunctive, classic and hybrid rules") {
  TwoLabelSources s;
  const std::vector<QualMass> both{s.qm1, s.qm2};

  const QcrResult c = qcr(both, s.shafer);
  CHECK(c.joint.label(mask(s.f, s.free2, "t1")).index() == R("1.2"));
  CHECK(c.joint.label(mask(s.f, s.free2, "t2")).index() == 2);
  CHECK(c.joint.label(mask(s.f, s.free2, "t1|t2")).index() == R("0.4"));
  CHECK(c.joint.label(mask(s.f, s.free2, "t1&t2")).index() == R("1.4"));
  CHECK(c.conflict.index() == R("1.4"));

  const QualMass d = qdsmc(both);
  CHECK(d.focal() == c.joint.focal());
  CHECK(d.normalized());

  const QualMass h = qdsmh(both, s.shafer);
  CHECK(h.label(mask(s.f, s.shafer, "t1")).index() == R("1.2"));
  CHECK(h.label(mask(s.f, s.shafer, "t2")).index() == 2);
  CHECK(h.label(mask(s.f, s.shafer, "t1|t2")).index() == R("1.8"));
  CHECK(h.normalized());
  CHECK(qdsmh(both, s.free2).focal() == d.focal());

  const QualMass vac = qbba(s.f, s.free2, 4, {{"t1|t2", "L5"}});
  CHECK(qdsmc(std::vector<QualMass>{s.qm1, vac}).focal() == s.qm1.focal());
  const QualMass ignorant = qdsmh(std::vector<QualMass>{vac, vac}, s.shafer);
  CHECK(ignorant.focal().size() == 1);
  CHECK(ignorant.label(s.shafer.total_ignorance()) == Label::max(m4));
}

TEST_CASE("qualitative PCR5") {
  TwoLabelSources s;
  const QualMass p = qpcr5(s.qm1, s.qm2, s.shafer);
  CHECK(p.label(mask(s.f, s.shafer, "t1")).index() == R("1.78"));
  CHECK(p.label(mask(s.f, s.shafer, "t2")).index() == R("2.82"));
  CHECK(p.label(mask(s.f, s.shafer, "t1|t2")).index() == R("0.4"));
  CHECK(p.label(mask(s.f, s.free2, "t1&t2")).index() == 0);
  CHECK(p.normalized());

  // Equal conflicting labels split the product equally.
  const QualMass a = qbba(s.f, s.shafer, 4, {{"t1", "L1"}, {"t1|t2", "L4"}});
  const QualMass b = qbba(s.f, s.shafer, 4, {{"t2", "L1"}, {"t1|t2", "L4"}});
  const QualMass e = qpcr5(a, b, s.shafer);
  CHECK(e.label(mask(s.f, s.shafer, "t1")).index() == R("0.8") + R("0.1"));
  CHECK(e.label(mask(s.f, s.shafer, "t2")).index() == R("0.8") + R("0.1"));

  const QualMass vac = qbba(s.f, s.shafer, 4, {{"t1|t2", "L5"}});
  const QualMass no_conflict = qpcr5(a, vac, s.shafer);
  CHECK(no_conflict.focal() == a.focal());
}

TEST_CASE("qualitative DSmP and PIC") {
  const Frame f = Frame::numbered(2);
  const Model shafer = Model::shafer(2);
  const QualMass qm = qbba(f, shafer, 4, {{"t1", "L1"}, {"t2", "L3"}, {"t1|t2", "L1"}});
  const QualProbability p = qdsmp(qm, shafer, 0);
  CHECK(p.of(mask(f, shafer, "t1")).index() == R("1.25"));
  CHECK(p.of(mask(f, shafer, "t2")).index() == R("3.75"));
  CHECK(p.of(mask(f, shafer, "t1|t2")) == Label::max(m4));
  CHECK(qpic(p).index == doctest::Approx(0.94).epsilon(1e-2));
  CHECK(qpic(p).to_string() == "~L0.94");

  const QualMass bayes = qbba(f, shafer, 4, {{"t1", "L2"}, {"t2", "L3"}});
  const QualProbability q = qdsmp(bayes, shafer, Rational(1, 1000));
  CHECK(q.of(mask(f, shafer, "t1")).index() == 2);
  CHECK(q.of(mask(f, shafer, "t2")).index() == 3);

  const QualMass sure = qbba(f, shafer, 4, {{"t1", "L5"}});
  CHECK(qpic(qdsmp(sure, shafer, 0)).index == doctest::Approx(5.0));
  const QualMass ignorant = qbba(f, shafer, 4, {{"t1|t2", "L5"}});
  CHECK(qpic(qdsmp(ignorant, shafer, 1)).index == doctest::Approx(0.0));
  try {
    qdsmp(ignorant, shafer, 0);
    FAIL("degenerate epsilon accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_epsilon_zero);
  }
}

TEST_CASE("qualitative rules commute with the numeric isomorphism") {
  std::mt19937_64 rng(43);
  for (int n = 2; n <= 3; ++n) {
    const Frame f = Frame::numbered(n);
    const Model free_model = Model::free(n);
    const Model shafer = Model::shafer(n);
    const oracle::Bits dead = shafer.empty_mask().bits();
    const auto free_elements = support::free_pool(n, 0);
    const auto shafer_elements = support::free_pool(n, dead);
    for (int trial = 0; trial < 100; ++trial) {
      const int scale = 2 + trial % 5;
      const auto a = support::random_qfocal(rng, free_elements, 3, scale);
      const auto b = support::random_qfocal(rng, free_elements, 3, scale);
      const std::vector<QualMass> s{support::from_qoracle(f, free_model, scale, a),
                                    support::from_qoracle(f, free_model, scale, b)};
      const auto na = support::to_numbers(a, scale), nb = support::to_numbers(b, scale);
      CHECK(support::to_qoracle(qdsmc(s)) == support::to_indices(oracle::dsmc<Rational>({na, nb}), scale));
      CHECK(support::to_qoracle(qdsmh(s, shafer)) ==
            support::to_indices(oracle::dsmh<Rational>(n, dead, {na, nb}), scale));

      const auto x = support::random_qfocal(rng, shafer_elements, 3, scale);
      const auto y = support::random_qfocal(rng, shafer_elements, 3, scale);
      const QualMass qx = support::from_qoracle(f, shafer, scale, x);
      const QualMass qy = support::from_qoracle(f, shafer, scale, y);
      const auto expected = oracle::pcr5<Rational>(n, dead, support::to_numbers(support::to_qoracle(qx), scale),
                                                   support::to_numbers(support::to_qoracle(qy), scale));
      CHECK(support::to_qoracle(qpcr5(qx, qy, shafer)) == support::to_indices(expected, scale));

      const Rational eps(1, 1000);
      const QualProbability qp = qdsmp(qx, shafer, eps);
      for (const auto& [cell, v] :
           oracle::dsmp<Rational>(n, dead, support::to_numbers(support::to_qoracle(qx), scale), eps)) {
        CHECK(qp.of_cell(VennMask::part(n, cell)).index() == v * (scale + 1));
      }
    }
  }
}
