#include <qmf/forms.hpp>
#include <qmf/qseries.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qmf;

namespace {

QSeries ints(std::initializer_list<long> c) {
  std::vector<Rational> v;
  for (long x : c) v.emplace_back(x);
  return QSeries::from_rationals(v);
}

QSeries random_series(std::mt19937& rng, int prec) {
  std::uniform_int_distribution<long> num(-20, 20), den(1, 6);
  std::vector<Rational> v;
  for (int i = 0; i <= prec; ++i) v.emplace_back(num(rng), den(rng));
  for (auto& x : v) x.canonicalize();
  return QSeries::from_rationals(v);
}

void expect_prefix(const QSeries& f, int from, std::initializer_list<long> values) {
  int n = from;
  for (long v : values) {
    EXPECT_EQ(f.coeff(n), FieldElement(v)) << "at q^" << n;
    ++n;
  }
}

}  // namespace

TEST(Mul, Examples) {
  EXPECT_EQ(mul(ints({1, -24, 0}), ints({1, -24, 0})), ints({1, -48, 576}));
  const QSeries f = ints({3, 1, 4, 1, 5});
  EXPECT_EQ(mul(f, one(4)), f);
  const QSeries e2 = eisenstein(2, 10);
  EXPECT_EQ(mul(e2, e2).coeff(2), FieldElement(432));
}

TEST(Mul, PrecisionIsMinimum) {
  EXPECT_EQ(mul(one(5), one(9)).prec(), 5);
  EXPECT_THROW(one(5).coeff(6), std::out_of_range);
}

TEST(Rescale, Examples) {
  const QSeries e2 = eisenstein(2, 20);
  const QSeries r = rescale(e2, 2);
  EXPECT_EQ(r.coeff(1), FieldElement(0));
  EXPECT_EQ(r.coeff(2), FieldElement(-24));
  FormContext ctx(80);
  const QSeries d45 = eta_quotient({{1, 4}, {5, 4}}, 40);
  EXPECT_EQ(rescale(d45, 2), ctx.eval(ctx.parse("F_4_5_2")));
}

TEST(Derive, Examples) {
  EXPECT_TRUE(derive(one(10)).is_zero());
  const QSeries e2 = eisenstein(2, 10);
  EXPECT_EQ(derive(e2).coeff(1), FieldElement(-24));
  EXPECT_EQ(derive(e2, 3).coeff(2), FieldElement(-576));
}

TEST(Power, Examples) {
  const QSeries e2 = eisenstein(2, 12);
  EXPECT_EQ(power(e2, 0), one(12));
  const QSeries c = power(e2 - one(12), 3);
  EXPECT_EQ(c.valuation(), 3);
  EXPECT_EQ(c.coeff(3), FieldElement(-13824));
  EXPECT_EQ(power(phi_series(1, 5, 12), 2).coeff(0), FieldElement(1));
}

TEST(Root, Examples) {
  const QSeries cube = ints({0, 0, 0, 1, 3, 3, 1, 0, 0});
  EXPECT_EQ(root(cube, 3), ints({0, 1, 1, 0, 0, 0, 0}));
  const QSeries f = ints({1, 5, -2, 7});
  EXPECT_EQ(root(f, 1), f);
}

TEST(Root, ImiFormulaGivesDelta47) {
  const int prec = 30;
  auto e = [&](int a, int b) { return eta_quotient({{1, a}, {7, b}}, prec); };
  const QSeries s = e(16, 8) + 13L * e(12, 12) + 49L * e(8, 16);
  const QSeries r = root(s, 3);
  expect_prefix(r, 1, {1, -1, -2, -7, 16});
}

TEST(EtaQuotient, Examples) {
  const QSeries delta = eta_quotient({{1, 24}}, 10);
  EXPECT_EQ(delta.coeff(2), FieldElement(-24));
  EXPECT_EQ(delta.coeff(3), FieldElement(252));
  expect_prefix(eta_quotient({{1, 4}, {11, 4}}, 10), 0, {0, 0, 1, -4, 2, 8});
  const QSeries d82 = eta_quotient({{1, 8}, {2, 8}}, 10);
  EXPECT_EQ(d82.valuation(), 1);
  EXPECT_EQ(d82.coeff(1), FieldElement(1));
}

TEST(Hecke, Examples) {
  const QSeries f1 = eta_quotient({{1, 4}, {11, 4}}, 40);
  expect_prefix(hecke(f1, 2, 4, 11), 0, {0, 1, 2, -5, -2, 9});
  std::mt19937 rng(3);
  const QSeries g = random_series(rng, 40);
  const QSeries u2 = hecke(g, 2, 4, 10);
  for (int n = 0; n <= u2.prec(); ++n) EXPECT_EQ(u2.coeff(n), g.coeff(2 * n));
  EXPECT_TRUE(hecke(QSeries(20), 3, 4, 1).is_zero());
}

TEST(Hecke, EigenformScalesByAp) {
  const QSeries d45 = eta_quotient({{1, 4}, {5, 4}}, 60);
  for (int p : {2, 3, 7}) {
    const QSeries tp = hecke(d45, p, 4, 5);
    EXPECT_EQ(tp, d45.coeff(p) * d45.truncate(tp.prec())) << "T_" << p;
  }
}

TEST(RCBracket, Examples) {
  const QSeries e4 = eisenstein(4, 30);
  EXPECT_TRUE(rc_bracket1(e4, 4, e4, 4).is_zero());
  const QSeries p15 = phi_series(1, 5, 30);
  const QSeries expect = 4L * mul(e4, derive(p15)) - 2L * mul(derive(e4), p15);
  EXPECT_EQ(rc_bracket1(e4, 4, p15, 2), expect);
}

TEST(SeriesProperties, MulCommutativeAssociative) {
  std::mt19937 rng(21);
  for (int i = 0; i < 20; ++i) {
    const QSeries f = random_series(rng, 25), g = random_series(rng, 25), h = random_series(rng, 25);
    EXPECT_EQ(mul(f, g), mul(g, f));
    EXPECT_EQ(mul(mul(f, g), h), mul(f, mul(g, h)));
  }
}

TEST(SeriesProperties, Leibniz) {
  std::mt19937 rng(22);
  for (int i = 0; i < 20; ++i) {
    const QSeries f = random_series(rng, 30), g = random_series(rng, 30);
    EXPECT_EQ(derive(mul(f, g)), mul(derive(f), g) + mul(f, derive(g)));
  }
}

TEST(SeriesProperties, RootOfPower) {
  std::mt19937 rng(23);
  for (int i = 0; i < 10; ++i) {
    QSeries f = random_series(rng, 20);
    f.set(0, Rational(1));
    for (int n : {2, 3, 5}) EXPECT_EQ(power(root(f, n), n), f);
  }
}

TEST(SeriesProperties, RescaleComposes) {
  std::mt19937 rng(24);
  const QSeries f = random_series(rng, 60);
  EXPECT_EQ(rescale(f, 6), rescale(rescale(f, 2), 3));
  EXPECT_EQ(rescale(f, 6).prec(), 360);
}
