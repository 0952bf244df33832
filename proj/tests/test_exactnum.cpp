#include <qmf/exactnum.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qmf;

namespace {

PolyQ poly(std::initializer_list<long> low_to_high) {
  std::vector<Rational> c;
  for (long v : low_to_high) c.emplace_back(v);
  return PolyQ(c);
}

const Field t_field = make_quad_field(2, 2);
const Field u_field = make_quad_field(1, 4);
const Field v_field = make_quad_field(20, -24);

FieldElement t() { return FieldElement::generator(t_field); }
FieldElement u() { return FieldElement::generator(u_field); }

Rational random_rational(std::mt19937& rng) {
  std::uniform_int_distribution<long> num(-50, 50), den(1, 30);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

FieldElement random_element(std::mt19937& rng, const Field& f) {
  Rational a = random_rational(rng), b = random_rational(rng);
  a.canonicalize();
  b.canonicalize();
  return FieldElement(f, a, b);
}

}  // namespace

TEST(Rational, NormalizedAfterArithmetic) {
  Rational x = make_rational(6, -4);
  EXPECT_EQ(x.get_num(), -3);
  EXPECT_EQ(x.get_den(), 2);
  Rational y = x * make_rational(4, 9);
  EXPECT_EQ(to_string(y), "-2/3");
  EXPECT_EQ(parse_rational("-10/4"), make_rational(-5, 2));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
}

TEST(QuadField, CoefficientFieldDescriptors) {
  EXPECT_TRUE(t_field->totally_real());
  EXPECT_TRUE(u_field->totally_real());
  EXPECT_TRUE(v_field->totally_real());
  EXPECT_THROW(make_quad_field(2, -1), std::invalid_argument);  // X^2 - 2X + 1 has a rational root
}

TEST(QuadMul, Examples) {
  EXPECT_EQ(quad_mul(t(), t()), FieldElement(t_field, 2, 2));
  const FieldElement x(t_field, make_rational(3, 7), -5);
  EXPECT_EQ(quad_mul(FieldElement(1), x), x);
  EXPECT_EQ(quad_mul(u(), FieldElement(1) - u()), FieldElement(-4));
}

TEST(QuadMul, MixedFieldsRejected) {
  EXPECT_THROW(t() * u(), std::invalid_argument);
}

TEST(Conj, Examples) {
  EXPECT_EQ(conj(t()), FieldElement(2) - t());
  EXPECT_EQ(conj(FieldElement(7)), FieldElement(7));
  EXPECT_EQ(conj(u()), FieldElement(1) - u());
}

TEST(Trace, Examples) {
  EXPECT_EQ(trace(t()), 2);
  EXPECT_EQ(trace(FieldElement(5)), 10);
  EXPECT_EQ(trace(u()), 1);
}

TEST(FieldElementText, RoundTrip) {
  const FieldElement x = FieldElement::parse("-43/4026+-1/2013*t@(2,2)");
  EXPECT_EQ(x, FieldElement(t_field, make_rational(-43, 4026), make_rational(-1, 2013)));
  EXPECT_EQ(FieldElement::parse(x.str()), x);
  EXPECT_EQ(FieldElement::parse("17"), FieldElement(17));
}

TEST(FactorSmall, QuadraticOverCas11) {
  const Factorization f = factor_small(poly({-2, -2, 1}));
  EXPECT_TRUE(f.roots.empty());
  ASSERT_EQ(f.quadratics.size(), 1u);
  EXPECT_EQ(f.quadratics[0].descriptor->p, 2);
  EXPECT_EQ(f.quadratics[0].descriptor->q, 2);
  EXPECT_TRUE(f.quadratics[0].totally_real);
}

TEST(FactorSmall, Level14Polynomial) {
  // (X-2)(X+2)(X^2+X+8)
  const PolyQ p = poly({-2, 1}) * poly({2, 1}) * poly({8, 1, 1});
  const Factorization f = factor_small(p * poly({1}));
  ASSERT_EQ(f.roots.size(), 2u);
  std::vector<Rational> roots{f.roots[0].first, f.roots[1].first};
  std::sort(roots.begin(), roots.end());
  EXPECT_EQ(roots[0], -2);
  EXPECT_EQ(roots[1], 2);
  ASSERT_EQ(f.quadratics.size(), 1u);
  EXPECT_EQ(f.quadratics[0].descriptor->p, -1);
  EXPECT_EQ(f.quadratics[0].descriptor->q, -8);
  EXPECT_FALSE(f.quadratics[0].totally_real);
}

TEST(FactorSmall, Level13Polynomial) {
  const Factorization f = factor_small(poly({5, 1}) * poly({-4, -1, 1}));
  ASSERT_EQ(f.roots.size(), 1u);
  EXPECT_EQ(f.roots[0].first, -5);
  ASSERT_EQ(f.quadratics.size(), 1u);
  EXPECT_TRUE(f.quadratics[0].descriptor->p == 1 && f.quadratics[0].descriptor->q == 4);
  EXPECT_TRUE(f.quadratics[0].totally_real);
}

TEST(FactorSmall, ExpandsBackExactly) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> c(-6, 6);
  for (int trial = 0; trial < 40; ++trial) {
    PolyQ p = poly({c(rng), 1});
    const int extra = trial % 3;
    for (int i = 0; i < extra; ++i) p = p * poly({c(rng), 1});
    if (trial % 2 == 0) p = p * poly({c(rng), c(rng), 1});
    p = p * poly({3});
    const Factorization f = factor_small(p);
    EXPECT_EQ(f.expand(), p) << p.str();
  }
}

TEST(FieldElementProperties, ConjugationTraceNorm) {
  std::mt19937 rng(7);
  for (const Field& f : {t_field, u_field, v_field}) {
    for (int i = 0; i < 200; ++i) {
      const FieldElement x = random_element(rng, f);
      EXPECT_EQ(conj(conj(x)), x);
      const FieldElement n = x * conj(x);
      EXPECT_TRUE(n.is_rational());
      EXPECT_EQ(n.rational(), x.a() * x.a() + x.a() * x.b() * f->p - x.b() * x.b() * f->q);
      EXPECT_TRUE((x + conj(x)).is_rational());
      EXPECT_EQ((x + conj(x)).rational(), trace(x));
    }
  }
}

TEST(FieldElementProperties, RingAxioms) {
  std::mt19937 rng(8);
  for (int i = 0; i < 200; ++i) {
    const FieldElement x = random_element(rng, u_field), y = random_element(rng, u_field),
                       z = random_element(rng, u_field);
    EXPECT_EQ((x * y) * z, x * (y * z));
    EXPECT_EQ(x * y, y * x);
    EXPECT_EQ(x * (y + z), x * y + x * z);
    if (!y.is_zero()) {
      EXPECT_EQ((x / y) * y, x);
    }
  }
}

TEST(RationalProperties, NormalizationIdempotent) {
  std::mt19937 rng(9);
  for (int i = 0; i < 500; ++i) {
    Rational a = random_rational(rng), b = random_rational(rng), c = random_rational(rng);
    a.canonicalize();
    Rational s = a + b * c;
    Rational again = s;
    again.canonicalize();
    EXPECT_EQ(s, again);
    EXPECT_GT(sgn(s.get_den()), 0);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
  }
}
