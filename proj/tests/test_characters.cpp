#include <qmf/characters.hpp>
#include <qmf/formexpr.hpp>
#include <qmf/forms.hpp>
#include <qmf/oracle.hpp>

#include <gtest/gtest.h>

#include <numeric>

using namespace qmf;

namespace {

// Classical Bernoulli numbers from sum_{j<=m} C(m+1, j) B_j = 0.
std::vector<Rational> pascal_bernoulli(int n) {
  std::vector<Rational> B(static_cast<std::size_t>(n) + 1);
  B[0] = 1;
  for (int m = 1; m <= n; ++m) {
    Rational s = 0;
    Integer c = 1;  // C(m+1, 0)
    for (int j = 0; j < m; ++j) {
      s += Rational(c) * B[static_cast<std::size_t>(j)];
      c = c * (m + 1 - j) / (j + 1);
    }
    B[static_cast<std::size_t>(m)] = -s / Rational(m + 1);
  }
  return B;
}

}  // namespace

TEST(MakeCharacter, Examples) {
  const DirichletCharacter chi3 = make_character("chi3");
  EXPECT_EQ(chi3(2), -1);
  EXPECT_EQ(chi3(0), 0);
  EXPECT_EQ(make_character("chi0_3")(0), 0);
  EXPECT_EQ(make_character("chi13")(2), -1);
  EXPECT_EQ(DirichletCharacter::trivial()(0), 1);
}

TEST(MakeCharacter, ValuesVanishOffUnitsAndMultiply) {
  for (const std::string name : {"chi3", "chi13", "chi0_3", "chi0_10", "chi5"}) {
    const DirichletCharacter c = make_character(name);
    const int M = c.modulus();
    for (int a = 0; a < M; ++a) {
      EXPECT_EQ(c(a) == 0, std::gcd(a, M) != 1) << name << " at " << a;
      for (int b = 0; b < M; ++b)
        if (std::gcd(a, M) == 1 && std::gcd(b, M) == 1) {
          EXPECT_EQ(c(a * b), c(a) * c(b));
        }
    }
  }
}

TEST(GenBernoulli, Examples) {
  EXPECT_EQ(gen_bernoulli(DirichletCharacter::trivial(), 4), make_rational(-1, 30));
  EXPECT_EQ(gen_bernoulli(make_character("chi3"), 1), make_rational(-1, 3));
  EXPECT_EQ(gen_bernoulli(DirichletCharacter::trivial(), 0), 1);
}

TEST(GenBernoulli, MatchesPascalRecurrence) {
  const auto B = pascal_bernoulli(20);
  for (int k = 2; k <= 20; k += 2) EXPECT_EQ(gen_bernoulli(DirichletCharacter::trivial(), k), B[k]) << k;
  EXPECT_EQ(B[2], make_rational(1, 6));
  EXPECT_EQ(B[6], make_rational(1, 42));
}

TEST(GenBernoulli, OddCharacterEvenIndexVanishes) {
  const DirichletCharacter chi3 = make_character("chi3");
  ASSERT_EQ(chi3.parity(), -1);
  for (int k = 2; k <= 12; k += 2) EXPECT_EQ(gen_bernoulli(chi3, k), 0) << k;
}

TEST(SigmaTwisted, Examples) {
  const auto one = DirichletCharacter::trivial();
  EXPECT_EQ(sigma_twisted(one, one, 3, 6), 252);
  EXPECT_EQ(sigma_twisted(make_character("chi13"), make_character("chi3"), 5, 1), 1);
  EXPECT_EQ(sigma_twisted(one, make_character("chi3"), 1, 3), 1);
}

TEST(SigmaTwisted, TrivialMatchesOracle) {
  const auto one = DirichletCharacter::trivial();
  for (int k : {1, 3, 5}) {
    const oracle::SigmaTable tab(k, 10000);
    for (long n = 1; n <= 10000; ++n) ASSERT_EQ(sigma_twisted(one, one, k, n), tab(n)) << k << " " << n;
  }
}

TEST(Twist, Examples) {
  const QSeries e2 = eisenstein(2, 30);
  EXPECT_EQ(twist(e2, DirichletCharacter::trivial()), e2);
  const QSeries t = twist(e2, make_character("chi3"));
  EXPECT_EQ(t.coeff(0), FieldElement(0));
  EXPECT_EQ(t.coeff(1), FieldElement(-24));
  EXPECT_EQ(expr::twist(expr::eis(2, 1), "chi3")->level, 9);
}

TEST(Twist, TwiceEqualsSquare) {
  const QSeries e4 = eisenstein(4, 60);
  for (const std::string name : {"chi3", "chi13", "chi0_3"}) {
    const DirichletCharacter c = make_character(name);
    const QSeries twice = twist(twist(e4, c), c);
    for (int n = 0; n <= 60; ++n) EXPECT_EQ(twice.coeff(n), FieldElement(c(n) * c(n)) * e4.coeff(n));
  }
}
