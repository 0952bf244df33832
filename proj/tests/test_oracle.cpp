#include <qmf/oracle.hpp>

#include <gtest/gtest.h>

using namespace qmf;
using namespace qmf::oracle;

TEST(Sigma, Examples) {
  EXPECT_EQ(sigma(1, 6), 12);
  EXPECT_EQ(sigma(3, 1), 1);
  EXPECT_EQ(sigma(1, 0), 0);
  EXPECT_EQ(sigma(3, 4, 2), 9);
  EXPECT_EQ(sigma(3, 5, 2), 0);
}

TEST(Sigma, TableAgreesWithTrialDivision) {
  for (int j : {0, 1, 3, 5, 7}) {
    const SigmaTable t(j, 2000);
    for (long n = 0; n <= 2000; ++n) ASSERT_EQ(t(n), sigma(j, n)) << j << " " << n;
  }
}

TEST(W, Examples) {
  EXPECT_EQ(W(1, 1), 0);
  EXPECT_EQ(W(2, 3), 1);
  EXPECT_EQ(W(1, 3), 6);
  EXPECT_THROW(W(0, 3), std::invalid_argument);
}

TEST(W, LevelOneIsSymmetric) {
  for (long n = 2; n <= 300; ++n) {
    Integer half = 0;
    for (long m = 1; 2 * m < n; ++m) half += sigma(1, m) * sigma(1, n - m);
    const Integer mid = n % 2 == 0 ? Integer(sigma(1, n / 2) * sigma(1, n / 2)) : Integer(0);
    EXPECT_EQ(W(1, n), 2 * half + mid) << n;
  }
}

TEST(SMod, Examples) {
  EXPECT_EQ(S_mod(0, 3, 10) + S_mod(1, 3, 10) + S_mod(2, 3, 10), W(1, 10));
  EXPECT_EQ(S_mod(1, 3, 2), 1);
  EXPECT_EQ(S_mod(2, 3, 1), 0);
  EXPECT_THROW(S_mod(3, 3, 1), std::invalid_argument);
}

TEST(SMod, ResiduesPartitionW1) {
  for (long b : {2L, 3L, 5L})
    for (long n = 1; n <= 200; ++n) {
      Integer s = 0;
      for (long a = 0; a < b; ++a) s += S_mod(a, b, n);
      EXPECT_EQ(s, W(1, n)) << b << " " << n;
    }
}

TEST(Lahiri, Examples) {
  EXPECT_EQ(lahiri({0, 0}, {1, 1}, {1, 1}, 2), 1);
  EXPECT_EQ(lahiri({1}, {1}, {1}, 2), 6);
  EXPECT_EQ(lahiri({0, 0, 0}, {1, 1, 1}, {1, 1, 1}, 2), 0);
  EXPECT_EQ(lahiri({0, 1, 1}, {1, 1, 1}, {1, 1, 1}, 3), 1);
  EXPECT_THROW(lahiri({0}, {2}, {1}, 5), std::invalid_argument);
}

TEST(Lahiri, PairWithUnitLevelEqualsW) {
  for (int N = 1; N <= 14; ++N)
    for (long n = 1; n <= 200; ++n) EXPECT_EQ(lahiri({0, 0}, {1, 1}, {1, N}, n), W(N, n)) << N << " " << n;
}

TEST(Lahiri, LargeValuesFallBackToExactArithmetic) {
  // (n^5 sigma_11) overflows 64 bits well before n = 200
  Integer direct = 0;
  const long n = 200;
  for (long m = 1; m < n; ++m) {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(m), 5);
    direct += p * sigma(11, m) * sigma(11, n - m);
  }
  EXPECT_EQ(lahiri({5, 0}, {11, 11}, {1, 1}, n), direct);
}

TEST(Fixtures, Examples) {
  EXPECT_EQ(table_fixture("tau_4_7", 19), FieldElement(-110));
  EXPECT_EQ(table_fixture("tau_6_10_3", 11), FieldElement(-768));
  EXPECT_EQ(table_fixture("tau_8_5_2", 4), FieldElement::parse("248+-20*t@(20,-24)"));
  EXPECT_THROW(table_fixture("tau_4_7", 100000), std::out_of_range);
  EXPECT_THROW(table_fixture("tau_99", 1), std::out_of_range);
}
