#pragma once

// Brute-force evaluation of the convolution sums, kept independent of the
// q-series machinery, plus the golden coefficient tables.

#include <qmf/exactnum.hpp>

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#ifndef QMF_DATA_DIR
#define QMF_DATA_DIR "data"
#endif

namespace qmf::oracle {

/// sum_{d | n} d^j; zero for n <= 0.
inline Integer sigma(int j, long n) {
  if (n <= 0) return 0;
  Integer s = 0;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(j));
    s += p;
    const long e = n / d;
    if (e != d) {
      mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(e), static_cast<unsigned long>(j));
      s += p;
    }
  }
  return s;
}

/// sigma_j(n/t), zero unless t | n.
inline Integer sigma(int j, long n, long t) {
  if (t <= 0) throw std::invalid_argument("sigma: non-positive divisor argument");
  if (n % t != 0) return 0;
  return sigma(j, n / t);
}

/// Memo table of sigma_j(0..n_max).
class SigmaTable {
 public:
  SigmaTable(int j, long n_max) : values_(static_cast<std::size_t>(n_max) + 1, 0) {
    for (long d = 1; d <= n_max; ++d) {
      Integer p;
      mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(j));
      for (long m = d; m <= n_max; m += d) values_[static_cast<std::size_t>(m)] += p;
    }
  }
  const Integer& operator()(long n) const { return values_.at(static_cast<std::size_t>(n)); }
  long n_max() const { return static_cast<long>(values_.size()) - 1; }

 private:
  std::vector<Integer> values_;
};

/// W_N(n) = sum_{1 <= m < n/N} sigma_1(m) sigma_1(n - N m)
inline Integer W(long N, long n) {
  if (N < 1) throw std::invalid_argument("W: level must be positive");
  Integer s = 0;
  for (long m = 1; N * m < n; ++m) s += sigma(1, m) * sigma(1, n - N * m);
  return s;
}

/// S[a,b](n) = sum_{0 <= m <= n, m = a mod b} sigma_1(m) sigma_1(n - m)
inline Integer S_mod(long a, long b, long n) {
  if (b < 1 || a < 0 || a >= b) throw std::invalid_argument("S_mod: need 0 <= a < b");
  Integer s = 0;
  for (long m = a; m <= n; m += b) s += sigma(1, m) * sigma(1, n - m);
  return s;
}

namespace detail {

struct LahiriTables {
  std::vector<std::vector<Integer>> big;
  std::vector<std::vector<long long>> small;
  bool small_ok = true;
  std::vector<long> min_rest;  // sum of N_i for i >= j
};

inline LahiriTables lahiri_tables(const std::vector<int>& a, const std::vector<int>& b, const std::vector<int>& N,
                                  long n) {
  LahiriTables t;
  const std::size_t r = a.size();
  t.big.resize(r);
  t.small.resize(r);
  t.min_rest.assign(r + 1, 0);
  for (std::size_t j = r; j-- > 0;) t.min_rest[j] = t.min_rest[j + 1] + N[j];
  for (std::size_t j = 0; j < r; ++j) {
    t.big[j].assign(static_cast<std::size_t>(n) + 1, 0);
    t.small[j].assign(static_cast<std::size_t>(n) + 1, 0);
    for (long m = N[j]; m <= n; m += N[j]) {
      Integer p;
      mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(a[j]));
      Integer v = p * sigma(b[j], m / N[j]);
      if (v.fits_slong_p()) t.small[j][static_cast<std::size_t>(m)] = v.get_si();
      else t.small_ok = false;
      t.big[j][static_cast<std::size_t>(m)] = std::move(v);
    }
  }
  return t;
}

// Returns false on 128-bit overflow.
inline bool lahiri_fast(const LahiriTables& t, std::size_t j, long rest, __int128 prod, __int128& acc) {
  const std::size_t r = t.small.size();
  const auto& tab = t.small[j];
  if (j + 1 == r) {
    const long long v = tab[static_cast<std::size_t>(rest)];
    if (v == 0) return true;
    __int128 term;
    if (__builtin_mul_overflow(prod, static_cast<__int128>(v), &term)) return false;
    return !__builtin_add_overflow(acc, term, &acc);
  }
  const long step = static_cast<long>(t.min_rest[j] - t.min_rest[j + 1]);
  for (long m = step; m <= rest - t.min_rest[j + 1]; m += step) {
    const long long v = tab[static_cast<std::size_t>(m)];
    if (v == 0) continue;
    __int128 next;
    if (__builtin_mul_overflow(prod, static_cast<__int128>(v), &next)) return false;
    if (!lahiri_fast(t, j + 1, rest - m, next, acc)) return false;
  }
  return true;
}

inline void lahiri_big(const LahiriTables& t, std::size_t j, long rest, const Integer& prod, Integer& acc) {
  const std::size_t r = t.big.size();
  const auto& tab = t.big[j];
  if (j + 1 == r) {
    const Integer& v = tab[static_cast<std::size_t>(rest)];
    if (v != 0) acc += prod * v;
    return;
  }
  const long step = static_cast<long>(t.min_rest[j] - t.min_rest[j + 1]);
  for (long m = step; m <= rest - t.min_rest[j + 1]; m += step) {
    const Integer& v = tab[static_cast<std::size_t>(m)];
    if (v == 0) continue;
    lahiri_big(t, j + 1, rest - m, prod * v, acc);
  }
}

inline Integer from_int128(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  Integer hi = static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64));
  Integer lo = static_cast<unsigned long>(static_cast<std::uint64_t>(u));
  Integer r = (hi << 64) + lo;
  return neg ? Integer(-r) : r;
}

}  // namespace detail

/// sum over m_1 + ... + m_r = n of prod m_j^{a_j} sigma_{b_j}(m_j / N_j).
/// Zero parts contribute nothing since sigma(0) = 0.
inline Integer lahiri(const std::vector<int>& a, const std::vector<int>& b, const std::vector<int>& N, long n) {
  const std::size_t r = a.size();
  if (r == 0 || b.size() != r || N.size() != r) throw std::invalid_argument("lahiri: parameter lengths differ");
  for (std::size_t j = 0; j < r; ++j) {
    if (b[j] < 1 || b[j] % 2 == 0) throw std::invalid_argument("lahiri: b entries must be odd and positive");
    if (N[j] < 1) throw std::invalid_argument("lahiri: N entries must be positive");
    if (a[j] < 0) throw std::invalid_argument("lahiri: a entries must be nonnegative");
  }
  if (n < 1) return 0;
  const detail::LahiriTables t = detail::lahiri_tables(a, b, N, n);
  if (n < t.min_rest[0]) return 0;
  if (t.small_ok) {
    __int128 acc = 0;
    if (detail::lahiri_fast(t, 0, n, 1, acc)) return detail::from_int128(acc);
  }
  Integer acc = 0;
  detail::lahiri_big(t, 0, n, Integer(1), acc);
  return acc;
}

/// Golden coefficient tables: lines "name n value", '#' comments.
class FixtureTable {
 public:
  static FixtureTable load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture file " + path);
    FixtureTable t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      std::string name;
      long n = 0;
      std::string value;
      if (!(ls >> name)) continue;
      if (!(ls >> n >> value)) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed fixture");
      t.entries_[name][n] = FieldElement::parse(value);
    }
    return t;
  }

  static const FixtureTable& builtin() {
    static const FixtureTable t = load(std::string(QMF_DATA_DIR) + "/tables.txt");
    return t;
  }

  const FieldElement& get(const std::string& name, long n) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw std::out_of_range("unknown fixture " + name);
    auto jt = it->second.find(n);
    if (jt == it->second.end()) throw std::out_of_range("fixture " + name + " has no entry at n=" + std::to_string(n));
    return jt->second;
  }
  const std::map<long, FieldElement>& entries(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw std::out_of_range("unknown fixture " + name);
    return it->second;
  }
  std::vector<std::string> names() const {
    std::vector<std::string> v;
    for (const auto& [k, _] : entries_) v.push_back(k);
    return v;
  }

 private:
  std::map<std::string, std::map<long, FieldElement>> entries_;
};

inline FieldElement table_fixture(const std::string& name, long n) { return FixtureTable::builtin().get(name, n); }

}  // namespace qmf::oracle
