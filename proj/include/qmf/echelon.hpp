#pragma once

// Incremental exact echelonization of truncated q-series, remembering how each
// echelon row is combined from the inserted series.

#include <qmf/linalg.hpp>
#include <qmf/qseries.hpp>

#include <optional>
#include <stdexcept>
#include <vector>

namespace qmf {

class SeriesEchelon {
 public:
  explicit SeriesEchelon(int prec) : prec_(prec) {}

  int prec() const { return prec_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  int inputs() const { return inputs_; }
  const std::vector<int>& pivots() const { return pivots_; }
  /// Echelon row i: coefficient 1 at pivot i and 0 at the other pivots.
  const QSeries& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }
  /// Row i as a combination of the inserted series.
  const std::vector<FieldElement>& combination(int i) const { return combos_[static_cast<std::size_t>(i)]; }

  /// Inserts s (truncated to the working precision); returns false when s is
  /// dependent on what was inserted before.
  bool add(const QSeries& s) {
    if (s.prec() < prec_)
      throw std::out_of_range("series precision " + std::to_string(s.prec()) + " below working precision " +
                              std::to_string(prec_));
    const int id = inputs_++;
    for (auto& c : combos_) c.resize(static_cast<std::size_t>(inputs_), FieldElement(0));
    QSeries v = s.truncate(prec_);
    std::vector<FieldElement> combo(static_cast<std::size_t>(inputs_), FieldElement(0));
    combo[static_cast<std::size_t>(id)] = FieldElement(1);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const FieldElement c = v.coeff(pivots_[i]);
      if (c.is_zero()) continue;
      v -= rows_[i].scaled(c);
      for (std::size_t j = 0; j < combo.size(); ++j)
        if (!combos_[i][j].is_zero()) combo[j] -= c * combos_[i][j];
    }
    const int piv = v.valuation();
    if (piv < 0) return false;
    const FieldElement inv = FieldElement(1) / v.coeff(piv);
    v = v.scaled(inv);
    for (auto& x : combo) x *= inv;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const FieldElement c = rows_[i].coeff(piv);
      if (c.is_zero()) continue;
      rows_[i] -= v.scaled(c);
      for (std::size_t j = 0; j < combo.size(); ++j) combos_[i][j] -= c * combo[j];
    }
    std::size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < piv) ++pos;
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
    combos_.insert(combos_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(combo));
    pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), piv);
    return true;
  }

  /// Coordinates of s in the echelon rows, checked on every exponent up to
  /// min(prec, s.prec()). Returns nullopt and the first failing exponent when s
  /// is outside the span.
  std::optional<std::vector<FieldElement>> coordinates(const QSeries& s, int* first_bad = nullptr) const {
    const int p = std::min(prec_, s.prec());
    for (int pv : pivots_)
      if (pv > p) throw std::out_of_range("series too short to read echelon pivots");
    std::vector<FieldElement> c(rows_.size());
    QSeries v = s.truncate(p);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      c[i] = s.coeff(pivots_[i]);
      if (!c[i].is_zero()) v -= rows_[i].truncate(p).scaled(c[i]);
    }
    const int bad = v.valuation();
    if (first_bad) *first_bad = bad;
    if (bad >= 0) return std::nullopt;
    return c;
  }

  /// Converts echelon coordinates into coefficients on the inserted series.
  std::vector<FieldElement> input_combination(const std::vector<FieldElement>& coords) const {
    std::vector<FieldElement> out(static_cast<std::size_t>(inputs_), FieldElement(0));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (coords[i].is_zero()) continue;
      for (std::size_t j = 0; j < out.size(); ++j)
        if (!combos_[i][j].is_zero()) out[j] += coords[i] * combos_[i][j];
    }
    return out;
  }

  /// Combination of the echelon rows with the given coefficients.
  QSeries combine(const std::vector<FieldElement>& coords) const {
    QSeries r(prec_);
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (!coords[i].is_zero()) r += rows_[i].scaled(coords[i]);
    return r;
  }

 private:
  int prec_;
  int inputs_ = 0;
  std::vector<QSeries> rows_;
  std::vector<std::vector<FieldElement>> combos_;
  std::vector<int> pivots_;
};

}  // namespace qmf
