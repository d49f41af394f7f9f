#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "spin7/scalar_field.hpp"

namespace spin7 {

using MultiIndex = std::vector<int>;

namespace detail {
/// Sort an index list in place; returns the sign of the sorting permutation,
/// or 0 if an index repeats.
inline int sortSign(MultiIndex& idx) {
  int sign = 1;
  for (size_t i = 1; i < idx.size(); ++i)
    for (size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  return sign;
}

/// Sign of the permutation taking the concatenation (a, b) — both strictly
/// increasing and disjoint — to sorted order.
inline int mergeSign(const MultiIndex& a, const MultiIndex& b) {
  int inversions = 0;
  for (int x : a)
    for (int y : b)
      if (x > y) ++inversions;
  return (inversions % 2 == 0) ? 1 : -1;
}

inline MultiIndex complement(const MultiIndex& idx, int n) {
  MultiIndex c;
  size_t k = 0;
  for (int i = 0; i < n; ++i) {
    if (k < idx.size() && idx[k] == i)
      ++k;
    else
      c.push_back(i);
  }
  return c;
}

inline void forEachSortedIndex(int n, int k,
                               const std::function<void(const MultiIndex&)>& f) {
  MultiIndex idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k == 0) {
    f(idx);
    return;
  }
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}
}  // namespace detail

/// A vector field on a chart: one component ScalarField per coordinate.
class VectorField {
 public:
  VectorField(Chart chart, std::vector<ScalarField> components)
      : chart_(std::move(chart)), comps_(std::move(components)) {
    if (static_cast<int>(comps_.size()) != chart_.dim())
      throw std::invalid_argument("component count does not match chart dim");
  }

  static VectorField coordinateBasis(const Chart& c, int i) {
    std::vector<ScalarField> comps;
    for (int j = 0; j < c.dim(); ++j)
      comps.push_back(ScalarField::constant(c, j == i ? 1.0 : 0.0));
    return VectorField(c, std::move(comps));
  }

  static VectorField constant(const Chart& c, const Eigen::VectorXd& v) {
    std::vector<ScalarField> comps;
    for (int j = 0; j < c.dim(); ++j)
      comps.push_back(ScalarField::constant(c, v[j]));
    return VectorField(c, std::move(comps));
  }

  const Chart& chart() const { return chart_; }
  const ScalarField& component(int i) const { return comps_[i]; }

 private:
  Chart chart_;
  std::vector<ScalarField> comps_;
};

/// A degree-k differential form: map from strictly increasing multi-indices
/// to ScalarField coefficients. Absent indices mean zero.
class DifferentialForm {
 public:
  DifferentialForm(Chart chart, int degree)
      : chart_(std::move(chart)), degree_(degree) {
    if (degree_ < 0 || degree_ > chart_.dim())
      throw std::invalid_argument("form degree out of range 0..dim");
  }

  static DifferentialForm fromField(const ScalarField& f) {
    DifferentialForm a(f.chart(), 0);
    a.coeffs_[{}] = f;
    return a;
  }

  /// The coordinate 1-form dx_i.
  static DifferentialForm dx(const Chart& c, int i) {
    DifferentialForm a(c, 1);
    a.coeffs_[{i}] = ScalarField::constant(c, 1.0);
    return a;
  }

  const Chart& chart() const { return chart_; }
  int degree() const { return degree_; }
  const std::map<MultiIndex, ScalarField>& coeffs() const { return coeffs_; }

  /// Add `f · dx_idx` (idx in any order; the permutation sign is absorbed).
  void addTerm(MultiIndex idx, const ScalarField& f) {
    if (static_cast<int>(idx.size()) != degree_)
      throw std::invalid_argument("term index length != form degree");
    for (int i : idx)
      if (i < 0 || i >= chart_.dim())
        throw std::invalid_argument("form index out of range");
    int sign = detail::sortSign(idx);
    if (sign == 0) return;
    ScalarField term = (sign > 0) ? f : -f;
    auto it = coeffs_.find(idx);
    if (it == coeffs_.end())
      coeffs_[idx] = term;
    else
      it->second = it->second + term;
  }

  /// Coefficient of the sorted index (zero field if absent).
  ScalarField coeff(const MultiIndex& idx) const {
    auto it = coeffs_.find(idx);
    if (it != coeffs_.end()) return it->second;
    return ScalarField::constant(chart_, 0.0);
  }

  /// Evaluate every stored coefficient at a point.
  std::map<MultiIndex, Jet2> eval(const Point& p) const {
    std::map<MultiIndex, Jet2> out;
    for (const auto& [idx, f] : coeffs_) out[idx] = f(p);
    return out;
  }

  double maxAbsCoeff(const Point& p) const {
    double m = 0.0;
    for (const auto& [idx, f] : coeffs_) m = std::max(m, std::abs(f(p).value));
    return m;
  }

  friend DifferentialForm operator+(const DifferentialForm& a,
                                    const DifferentialForm& b) {
    a.requireCompatible(b);
    DifferentialForm r = a;
    for (const auto& [idx, f] : b.coeffs_) {
      auto it = r.coeffs_.find(idx);
      if (it == r.coeffs_.end())
        r.coeffs_[idx] = f;
      else
        it->second = it->second + f;
    }
    return r;
  }

  friend DifferentialForm operator-(const DifferentialForm& a,
                                    const DifferentialForm& b) {
    return a + (-1.0) * b;
  }

  friend DifferentialForm operator*(const ScalarField& f,
                                    const DifferentialForm& a) {
    DifferentialForm r(a.chart_, a.degree_);
    for (const auto& [idx, c] : a.coeffs_) r.coeffs_[idx] = f * c;
    return r;
  }
  friend DifferentialForm operator*(double c, const DifferentialForm& a) {
    return ScalarField::constant(a.chart_, c) * a;
  }
  friend DifferentialForm operator*(const DifferentialForm& a, double c) {
    return c * a;
  }
  friend DifferentialForm operator-(const DifferentialForm& a) {
    return (-1.0) * a;
  }

  void requireCompatible(const DifferentialForm& b) const {
    if (!chart_.same(b.chart_))
      throw ChartMismatch("forms live on different charts");
    if (degree_ != b.degree_)
      throw std::invalid_argument("form degrees differ");
  }

 private:
  Chart chart_;
  int degree_;
  std::map<MultiIndex, ScalarField> coeffs_;
};

inline DifferentialForm wedge(const DifferentialForm& a,
                              const DifferentialForm& b) {
  if (!a.chart().same(b.chart()))
    throw ChartMismatch("wedge of forms on different charts");
  int deg = a.degree() + b.degree();
  if (deg > a.chart().dim())
    throw std::invalid_argument("wedge degree exceeds chart dimension");
  DifferentialForm r(a.chart(), deg);
  for (const auto& [ia, fa] : a.coeffs())
    for (const auto& [ib, fb] : b.coeffs()) {
      MultiIndex idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      r.addTerm(std::move(idx), fa * fb);
    }
  return r;
}

inline DifferentialForm wedge(const DifferentialForm& a,
                              const DifferentialForm& b,
                              const DifferentialForm& c) {
  return wedge(wedge(a, b), c);
}

inline DifferentialForm exteriorDerivative(const DifferentialForm& a) {
  DifferentialForm r(a.chart(), a.degree() + 1);
  for (const auto& [idx, f] : a.coeffs())
    for (int i = 0; i < a.chart().dim(); ++i) {
      MultiIndex j = idx;
      j.insert(j.begin(), i);
      r.addTerm(std::move(j), f.partial(i));
    }
  return r;
}

inline DifferentialForm interiorProduct(const VectorField& X,
                                        const DifferentialForm& a) {
  if (!X.chart().same(a.chart()))
    throw ChartMismatch("interior product across charts");
  if (a.degree() < 1)
    throw std::invalid_argument("interior product needs degree >= 1");
  DifferentialForm r(a.chart(), a.degree() - 1);
  for (const auto& [idx, f] : a.coeffs())
    for (size_t pos = 0; pos < idx.size(); ++pos) {
      MultiIndex rest;
      for (size_t q = 0; q < idx.size(); ++q)
        if (q != pos) rest.push_back(idx[q]);
      ScalarField term = X.component(idx[pos]) * f;
      r.addTerm(std::move(rest), (pos % 2 == 0) ? term : -term);
    }
  return r;
}

}  // namespace spin7
