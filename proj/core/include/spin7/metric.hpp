#pragma once

#include <mutex>
#include <optional>
#include <utility>

#include "spin7/forms.hpp"
#include "spin7/jet_linalg.hpp"

namespace spin7 {

/// A matrix of ScalarFields on one chart (endomorphism-valued field). Houses
/// almost-complex structures J and general frame matrices.
class FieldMatrix {
 public:
  FieldMatrix(Chart chart, int rows, int cols)
      : chart_(std::move(chart)), rows_(rows), cols_(cols) {
    entries_.reserve(rows_ * cols_);
    for (int k = 0; k < rows_ * cols_; ++k)
      entries_.push_back(ScalarField::constant(chart_, 0.0));
  }

  static FieldMatrix identity(const Chart& c, int n) {
    FieldMatrix m(c, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = ScalarField::constant(c, 1.0);
    return m;
  }

  const Chart& chart() const { return chart_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  ScalarField& at(int i, int j) { return entries_[i * cols_ + j]; }
  const ScalarField& at(int i, int j) const { return entries_[i * cols_ + j]; }

  JetMat eval(const Point& p) const {
    JetMat m(rows_, cols_, p.dim());
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(i, j) = at(i, j)(p);
    return m;
  }

 private:
  Chart chart_;
  int rows_, cols_;
  std::vector<ScalarField> entries_;
};

/// A Riemannian metric: symmetric matrix of ScalarFields with a declared
/// orientation relative to the coordinate volume form dx_0 ∧ ... ∧ dx_{n-1}.
class MetricField {
 public:
  explicit MetricField(FieldMatrix g, int orientation = +1)
      : g_(std::move(g)), orientation_(orientation) {
    if (g_.rows() != g_.chart().dim() || g_.cols() != g_.chart().dim())
      throw std::invalid_argument("metric must be dim x dim");
    if (orientation_ != 1 && orientation_ != -1)
      throw std::invalid_argument("orientation must be +1 or -1");
  }

  static MetricField euclidean(const Chart& c) {
    return MetricField(FieldMatrix::identity(c, c.dim()));
  }

  /// Sum of squares of 1-forms: g = Σ coeff_k (e_k ⊗ e_k). Every printed
  /// metric in scope is presented this way.
  static MetricField fromCoframeSquares(
      const Chart& c,
      const std::vector<std::pair<ScalarField, DifferentialForm>>& terms,
      int orientation = +1) {
    FieldMatrix g(c, c.dim(), c.dim());
    for (const auto& [w, e] : terms) {
      if (e.degree() != 1)
        throw std::invalid_argument("coframe entries must be 1-forms");
      for (int i = 0; i < c.dim(); ++i)
        for (int j = 0; j < c.dim(); ++j) {
          ScalarField ei = e.coeff({i}), ej = e.coeff({j});
          g.at(i, j) = g.at(i, j) + w * ei * ej;
        }
    }
    return MetricField(std::move(g), orientation);
  }

  const Chart& chart() const { return g_.chart(); }
  int orientation() const { return orientation_; }
  const FieldMatrix& matrix() const { return g_; }
  ScalarField& at(int i, int j) { return g_.at(i, j); }
  const ScalarField& at(int i, int j) const { return g_.at(i, j); }

  JetMat eval(const Point& p) const { return g_.eval(p); }

  /// Pointwise value matrix (no derivatives), with a positivity check.
  Eigen::MatrixXd valueMatrix(const Point& p) const {
    int n = chart().dim();
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = at(i, j)(p).value;
    return m;
  }

  Eigen::LLT<Eigen::MatrixXd> cholesky(const Point& p) const {
    Eigen::LLT<Eigen::MatrixXd> llt(valueMatrix(p));
    if (llt.info() != Eigen::Success)
      throw EvaluationError("metric not positive definite at sampled point");
    return llt;
  }

 private:
  FieldMatrix g_;
  int orientation_;
};

/// Hodge star, computed pointwise from the metric inverse and Gram expansion:
/// (*a)_K = orient · √det g · sign(comp(K),K) · Σ_I det(g⁻¹[comp(K), I]) a_I.
/// Coefficients are fromFunction fields evaluated in Jet2 arithmetic, so the
/// starred form can be exterior-differentiated once more.
inline DifferentialForm hodgeStar(const DifferentialForm& a,
                                  const MetricField& g) {
  if (!a.chart().same(g.chart()))
    throw ChartMismatch("hodge star across charts");
  const Chart c = a.chart();
  const int n = c.dim();
  const int k = a.degree();
  DifferentialForm r(c, n - k);

  // Capture the coefficient list once; each output coefficient shares it.
  auto coeffs = std::make_shared<std::vector<std::pair<MultiIndex, ScalarField>>>();
  for (const auto& [idx, f] : a.coeffs()) coeffs->emplace_back(idx, f);
  auto metric = std::make_shared<MetricField>(g);

  detail::forEachSortedIndex(n, n - k, [&](const MultiIndex& K) {
    MultiIndex I0 = detail::complement(K, n);
    int sgn = detail::mergeSign(I0, K);
    ScalarField coeffK = ScalarField::fromFunction(
        c, [coeffs, metric, I0, K, sgn, k, n](const Point& p) -> Jet2 {
          JetMat gm = metric->eval(p);
          Jet2 det = jetDet(gm);
          if (det.value <= 0.0)
            throw EvaluationError("metric not positive definite (det <= 0)");
          JetMat ginv = jetInverse(gm);
          Jet2 sum = Jet2::constant(p.dim(), 0.0);
          for (const auto& [I, f] : *coeffs) {
            // det of the k x k submatrix ginv[I0, I]
            JetMat sub(k, k, p.dim());
            for (int r2 = 0; r2 < k; ++r2)
              for (int c2 = 0; c2 < k; ++c2) sub(r2, c2) = ginv(I0[r2], I[c2]);
            Jet2 d = (k == 0) ? Jet2::constant(p.dim(), 1.0) : jetDet(sub);
            sum = sum + d * f(p);
          }
          (void)n;
          return static_cast<double>(sgn) * sqrt(det) * sum;
        });
    if (metric->orientation() < 0) coeffK = -coeffK;
    r.addTerm(K, coeffK);
  });
  return r;
}

/// Riemannian volume form orient · √det g · dx_0∧...∧dx_{n-1}.
inline DifferentialForm volumeForm(const MetricField& g) {
  const Chart c = g.chart();
  auto metric = std::make_shared<MetricField>(g);
  ScalarField vol = ScalarField::fromFunction(c, [metric](const Point& p) {
    Jet2 det = jetDet(metric->eval(p));
    if (det.value <= 0.0)
      throw EvaluationError("metric not positive definite (det <= 0)");
    return sqrt(det);
  });
  if (g.orientation() < 0) vol = -vol;
  MultiIndex all(c.dim());
  for (int i = 0; i < c.dim(); ++i) all[i] = i;
  DifferentialForm r(c, c.dim());
  r.addTerm(all, vol);
  return r;
}

/// Apply an almost-complex structure J to a form under the convention
/// (Jβ)(X_1, ..., X_k) = β(J X_1, ..., J X_k), i.e.
/// (Jβ)_{i_1...i_k} = Σ β_{j_1...j_k} J_{j_1 i_1} ... J_{j_k i_k}.
inline DifferentialForm applyJ(const FieldMatrix& J,
                               const DifferentialForm& a) {
  if (!J.chart().same(a.chart()))
    throw ChartMismatch("applyJ across charts");
  const Chart c = a.chart();
  const int n = c.dim();
  const int k = a.degree();
  if (k == 0) return a;

  auto coeffs = std::make_shared<std::vector<std::pair<MultiIndex, ScalarField>>>();
  for (const auto& [idx, f] : a.coeffs()) coeffs->emplace_back(idx, f);
  auto Jp = std::make_shared<FieldMatrix>(J);

  DifferentialForm r(c, k);
  detail::forEachSortedIndex(n, k, [&](const MultiIndex& K) {
    r.addTerm(K, ScalarField::fromFunction(c, [coeffs, Jp, K, k](const Point& p) {
      JetMat Jm = Jp->eval(p);
      Jet2 sum = Jet2::constant(p.dim(), 0.0);
      for (const auto& [I, f] : *coeffs) {
        // β antisymmetrized over all assignments: sum over permutations of I
        // matched to slots of K via det of the J submatrix J[I, K].
        JetMat sub(k, k, p.dim());
        for (int r2 = 0; r2 < k; ++r2)
          for (int c2 = 0; c2 < k; ++c2) sub(r2, c2) = Jm(I[r2], K[c2]);
        sum = sum + jetDet(sub) * f(p);
      }
      return sum;
    }));
  });
  return r;
}

/// d^c := J ∘ d with (Jβ)(·) = β(J·). Defined here for forms of any degree;
/// in scope it is used on degrees 0 and 1.
inline DifferentialForm dc(const DifferentialForm& a, const FieldMatrix& J) {
  return applyJ(J, exteriorDerivative(a));
}

/// Build the almost-complex structure determined by a (1,0)-coframe:
/// given complex 1-forms ζ_m = A_m + iB_m spanning Λ^{1,0}, J is fixed by
/// ζ_m(J X) = i ζ_m(X), i.e. A_m∘J = −B_m, B_m∘J = A_m. With C the stacked
/// coefficient matrix of (A_1, B_1, ..., A_k, B_k) and D the stack of
/// (−B_1, A_1, ...), J solves C·J = D pointwise.
inline FieldMatrix complexStructureFromCoframe(
    const std::vector<std::pair<DifferentialForm, DifferentialForm>>& zeta) {
  if (zeta.empty()) throw std::invalid_argument("empty coframe");
  const Chart c = zeta[0].first.chart();
  const int n = c.dim();
  if (static_cast<int>(zeta.size()) * 2 != n)
    throw std::invalid_argument("coframe must contain dim/2 complex 1-forms");
  auto rows = std::make_shared<std::vector<std::vector<ScalarField>>>();
  auto rhs = std::make_shared<std::vector<std::vector<ScalarField>>>();
  for (const auto& [A, B] : zeta) {
    std::vector<ScalarField> ra, rb, da, db;
    for (int j = 0; j < n; ++j) {
      ra.push_back(A.coeff({j}));
      rb.push_back(B.coeff({j}));
      da.push_back(-B.coeff({j}));
      db.push_back(A.coeff({j}));
    }
    rows->push_back(std::move(ra));
    rows->push_back(std::move(rb));
    rhs->push_back(std::move(da));
    rhs->push_back(std::move(db));
  }
  // Memoize the solved matrix per evaluation point: callers typically read
  // all n² entries at the same point (metric assembly, curvature), and the
  // linear solve dominates the cost.
  struct Memo {
    std::mutex mu;
    Eigen::VectorXd key;
    std::optional<JetMat> value;
  };
  auto memo = std::make_shared<Memo>();
  FieldMatrix J(c, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      J.at(i, j) = ScalarField::fromFunction(
          c, [rows, rhs, memo, i, j, n](const Point& p) {
            std::lock_guard<std::mutex> lock(memo->mu);
            if (!memo->value || memo->key.size() != p.coords().size() ||
                memo->key != p.coords()) {
              JetMat C(n, n, p.dim()), D(n, n, p.dim());
              for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s) {
                  C(r, s) = (*rows)[r][s](p);
                  D(r, s) = (*rhs)[r][s](p);
                }
              memo->value = jetSolve(std::move(C), std::move(D));
              memo->key = p.coords();
            }
            return (*memo->value)(i, j);
          });
  return J;
}

/// Metric of a compatible pair (ω, J): g(X, Y) = ω(X, JY).
inline MetricField metricFromOmegaJ(const DifferentialForm& omega,
                                    const FieldMatrix& J,
                                    int orientation = +1) {
  const Chart c = omega.chart();
  const int n = c.dim();
  auto om = std::make_shared<DifferentialForm>(omega);
  auto Jp = std::make_shared<FieldMatrix>(J);
  FieldMatrix g(c, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g.at(i, j) = ScalarField::fromFunction(c, [om, Jp, i, j, n](const Point& p) {
        JetMat Jm = Jp->eval(p);
        // ω_{ik} as an antisymmetric Jet2 matrix
        JetMat W(n, n, p.dim());
        for (const auto& [idx, f] : om->coeffs()) {
          Jet2 v = f(p);
          W(idx[0], idx[1]) = v;
          W(idx[1], idx[0]) = -v;
        }
        Jet2 s = Jet2::constant(p.dim(), 0.0);
        for (int k2 = 0; k2 < n; ++k2) s = s + W(i, k2) * Jm(k2, j);
        return s;
      });
  return MetricField(std::move(g), orientation);
}

}  // namespace spin7
