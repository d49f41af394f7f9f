#pragma once

#include <optional>

#include "spin7/metric.hpp"

namespace spin7 {

/// All curvature data of a metric at one point, computed analytically from
/// the order-2 jets of the metric coefficients (no finite differences).
struct CurvatureSample {
  Point point;
  int n;
  std::vector<double> christoffel;  // Γ^k_{ij}, index k*n*n + i*n + j
  std::vector<double> riemann;      // R_{ijkl} lowered, i*n³ + j*n² + k*n + l
  Eigen::MatrixXd ricci;
  double scalar;

  double Gamma(int k, int i, int j) const {
    return christoffel[(k * n + i) * n + j];
  }
  double R(int i, int j, int k, int l) const {
    return riemann[((i * n + j) * n + k) * n + l];
  }
};

/// Levi-Civita curvature at p. Conventions:
///   Γ^k_{ij} = ½ g^{kl}(∂_i g_{lj} + ∂_j g_{li} − ∂_l g_{ij})
///   R^l_{kij} = ∂_i Γ^l_{jk} − ∂_j Γ^l_{ik} + Γ^l_{im}Γ^m_{jk} − Γ^l_{jm}Γ^m_{ik}
///   R_{lkij} = g_{lm} R^m_{kij},  Ric_{kj} = R^i_{kij},  S = g^{kj} Ric_{kj}
/// (so the unit round sphere has positive scalar curvature).
inline CurvatureSample curvatureAt(const MetricField& g, const Point& p) {
  const int n = g.chart().dim();
  JetMat gm = g.eval(p);

  Eigen::MatrixXd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = gm(i, j).value;
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success)
    throw EvaluationError("metric not positive definite at curvature point");
  Eigen::MatrixXd Ginv = llt.solve(Eigen::MatrixXd::Identity(n, n));

  // dG[m](i,j) = ∂_m g_ij ; ddG[(m,q)](i,j) = ∂_m ∂_q g_ij
  std::vector<Eigen::MatrixXd> dG(n, Eigen::MatrixXd(n, n));
  std::vector<Eigen::MatrixXd> ddG(n * n, Eigen::MatrixXd(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (gm(i, j).order < 2)
        throw EvaluationError(
            "metric coefficient jet order too low for curvature");
      for (int m = 0; m < n; ++m) {
        dG[m](i, j) = gm(i, j).grad[m];
        for (int q = 0; q < n; ++q) ddG[m * n + q](i, j) = gm(i, j).hess(m, q);
      }
    }

  CurvatureSample out{p, n, std::vector<double>(n * n * n, 0.0),
                      std::vector<double>(n * n * n * n, 0.0),
                      Eigen::MatrixXd::Zero(n, n), 0.0};

  auto Gam = [&](int k, int i, int j) -> double& {
    return out.christoffel[(k * n + i) * n + j];
  };
  // Γ_{lij} (first kind), then raise.
  std::vector<double> gam1(n * n * n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        gam1[(l * n + i) * n + j] =
            0.5 * (dG[i](l, j) + dG[j](l, i) - dG[l](i, j));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = 0.0;
        for (int l = 0; l < n; ++l) v += Ginv(k, l) * gam1[(l * n + i) * n + j];
        Gam(k, i, j) = v;
      }

  // ∂_m Γ^k_{ij} = ∂_m (g^{kl}) Γ_{lij} + g^{kl} ∂_m Γ_{lij},
  // with ∂_m g^{kl} = −g^{ka} ∂_m g_{ab} g^{bl}.
  std::vector<double> dGam(n * n * n * n);
  for (int m = 0; m < n; ++m) {
    Eigen::MatrixXd dGinv = -Ginv * dG[m] * Ginv;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = 0.0;
          for (int l = 0; l < n; ++l) {
            double dgam1 = 0.5 * (ddG[i * n + m](l, j) + ddG[j * n + m](l, i) -
                                  ddG[l * n + m](i, j));
            v += dGinv(k, l) * gam1[(l * n + i) * n + j] + Ginv(k, l) * dgam1;
          }
          dGam[((m * n + k) * n + i) * n + j] = v;
        }
  }

  // R^l_{kij}, then lower the first index.
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = dGam[((i * n + l) * n + j) * n + k] -
                     dGam[((j * n + l) * n + i) * n + k];
          for (int m = 0; m < n; ++m)
            v += Gam(l, i, m) * Gam(m, j, k) - Gam(l, j, m) * Gam(m, i, k);
          // accumulate lowered R_{akij} = g_{al} R^l_{kij}
          for (int a = 0; a < n; ++a)
            out.riemann[((a * n + k) * n + i) * n + j] += G(a, l) * v;
        }

  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a)
          v += Ginv(i, a) * out.R(a, k, i, j);
      out.ricci(k, j) = v;
    }
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) out.scalar += Ginv(k, j) * out.ricci(k, j);
  return out;
}

/// The curvature operator on Λ² at p in a g-orthonormal frame (Cholesky
/// frame), as a symmetric N×N matrix with N = n(n−1)/2 and basis e_a∧e_b,
/// a < b in lexicographic order.
inline Eigen::MatrixXd curvatureOperatorMatrix(const MetricField& g,
                                               const Point& p) {
  CurvatureSample cs = curvatureAt(g, p);
  const int n = cs.n;
  Eigen::LLT<Eigen::MatrixXd> llt = g.cholesky(p);
  Eigen::MatrixXd L = llt.matrixL();
  // Orthonormal frame vectors as columns of E = L^{-T}: Eᵀ g E = I.
  Eigen::MatrixXd E =
      L.transpose().triangularView<Eigen::Upper>().solve(
          Eigen::MatrixXd::Identity(n, n));

  // R̂_{abcd} = R_{ijkl} E^i_a E^j_b E^k_c E^l_d via successive contraction.
  std::vector<double> t1(n * n * n * n, 0.0), t2(n * n * n * n, 0.0);
  auto idx = [n](int i, int j, int k, int l) {
    return ((i * n + j) * n + k) * n + l;
  };
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = 0.0;
          for (int i = 0; i < n; ++i) v += cs.riemann[idx(i, j, k, l)] * E(i, a);
          t1[idx(a, j, k, l)] = v;
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = 0.0;
          for (int j = 0; j < n; ++j) v += t1[idx(a, j, k, l)] * E(j, b);
          t2[idx(a, b, k, l)] = v;
        }
  std::fill(t1.begin(), t1.end(), 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int l = 0; l < n; ++l) {
          double v = 0.0;
          for (int k = 0; k < n; ++k) v += t2[idx(a, b, k, l)] * E(k, c);
          t1[idx(a, b, c, l)] = v;
        }
  const int N = n * (n - 1) / 2;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) {
      auto [a, b] = pairs[r];
      auto [cc, dd] = pairs[c];
      double v = 0.0;
      for (int l = 0; l < n; ++l) v += t1[idx(a, b, cc, l)] * E(l, dd);
      M(r, c) = v;
    }
  return M;
}

struct HolonomyCertificate {
  int operator_rank = 0;
  std::vector<double> singular_values;
  double gap_ratio = std::numeric_limits<double>::infinity();
  bool certified = false;  // false => inconclusive
};

/// Rank certificate for the curvature operator over the given points. The
/// operator image at each point lies in the holonomy algebra expressed in
/// that point's orthonormal frame; frames at different points are not
/// aligned, so ranks are certified per point (SVD, relative threshold
/// 1e-8·σ_max) and then required to agree. Naively stacking operators from
/// different points would sum differently-embedded copies of the holonomy
/// algebra and overestimate the rank. The certificate is accepted when all
/// per-point ranks coincide and every spectral gap at the cut exceeds 1e6;
/// the reported singular values are those of the worst-gap point.
inline HolonomyCertificate curvatureOperatorRank(
    const MetricField& g, const std::vector<Point>& points,
    double rel_threshold = 1e-8, double required_gap = 1e6) {
  if (points.empty()) throw std::invalid_argument("need at least one point");

  HolonomyCertificate cert;
  cert.certified = true;
  bool first = true;
  for (const Point& p : points) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(curvatureOperatorMatrix(g, p));
    Eigen::VectorXd sv = svd.singularValues();
    double smax = sv.size() ? sv[0] : 0.0;
    int rank = 0;
    double gap = std::numeric_limits<double>::infinity();
    if (smax > 0.0) {
      double cut = rel_threshold * smax;
      while (rank < sv.size() && sv[rank] > cut) ++rank;
      double kept = (rank > 0) ? sv[rank - 1] : smax;
      double dropped = (rank < sv.size()) ? sv[rank] : 0.0;
      gap = (dropped > 0.0) ? kept / dropped
                            : std::numeric_limits<double>::infinity();
    }
    if (first || gap < cert.gap_ratio) {
      cert.gap_ratio = gap;
      cert.singular_values.assign(sv.data(), sv.data() + sv.size());
    }
    if (first) {
      cert.operator_rank = rank;
    } else if (rank != cert.operator_rank) {
      cert.operator_rank = std::max(cert.operator_rank, rank);
      cert.certified = false;  // points disagree: inconclusive
    }
    first = false;
  }
  cert.certified = cert.certified && cert.gap_ratio > required_gap;
  return cert;
}

/// Kähler Ricci form at p: ρ(X, Y) = Ric(JX, Y), returned as the
/// antisymmetric matrix ρ_{ij} = Σ_k J_{ki} Ric_{kj}.
inline Eigen::MatrixXd ricciForm(const MetricField& g, const FieldMatrix& J,
                                 const Point& p) {
  CurvatureSample cs = curvatureAt(g, p);
  const int n = cs.n;
  JetMat Jm = J.eval(p);
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) rho(i, j) += Jm(k, i).value * cs.ricci(k, j);
  return rho;
}

/// Residual of the Kähler Ricci-form identity ρ = −½ dd^c f with
/// f = ln(H s^{2/3}) (the sign is pinned by this module's convention test:
/// with d^c β(·) = β(J·) one has i∂∂̄ = −½ dd^c on functions).
inline double kahlerRicciResidualAt(const MetricField& g, const FieldMatrix& J,
                                    const ScalarField& f, const Point& p) {
  Eigen::MatrixXd rho = ricciForm(g, J, p);
  DifferentialForm ddc = exteriorDerivative(dc(DifferentialForm::fromField(f), J));
  const int n = g.chart().dim();
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [idx, c] : ddc.coeffs()) {
    double v = c(p).value;
    rhs(idx[0], idx[1]) = -0.5 * v;
    rhs(idx[1], idx[0]) = 0.5 * v;
  }
  return (rho - rhs).cwiseAbs().maxCoeff();
}

}  // namespace spin7
