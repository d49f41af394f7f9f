#pragma once

#include <optional>

#include "spin7/metric.hpp"
#include "spin7/pullback.hpp"

namespace spin7 {

/// SU(3)-structure data (ω, Ω = Ω⁺ + iΩ⁻, J, g_ω). The forms may live on a
/// 6-chart or be pulled back to a larger chart (with J extended by zero on
/// the extra directions); the wedge identities are insensitive to this.
struct SU3Structure {
  Chart chart;
  DifferentialForm omega;
  DifferentialForm omega_plus;
  DifferentialForm omega_minus;
  FieldMatrix J;
  MetricField metric;
};

struct G2Structure {
  Chart chart;
  DifferentialForm phi;
  MetricField metric;
  DifferentialForm star_phi;  // cached *_φ φ
};

struct Spin7Structure {
  Chart chart;
  DifferentialForm Phi;
  MetricField metric;
};

/// Reduction data on the total 8-chart: Φ is assembled from (η, ξ, ω, Ω±)
/// and the positive functions s, H.
struct ReductionData {
  Chart chart;
  ScalarField s;
  ScalarField H;
  DifferentialForm eta;
  DifferentialForm xi;
  SU3Structure su3;
};

/// Thrown when an assembled structure violates one of its defining
/// identities at a sampled point.
struct AssemblyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {
inline DifferentialForm constantTerm(const Chart& c, MultiIndex idx,
                                     double coeff) {
  DifferentialForm f(c, static_cast<int>(idx.size()));
  f.addTerm(std::move(idx), ScalarField::constant(c, coeff));
  return f;
}
}  // namespace detail

/// The model 4-form on flat R^8:
/// Φ0 = dx_{0123}+dx_{0145}+dx_{0167}+dx_{0246}−dx_{0257}−dx_{0347}−dx_{0356}
///     +dx_{2345}+dx_{2367}+dx_{4567}−dx_{1247}−dx_{1256}−dx_{1346}+dx_{1357}
inline DifferentialForm modelPhi0(const Chart& c) {
  struct Term {
    int i, j, k, l;
    double sign;
  };
  static const Term terms[14] = {
      {0, 1, 2, 3, +1}, {0, 1, 4, 5, +1}, {0, 1, 6, 7, +1}, {0, 2, 4, 6, +1},
      {0, 2, 5, 7, -1}, {0, 3, 4, 7, -1}, {0, 3, 5, 6, -1}, {2, 3, 4, 5, +1},
      {2, 3, 6, 7, +1}, {4, 5, 6, 7, +1}, {1, 2, 4, 7, -1}, {1, 2, 5, 6, -1},
      {1, 3, 4, 6, -1}, {1, 3, 5, 7, +1}};
  DifferentialForm Phi(c, 4);
  for (const auto& t : terms)
    Phi.addTerm({t.i, t.j, t.k, t.l}, ScalarField::constant(c, t.sign));
  return Phi;
}

inline Spin7Structure modelSpin7() {
  Chart c = Chart::make({"x0", "x1", "x2", "x3", "x4", "x5", "x6", "x7"});
  return Spin7Structure{c, modelPhi0(c), MetricField::euclidean(c)};
}

/// The model G2 3-form φ0 = ∂_{x0} ⌟ Φ0 on flat R^7 (coordinates x1..x7),
/// computed by contraction on the 8-chart and restricted to the slice x0 = 0.
inline G2Structure modelG2() {
  Chart c8 = Chart::make({"x0", "x1", "x2", "x3", "x4", "x5", "x6", "x7"});
  Chart c7 = Chart::make({"x1", "x2", "x3", "x4", "x5", "x6", "x7"});
  DifferentialForm phi8 =
      interiorProduct(VectorField::coordinateBasis(c8, 0), modelPhi0(c8));
  CoordMap inc = CoordMap::byName(c8, c7);
  DifferentialForm phi = pullback(phi8, inc);
  MetricField g = MetricField::euclidean(c7);
  return G2Structure{c7, phi, g, hodgeStar(phi, g)};
}

/// Φ = η ∧ (ξ ∧ ω + H^{3/2} Ω⁺) + s^{4/3} (½ H² ω∧ω − H^{1/2} ξ ∧ Ω⁻)
/// g_Φ = s^{-2} η² + s^{2/3} (H^{-2} ξ² + H g_ω)
///
/// When a calibration point is supplied, the metric's orientation is fixed
/// so that the positively-oriented volume form is a positive multiple of
/// η∧ξ∧ω³ (equivalently Φ∧Φ = +14 vol); otherwise +1 is assumed.
inline Spin7Structure assembleSpin7(
    const ReductionData& d,
    const std::optional<Point>& orient_at = std::nullopt) {
  const Chart& c = d.chart;
  int orientation = +1;
  if (orient_at) {
    DifferentialForm top = wedge(
        d.eta, wedge(d.xi, wedge(d.su3.omega,
                                 wedge(d.su3.omega, d.su3.omega))));
    MultiIndex all(c.dim());
    for (int i = 0; i < c.dim(); ++i) all[i] = i;
    double v = top.coeff(all)(*orient_at).value;
    if (v == 0.0)
      throw AssemblyError("orientation calibration: eta^xi^omega^3 vanishes");
    orientation = (v > 0.0) ? +1 : -1;
  }
  ScalarField H32 = pow(d.H, 1.5);
  ScalarField s43 = pow(d.s, 4.0 / 3.0);
  DifferentialForm Phi =
      wedge(d.eta, wedge(d.xi, d.su3.omega) + H32 * d.su3.omega_plus) +
      ScalarField(s43) *
          ((0.5 * pow(d.H, 2.0)) * wedge(d.su3.omega, d.su3.omega) -
           pow(d.H, 0.5) * wedge(d.xi, d.su3.omega_minus));

  FieldMatrix g(c, c.dim(), c.dim());
  ScalarField w_eta = pow(d.s, -2.0);
  ScalarField w_xi = pow(d.s, 2.0 / 3.0) * pow(d.H, -2.0);
  ScalarField w_base = pow(d.s, 2.0 / 3.0) * d.H;
  for (int i = 0; i < c.dim(); ++i)
    for (int j = 0; j < c.dim(); ++j) {
      ScalarField v = w_eta * d.eta.coeff({i}) * d.eta.coeff({j}) +
                      w_xi * d.xi.coeff({i}) * d.xi.coeff({j}) +
                      w_base * d.su3.metric.at(i, j);
      g.at(i, j) = v;
    }
  return Spin7Structure{c, Phi, MetricField(std::move(g), orientation)};
}

/// φ = ξ ∧ ω + H^{3/2} Ω⁺ with g_φ = H^{-2} ξ² + H g_ω
inline G2Structure assembleG2(const DifferentialForm& xi,
                              const SU3Structure& su3, const ScalarField& H,
                              int orientation = +1) {
  const Chart& c = xi.chart();
  DifferentialForm phi = wedge(xi, su3.omega) + pow(H, 1.5) * su3.omega_plus;
  FieldMatrix g(c, c.dim(), c.dim());
  ScalarField w_xi = pow(H, -2.0);
  for (int i = 0; i < c.dim(); ++i)
    for (int j = 0; j < c.dim(); ++j)
      g.at(i, j) = w_xi * xi.coeff({i}) * xi.coeff({j}) + H * su3.metric.at(i, j);
  MetricField gm(std::move(g), orientation);
  return G2Structure{c, phi, gm, hodgeStar(phi, gm)};
}

/// Λβ, defined by β ∧ ω² = (Λβ/3) ω³ for a 2-form β in the ω-span (so Λω = 3).
/// Computed pointwise as the ratio of the two 6-forms at the index where ω³
/// is largest.
inline ScalarField lambdaOmega(const DifferentialForm& beta,
                               const DifferentialForm& omega) {
  auto num = std::make_shared<DifferentialForm>(wedge(beta, wedge(omega, omega)));
  auto den = std::make_shared<DifferentialForm>(wedge(omega, wedge(omega, omega)));
  return ScalarField::fromFunction(beta.chart(), [num, den](const Point& p) {
    MultiIndex best;
    double best_abs = 0.0;
    for (const auto& [idx, f] : den->coeffs()) {
      double v = std::abs(f(p).value);
      if (v > best_abs) {
        best_abs = v;
        best = idx;
      }
    }
    if (best_abs == 0.0)
      throw EvaluationError("lambdaOmega: omega^3 vanishes at sampled point");
    return 3.0 * (num->coeff(best)(p) / den->coeff(best)(p));
  });
}

/// The (1,1) part of a 2-form under J: ½(β + Jβ) with (Jβ)(X,Y) = β(JX,JY).
inline DifferentialForm part11(const DifferentialForm& beta,
                               const FieldMatrix& J) {
  return 0.5 * (beta + applyJ(J, beta));
}

/// Primitive (1,1) part: β⁸ = β^{1,1} − (Λβ/3) ω (the Λ²₈ component).
inline DifferentialForm lambda28Part(const DifferentialForm& beta,
                                     const DifferentialForm& omega,
                                     const FieldMatrix& J) {
  return part11(beta, J) - (lambdaOmega(beta, omega) / 3.0) * omega;
}

/// Residuals of the closure system for the reduction ansatz. With
/// π1 = d ln(H^{-1/2} s^{-1/3}), π2 = H^{-3/2}(dξ)²₈, σ2 = s^{-4/3}H^{-1/2}(dη)²₈:
///   r1 = dΩ⁺ − π1∧Ω⁺ + π2∧ω
///   r2 = dΩ⁻ − d^cπ1-potential∧Ω⁺ + σ2∧ω
///   r3 = H^{3/2}dη∧Ω⁺ + ½ d(H²s^{4/3})∧ω² − s^{4/3}H^{1/2} dξ∧Ω⁻
/// plus the two connection 1-forms of the closure lemma.
struct TorsionReport {
  DifferentialForm pi1;
  DifferentialForm alpha_eta;
  DifferentialForm alpha_xi;
  DifferentialForm res1;
  DifferentialForm res2;
  DifferentialForm res3;
  double maxResidualAt(const Point& p) const {
    return std::max({res1.maxAbsCoeff(p), res2.maxAbsCoeff(p),
                     res3.maxAbsCoeff(p)});
  }
};

inline TorsionReport su3Torsion(const ReductionData& d) {
  const SU3Structure& q = d.su3;
  ScalarField lg = log(pow(d.H, -0.5) * pow(d.s, -1.0 / 3.0));
  DifferentialForm dlg = exteriorDerivative(DifferentialForm::fromField(lg));
  DifferentialForm dclg = applyJ(q.J, dlg);
  DifferentialForm dxi = exteriorDerivative(d.xi);
  DifferentialForm deta = exteriorDerivative(d.eta);
  DifferentialForm pi2 =
      pow(d.H, -1.5) * lambda28Part(dxi, q.omega, q.J);
  DifferentialForm sig2 = (pow(d.s, -4.0 / 3.0) * pow(d.H, -0.5)) *
                          lambda28Part(deta, q.omega, q.J);

  DifferentialForm r1 = exteriorDerivative(q.omega_plus) -
                        wedge(dlg, q.omega_plus) + wedge(pi2, q.omega);
  DifferentialForm r2 = exteriorDerivative(q.omega_minus) -
                        wedge(dclg, q.omega_plus) + wedge(sig2, q.omega);
  DifferentialForm ds = exteriorDerivative(DifferentialForm::fromField(d.s));
  DifferentialForm dH = exteriorDerivative(DifferentialForm::fromField(d.H));
  DifferentialForm r3 =
      pow(d.H, 1.5) * wedge(deta, q.omega_plus) +
      0.5 * wedge(exteriorDerivative(DifferentialForm::fromField(
                      pow(d.H, 2.0) * pow(d.s, 4.0 / 3.0))),
                  wedge(q.omega, q.omega)) -
      (pow(d.s, 4.0 / 3.0) * pow(d.H, 0.5)) * wedge(dxi, q.omega_minus);

  // α_η = −J(H^{1/2} s^{1/3} ds) since J² = −1 on the quotient directions;
  // α_ξ = −H^{1/2} dH + (1/3) H^{3/2} s^{-1} ds.
  DifferentialForm alpha_eta =
      -1.0 * applyJ(q.J, (pow(d.H, 0.5) * pow(d.s, 1.0 / 3.0)) * ds);
  DifferentialForm alpha_xi = (-1.0 * pow(d.H, 0.5)) * dH +
                              (pow(d.H, 1.5) * pow(d.s, -1.0) / 3.0) * ds;
  DifferentialForm pi1 = dlg;
  return TorsionReport{std::move(pi1),   std::move(alpha_eta),
                       std::move(alpha_xi), std::move(r1),
                       std::move(r2),    std::move(r3)};
}

/// Intrinsic torsion of a closed G2-structure arising from the reduction:
/// τ = −(1/3) s^{-4/3} dη − (2/3) H^{-1} s^{-1} ξ ∧ d^c s,
/// checked against its defining relation d*_φφ = τ ∧ φ.
struct G2TorsionReport {
  DifferentialForm tau;
  DifferentialForm residual;  // d(*φ) − τ∧φ
};

inline G2TorsionReport g2TorsionTau(const G2Structure& g2,
                                    const DifferentialForm& deta,
                                    const DifferentialForm& xi,
                                    const ScalarField& s, const ScalarField& H,
                                    const FieldMatrix& J) {
  DifferentialForm dcs = dc(DifferentialForm::fromField(s), J);
  DifferentialForm tau = (-1.0 / 3.0) * (pow(s, -4.0 / 3.0) * deta) -
                         (2.0 / 3.0) * ((pow(H, -1.0) * pow(s, -1.0)) *
                                        wedge(xi, dcs));
  DifferentialForm residual =
      exteriorDerivative(g2.star_phi) - wedge(tau, g2.phi);
  return G2TorsionReport{std::move(tau), std::move(residual)};
}

/// Prescription check for the torsion-free family with s = H^{3/4}:
///   dξ = −*_ω(½ d(H^{3/2}) ∧ Ω⁺),  dη = −*_ω(½ d^c(H^{3/2}) ∧ Ω⁺),
///   d(H^{3/4} Ω⁺) = 0,
/// on the 6-dimensional quotient chart (the star is the quotient's *_ω).
struct PrescriptionReport {
  DifferentialForm res_dxi;
  DifferentialForm res_deta;
  DifferentialForm res_closure;
};

inline PrescriptionReport spin7Prescription(const SU3Structure& su3,
                                            const ScalarField& H,
                                            const DifferentialForm& dxi,
                                            const DifferentialForm& deta) {
  DifferentialForm dH32 =
      exteriorDerivative(DifferentialForm::fromField(pow(H, 1.5)));
  DifferentialForm dcH32 =
      dc(DifferentialForm::fromField(pow(H, 1.5)), su3.J);
  DifferentialForm pre_dxi =
      -1.0 * hodgeStar(0.5 * wedge(dH32, su3.omega_plus), su3.metric);
  DifferentialForm pre_deta =
      -1.0 * hodgeStar(0.5 * wedge(dcH32, su3.omega_plus), su3.metric);
  DifferentialForm closure = exteriorDerivative(
      ScalarField(pow(H, 0.75)) * su3.omega_plus);
  return PrescriptionReport{dxi - pre_dxi, deta - pre_deta, std::move(closure)};
}

/// Pointwise Frobenius norm of the Nijenhuis tensor of J,
/// N^k_{ij} = J^l_i ∂_l J^k_j − J^l_j ∂_l J^k_i − J^k_l ∂_i J^l_j + J^k_l ∂_j J^l_i,
/// with J^k_i the matrix entry (row k, column i).
inline ScalarField nijenhuisNorm(const FieldMatrix& J) {
  auto Jp = std::make_shared<FieldMatrix>(J);
  const Chart c = J.chart();
  int n = c.dim();
  return ScalarField::fromFunction(c, [Jp, n](const Point& p) {
    JetMat Jm = Jp->eval(p);
    // entries' gradients provide the ∂J terms
    double sum = 0.0;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          double N = 0.0;
          for (int l = 0; l < n; ++l) {
            N += Jm(l, i).value * Jm(k, j).grad[l];
            N -= Jm(l, j).value * Jm(k, i).grad[l];
            N -= Jm(k, l).value * Jm(l, j).grad[i];
            N += Jm(k, l).value * Jm(l, i).grad[j];
          }
          sum += 2.0 * N * N;
        }
    return Jet2::constant(p.dim(), std::sqrt(sum));
  });
}

/// Pointwise residual ‖J² + I‖_F as a field.
inline ScalarField jSquaredResidual(const FieldMatrix& J) {
  auto Jp = std::make_shared<FieldMatrix>(J);
  int n = J.chart().dim();
  return ScalarField::fromFunction(J.chart(), [Jp, n](const Point& p) {
    JetMat Jm = Jp->eval(p);
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = 0.0;
        for (int k = 0; k < n; ++k) v += Jm(i, k).value * Jm(k, j).value;
        if (i == j) v += 1.0;
        sum += v * v;
      }
    return Jet2::constant(p.dim(), std::sqrt(sum));
  });
}

/// SU(3) compatibility residual (2/3)ω³ − Ω⁺∧Ω⁻ (a 6-form).
inline DifferentialForm su3CompatibilityResidual(const SU3Structure& s) {
  return (2.0 / 3.0) * wedge(s.omega, wedge(s.omega, s.omega)) -
         wedge(s.omega_plus, s.omega_minus);
}

}  // namespace spin7
