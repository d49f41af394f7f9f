#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spin7/catalog.hpp"

namespace spin7 {

/// Thrown when the scalar root solve has no admissible positive root.
struct RootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when grid data violates an evolver precondition (shape mismatch,
/// non-finite values, non-positive or non-harmonic coefficient field).
struct GridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A real scalar field sampled on a structured grid. Axes may be periodic
/// (node n wraps to node 0) or plain; non-periodic axes are extended by
/// quadratic extrapolation when a stencil needs a ghost node.
struct GridField {
  std::vector<int> shape;        // per-axis node counts
  std::vector<double> spacing;   // per-axis grid spacing
  std::vector<double> origin;    // coordinate of node 0 per axis
  std::vector<bool> periodic;    // per-axis wrap flag
  std::vector<double> values;    // row-major (last axis fastest)
  double time_label = 0.0;       // value of the evolution parameter

  int dim() const { return static_cast<int>(shape.size()); }
  std::size_t size() const;
  std::size_t flatIndex(const std::vector<int>& idx) const;
  double& at(const std::vector<int>& idx) { return values[flatIndex(idx)]; }
  double at(const std::vector<int>& idx) const {
    return values[flatIndex(idx)];
  }
  /// Coordinate of node idx along the given axis.
  double coord(int axis, int idx) const {
    return origin[axis] + spacing[axis] * idx;
  }

  /// Value at an index vector whose entries may stick one node outside the
  /// range: periodic axes wrap, plain axes use the quadratic-extrapolation
  /// ghost F(-1) = 3F(0) - 3F(1) + F(2) (exact on quadratic data).
  double ghostAt(std::vector<int> idx) const;

  /// Sample a function of the node coordinates.
  static GridField fromFunction(
      std::vector<int> shape, std::vector<double> spacing,
      std::vector<double> origin, std::vector<bool> periodic,
      const std::function<double(const std::vector<double>&)>& f,
      double time_label = 0.0);

  /// Throws GridError if shapes are inconsistent or any value is not finite.
  void requireValid() const;

  double maxAbs() const;
  double mean() const;
  /// Max |a - b| over the grid (shapes must agree).
  double maxAbsDiff(const GridField& other) const;

  /// Row-major CSV dump: header lines with shape/spacing/origin/periodic/
  /// time_label, then one value per line.
  std::string toCsv() const;
};

/// Named pointwise residual maxima from a structure-equation check.
struct ResidualReport {
  std::map<std::string, double> residuals;
  double maxResidual() const;
  std::string toJson() const;
};

/// Outcome of a grid evolution. `max_residual_per_step` holds the staggered
/// second-difference residual of the PDE, available from the second step on.
/// A violated validity condition sets `aborted` (with the offending step)
/// instead of throwing; `final` then holds the last valid state.
struct EvolutionReport {
  int steps = 0;
  double dt = 0.0;
  std::vector<double> max_residual_per_step;
  std::map<std::string, double> conserved_diagnostics;
  GridField final;
  bool aborted = false;
  int abort_step = -1;
  std::string abort_reason;
  std::string toJson() const;
};

/// Solve s^{1/3}(s + c) = A H for the positive root on the monotone branch
/// s > max(0, -c/4), by safeguarded Newton to |A H - s^{1/3}(s+c)| < 1e-12.
/// The degenerate case A = 0 returns s = -c (which must be positive).
/// Throws RootError when no admissible positive root exists.
double solve_s_of_H(double A, double c, double H);

/// Residuals of the one-parameter reduction equations at the given points:
///   equ1        (A/2) u (omega2^2 + omega3^2) - s(s+c) omegatilde1^2
///   equ1_cross  u omega2 ^ omega3
///   equ2        d_M d^c_M u - A^2 (d/ds)^2 omegatilde1
///   dalpha      d(alpha) + A^{-1} d^c_M u ^ ds - A (d/ds) omegatilde1
/// d_M differentiates along the base directions only and d^c uses the base
/// complex structure J1.
ResidualReport check_reduction_I(const ReductionICheckData& d,
                                 const std::vector<Point>& pts);

/// Residuals of the two-parameter reduction equations at the given points,
/// with surface coframe U1 = dx1, U2 = -dx2:
///   equation1   s y omegatilde + u w U1 ^ U2
///   equation2   (d/dy)^2 omegatilde - d_S d^c_S u
///   equation3   (d/ds)^2 omegatilde - d_S d^c_S w
///   equation4   (d/dy)(d/ds) omegatilde
///   dalpha      d(alpha) + d^c_S u ^ dy - (d/dy) omegatilde
///   dkappa      d(kappa) - d^c_S w ^ ds + (d/ds) omegatilde
///   dxi         d(xi) - U1 ^ kappa - w U2 ^ ds
///   deta        d(eta) - alpha ^ U2 - u dy ^ U1
/// d_S differentiates along the first two coordinates and d^c_S f =
/// -f_{x1} dx2 + f_{x2} dx1.
ResidualReport check_reduction_II(const ReductionIICheckData& d,
                                  const std::vector<Point>& pts);

/// Second-order evolution of a Kahler potential F(s, x) on a 4-grid:
///   (d/ds)^2 F = 4 s(s+c) det(h),  h = [[h11, h12], [conj(h12), h22]],
///   h11 = -(F_11 + F_22)/2, h22 = -(F_33 + F_44)/2,
///   h12 = -((F_13 + F_24) + i(F_23 - F_14))/2,
/// where h is the Hermitian matrix of the associated (1,1)-form in the
/// complex coordinates z1 = x1 + i x2, z2 = x3 + i x4. F0 and F1 sample F
/// and dF/ds at s_range.first; RK4 in s with centered second differences in
/// space, grid mean subtracted each step (potential gauge). Aborts when the
/// positivity h11 > 0, det(h) > 0 is lost or when the step exceeds the
/// stability heuristic dt <= 0.25 h_min^2 min(1, 1/(s(s+c))).
EvolutionReport evolve_monge_ampere(const GridField& F0, const GridField& F1,
                                    double c,
                                    std::pair<double, double> s_range,
                                    int steps);

/// Second-order evolution of u(y, x) on a 2-grid:
///   G (d/dy)^2 u = y Lap_S u,
/// with Lap_S the (geometer's) surface Laplacian, i.e. the negative of the
/// centered five-point coordinate Laplacian. G must be positive and
/// discretely harmonic (residual < 1e-8, or constant). u0 and u1 sample u
/// and du/dy at y_range.first. Aborts when u <= 0 is reached.
EvolutionReport evolve_dude4(const GridField& u0, const GridField& u1,
                             const GridField& G,
                             std::pair<double, double> y_range, int steps);

/// Hypersurface-flow residuals for a Spin(7) entry with a declared
/// foliation coordinate t: split Phi = dt ^ beta + psi, set N = sqrt(g_tt)
/// and phi = beta / N, and report (relative to max(1, |psi|))
///   hit1          max |d_L psi|            (leaf exterior derivative)
///   hit2          max |N^{-1} d/dt psi - d_L phi|
///   metric_block  max |g_{t,i}|, i != t    (foliation orthogonality)
ResidualReport hitchin_check(const StructureBundle& b,
                             const std::vector<Point>& pts);

}  // namespace spin7
