#include "spin7/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace spin7 {

// ---------------------------------------------------------------------------
// GridField
// ---------------------------------------------------------------------------

std::size_t GridField::size() const {
  std::size_t n = 1;
  for (int s : shape) n *= static_cast<std::size_t>(s);
  return n;
}

std::size_t GridField::flatIndex(const std::vector<int>& idx) const {
  std::size_t f = 0;
  for (int a = 0; a < dim(); ++a) f = f * shape[a] + idx[a];
  return f;
}

double GridField::ghostAt(std::vector<int> idx) const {
  for (int a = 0; a < dim(); ++a) {
    int n = shape[a];
    int i = idx[a];
    if (i >= 0 && i < n) continue;
    if (periodic[a]) {
      idx[a] = ((i % n) + n) % n;
      continue;
    }
    // One-node quadratic extrapolation; exact for quadratic content.
    auto probe = [&](int j) {
      std::vector<int> q = idx;
      q[a] = j;
      return ghostAt(std::move(q));
    };
    if (i == -1) return 3.0 * probe(0) - 3.0 * probe(1) + probe(2);
    if (i == n) return 3.0 * probe(n - 1) - 3.0 * probe(n - 2) + probe(n - 3);
    throw GridError("grid index more than one node outside the range");
  }
  return values[flatIndex(idx)];
}

GridField GridField::fromFunction(
    std::vector<int> shape, std::vector<double> spacing,
    std::vector<double> origin, std::vector<bool> periodic,
    const std::function<double(const std::vector<double>&)>& f,
    double time_label) {
  GridField g;
  g.shape = std::move(shape);
  g.spacing = std::move(spacing);
  g.origin = std::move(origin);
  g.periodic = std::move(periodic);
  g.time_label = time_label;
  g.values.assign(g.size(), 0.0);
  std::vector<int> idx(g.dim(), 0);
  std::vector<double> x(g.dim(), 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    for (int a = 0; a < g.dim(); ++a) x[a] = g.coord(a, idx[a]);
    g.values[k] = f(x);
    for (int a = g.dim() - 1; a >= 0; --a) {
      if (++idx[a] < g.shape[a]) break;
      idx[a] = 0;
    }
  }
  g.requireValid();
  return g;
}

void GridField::requireValid() const {
  if (shape.empty()) throw GridError("empty grid shape");
  if (spacing.size() != shape.size() || origin.size() != shape.size() ||
      periodic.size() != shape.size())
    throw GridError("grid metadata sizes disagree");
  for (int a = 0; a < dim(); ++a) {
    if (shape[a] < 3) throw GridError("each grid axis needs >= 3 nodes");
    if (!(spacing[a] > 0.0)) throw GridError("grid spacing must be positive");
  }
  if (values.size() != size()) throw GridError("grid value count mismatch");
  for (double v : values)
    if (!std::isfinite(v)) throw GridError("non-finite grid value");
}

double GridField::maxAbs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double GridField::mean() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double GridField::maxAbsDiff(const GridField& other) const {
  if (other.values.size() != values.size())
    throw GridError("grid shape mismatch in comparison");
  double m = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k)
    m = std::max(m, std::abs(values[k] - other.values[k]));
  return m;
}

std::string GridField::toCsv() const {
  std::ostringstream out;
  out.precision(17);
  auto line = [&](const char* name, auto get, std::size_t n) {
    out << "# " << name << ":";
    for (std::size_t a = 0; a < n; ++a) out << " " << get(a);
    out << "\n";
  };
  line("shape", [&](std::size_t a) { return shape[a]; }, shape.size());
  line("spacing", [&](std::size_t a) { return spacing[a]; }, spacing.size());
  line("origin", [&](std::size_t a) { return origin[a]; }, origin.size());
  line("periodic", [&](std::size_t a) { return periodic[a] ? 1 : 0;
       }, periodic.size());
  out << "# time_label: " << time_label << "\n";
  for (double v : values) out << v << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

double ResidualReport::maxResidual() const {
  double m = 0.0;
  for (const auto& [k, v] : residuals) m = std::max(m, v);
  return m;
}

std::string ResidualReport::toJson() const {
  nlohmann::json j;
  j["residuals"] = residuals;
  j["max_residual"] = maxResidual();
  return j.dump(2);
}

std::string EvolutionReport::toJson() const {
  nlohmann::json j;
  j["steps"] = steps;
  j["dt"] = dt;
  j["max_residual_per_step"] = max_residual_per_step;
  j["conserved_diagnostics"] = conserved_diagnostics;
  j["aborted"] = aborted;
  j["abort_step"] = abort_step;
  j["abort_reason"] = abort_reason;
  j["final"] = {{"shape", final.shape},
                {"time_label", final.time_label},
                {"max_abs", final.values.empty() ? 0.0 : final.maxAbs()}};
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Scalar root solve
// ---------------------------------------------------------------------------

double solve_s_of_H(double A, double c, double H) {
  if (A == 0.0) {
    if (-c <= 0.0)
      throw RootError("degenerate case A = 0 requires s = -c > 0");
    return -c;
  }
  const double target = A * H;
  auto g = [c](double s) { return std::pow(s, 1.0 / 3.0) * (s + c); };
  // g is strictly increasing for s > max(0, -c/4).
  double lo = std::max(0.0, -c / 4.0);
  double glo = (lo > 0.0) ? g(lo) : 0.0;
  if (!(target > glo))
    throw RootError("no positive root on the monotone branch");
  double hi = std::max(2.0 * lo + 1.0, 1.0);
  for (int k = 0; k < 200 && g(hi) < target; ++k) hi *= 2.0;
  if (g(hi) < target) throw RootError("root bracketing failed");
  double s = 0.5 * (std::max(lo, 1e-12) + hi);
  for (int it = 0; it < 200; ++it) {
    double r = g(s) - target;
    if (std::abs(r) < 1e-12) return s;
    if (r > 0.0)
      hi = s;
    else
      lo = s;
    double gp = (4.0 * s + c) / (3.0 * std::pow(s, 2.0 / 3.0));
    double sn = (gp > 0.0) ? s - r / gp : s;
    if (!(sn > lo && sn < hi)) sn = 0.5 * (lo + hi);
    s = sn;
  }
  if (std::abs(g(s) - target) < 1e-10) return s;  // graceful near-miss guard
  throw RootError("root iteration did not converge");
}

// ---------------------------------------------------------------------------
// Reduction residual checkers
// ---------------------------------------------------------------------------

namespace {

/// Exterior derivative restricted to the given coordinate directions.
DifferentialForm dRestricted(const DifferentialForm& a,
                             const std::vector<int>& dirs) {
  DifferentialForm r(a.chart(), a.degree() + 1);
  for (const auto& [idx, f] : a.coeffs())
    for (int j : dirs) {
      if (std::find(idx.begin(), idx.end(), j) != idx.end()) continue;
      MultiIndex nj = idx;
      nj.insert(nj.begin(), j);
      r.addTerm(std::move(nj), f.partial(j));
    }
  return r;
}

/// Coefficient-wise partial derivative of a form along one coordinate.
DifferentialForm partialForm(const DifferentialForm& a, int i) {
  DifferentialForm r(a.chart(), a.degree());
  for (const auto& [idx, f] : a.coeffs()) r.addTerm(idx, f.partial(i));
  return r;
}

double maxOver(const DifferentialForm& f, const std::vector<Point>& pts) {
  double m = 0.0;
  for (const Point& p : pts) m = std::max(m, f.maxAbsCoeff(p));
  return m;
}

}  // namespace

ResidualReport check_reduction_I(const ReductionICheckData& d,
                                 const std::vector<Point>& pts) {
  const Chart& c = d.chart;
  ScalarField s = ScalarField::coordinate(c, d.s_idx);
  DifferentialForm ds = DifferentialForm::dx(c, d.s_idx);

  DifferentialForm sq23 = wedge(d.om2, d.om2) + wedge(d.om3, d.om3);
  DifferentialForm equ1 = (0.5 * d.A) * (d.u * sq23) -
                          (s * (s + d.c)) * wedge(d.omt1, d.omt1);
  DifferentialForm equ1_cross = d.u * wedge(d.om2, d.om3);

  DifferentialForm dMu(c, 1);
  for (int i : d.base) dMu.addTerm({i}, d.u.partial(i));
  DifferentialForm dcMu = applyJ(d.J1, dMu);
  DifferentialForm omt1_ss =
      partialForm(partialForm(d.omt1, d.s_idx), d.s_idx);
  DifferentialForm equ2 =
      dRestricted(dcMu, d.base) - (d.A * d.A) * omt1_ss;

  DifferentialForm dalpha = exteriorDerivative(d.alpha) +
                            (1.0 / d.A) * wedge(dcMu, ds) -
                            d.A * partialForm(d.omt1, d.s_idx);

  ResidualReport r;
  r.residuals["equ1"] = maxOver(equ1, pts);
  r.residuals["equ1_cross"] = maxOver(equ1_cross, pts);
  r.residuals["equ2"] = maxOver(equ2, pts);
  r.residuals["dalpha"] = maxOver(dalpha, pts);
  return r;
}

ResidualReport check_reduction_II(const ReductionIICheckData& d,
                                  const std::vector<Point>& pts) {
  const Chart& c = d.chart;
  ScalarField s = ScalarField::coordinate(c, d.s_idx);
  ScalarField y = ScalarField::coordinate(c, d.y_idx);
  DifferentialForm ds = DifferentialForm::dx(c, d.s_idx);
  DifferentialForm dy = DifferentialForm::dx(c, d.y_idx);
  DifferentialForm U1 = DifferentialForm::dx(c, 0);
  DifferentialForm U2 = -1.0 * DifferentialForm::dx(c, 1);
  const std::vector<int> surf{0, 1};

  auto dcS = [&c](const ScalarField& f) {
    DifferentialForm r(c, 1);
    r.addTerm({1}, -f.partial(0));
    r.addTerm({0}, f.partial(1));
    return r;
  };

  DifferentialForm equation1 =
      (s * y) * d.omt + (d.u * d.w) * wedge(U1, U2);
  DifferentialForm equation2 =
      partialForm(partialForm(d.omt, d.y_idx), d.y_idx) -
      dRestricted(dcS(d.u), surf);
  DifferentialForm equation3 =
      partialForm(partialForm(d.omt, d.s_idx), d.s_idx) -
      dRestricted(dcS(d.w), surf);
  DifferentialForm equation4 =
      partialForm(partialForm(d.omt, d.y_idx), d.s_idx);

  DifferentialForm dalpha = exteriorDerivative(d.alpha) +
                            wedge(dcS(d.u), dy) - partialForm(d.omt, d.y_idx);
  DifferentialForm dkappa = exteriorDerivative(d.kappa) -
                            wedge(dcS(d.w), ds) + partialForm(d.omt, d.s_idx);
  DifferentialForm dxi =
      exteriorDerivative(d.xi) - wedge(U1, d.kappa) - d.w * wedge(U2, ds);
  DifferentialForm deta =
      exteriorDerivative(d.eta) - wedge(d.alpha, U2) - d.u * wedge(dy, U1);

  ResidualReport r;
  r.residuals["equation1"] = maxOver(equation1, pts);
  r.residuals["equation2"] = maxOver(equation2, pts);
  r.residuals["equation3"] = maxOver(equation3, pts);
  r.residuals["equation4"] = maxOver(equation4, pts);
  r.residuals["dalpha"] = maxOver(dalpha, pts);
  r.residuals["dkappa"] = maxOver(dkappa, pts);
  r.residuals["dxi"] = maxOver(dxi, pts);
  r.residuals["deta"] = maxOver(deta, pts);
  return r;
}

// ---------------------------------------------------------------------------
// Grid evolvers
// ---------------------------------------------------------------------------

namespace {

void requireSameLayout(const GridField& a, const GridField& b,
                       const char* what) {
  if (a.shape != b.shape || a.spacing != b.spacing || a.origin != b.origin ||
      a.periodic != b.periodic)
    throw GridError(std::string("grid layout mismatch: ") + what);
}

/// Iterate all node index vectors of a grid.
template <typename F>
void forEachNode(const GridField& g, F&& fn) {
  std::vector<int> idx(g.dim(), 0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    fn(k, idx);
    for (int a = g.dim() - 1; a >= 0; --a) {
      if (++idx[a] < g.shape[a]) break;
      idx[a] = 0;
    }
  }
}

double secondDiff(const GridField& g, const std::vector<int>& idx, int axis) {
  std::vector<int> q = idx;
  q[axis] = idx[axis] + 1;
  double fp = g.ghostAt(q);
  q[axis] = idx[axis] - 1;
  double fm = g.ghostAt(q);
  double h = g.spacing[axis];
  return (fp - 2.0 * g.values[g.flatIndex(idx)] + fm) / (h * h);
}

double mixedDiff(const GridField& g, const std::vector<int>& idx, int a,
                 int b) {
  std::vector<int> q = idx;
  auto val = [&](int da, int db) {
    q[a] = idx[a] + da;
    q[b] = idx[b] + db;
    double v = g.ghostAt(q);
    q[a] = idx[a];
    q[b] = idx[b];
    return v;
  };
  return (val(1, 1) - val(1, -1) - val(-1, 1) + val(-1, -1)) /
         (4.0 * g.spacing[a] * g.spacing[b]);
}

struct MaStats {
  double min_h11 = 0.0;
  double min_det = 0.0;
};

/// Source term of the potential evolution, (d/ds)^2 F = 4 s(s+c) det(h),
/// with h the Hermitian coefficient matrix of the associated (1,1)-form.
std::vector<double> maRhs(const GridField& F, double s, double c,
                          MaStats* stats) {
  std::vector<double> rhs(F.size());
  double mh = std::numeric_limits<double>::infinity();
  double md = std::numeric_limits<double>::infinity();
  double factor = 4.0 * s * (s + c);
  forEachNode(F, [&](std::size_t k, const std::vector<int>& idx) {
    double F11 = secondDiff(F, idx, 0);
    double F22 = secondDiff(F, idx, 1);
    double F33 = secondDiff(F, idx, 2);
    double F44 = secondDiff(F, idx, 3);
    double F13 = mixedDiff(F, idx, 0, 2);
    double F24 = mixedDiff(F, idx, 1, 3);
    double F23 = mixedDiff(F, idx, 1, 2);
    double F14 = mixedDiff(F, idx, 0, 3);
    double h11 = -0.5 * (F11 + F22);
    double h22 = -0.5 * (F33 + F44);
    double hre = -0.5 * (F13 + F24);
    double him = -0.5 * (F23 - F14);
    double det = h11 * h22 - hre * hre - him * him;
    mh = std::min(mh, h11);
    md = std::min(md, det);
    rhs[k] = factor * det;
  });
  if (stats) {
    stats->min_h11 = mh;
    stats->min_det = md;
  }
  return rhs;
}

void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
  for (std::size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
}

std::vector<double> combine(const std::vector<double>& base, double a,
                            const std::vector<double>& x) {
  std::vector<double> r = base;
  axpy(r, a, x);
  return r;
}

using RhsFn =
    std::function<std::vector<double>(const std::vector<double>&, double)>;

/// One classical RK4 step of the first-order system (F' = P, P' = rhs).
void rk4Step(std::vector<double>& F, std::vector<double>& P, double t,
             double dt, const RhsFn& rhs,
             const std::vector<double>& rhs_at_F) {
  const std::vector<double>& k1F = P;
  const std::vector<double>& k1P = rhs_at_F;
  std::vector<double> k2F = combine(P, 0.5 * dt, k1P);
  std::vector<double> k2P = rhs(combine(F, 0.5 * dt, k1F), t + 0.5 * dt);
  std::vector<double> k3F = combine(P, 0.5 * dt, k2P);
  std::vector<double> k3P = rhs(combine(F, 0.5 * dt, k2F), t + 0.5 * dt);
  std::vector<double> k4F = combine(P, dt, k3P);
  std::vector<double> k4P = rhs(combine(F, dt, k3F), t + dt);
  for (std::size_t k = 0; k < F.size(); ++k) {
    F[k] += dt / 6.0 *
            (k1F[k] + 2.0 * k2F[k] + 2.0 * k3F[k] + k4F[k]);
    P[k] += dt / 6.0 *
            (k1P[k] + 2.0 * k2P[k] + 2.0 * k3P[k] + k4P[k]);
  }
}

double meanOf(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Staggered residual (F_{k+1} - 2 F_k + F_{k-1})/dt^2 - rhs(F_k), with its
/// spatial mean removed (the grid-mean gauge is not evolved by the PDE).
double staggeredResidual(const std::vector<double>& Fnext,
                         const std::vector<double>& Fcur,
                         const std::vector<double>& Fprev, double dt,
                         const std::vector<double>& rhs_at_cur) {
  std::vector<double> r(Fcur.size());
  for (std::size_t k = 0; k < r.size(); ++k)
    r[k] = (Fnext[k] - 2.0 * Fcur[k] + Fprev[k]) / (dt * dt) - rhs_at_cur[k];
  double m = meanOf(r);
  double mx = 0.0;
  for (double x : r) mx = std::max(mx, std::abs(x - m));
  return mx;
}

}  // namespace

EvolutionReport evolve_monge_ampere(const GridField& F0, const GridField& F1,
                                    double c,
                                    std::pair<double, double> s_range,
                                    int steps) {
  F0.requireValid();
  F1.requireValid();
  requireSameLayout(F0, F1, "F0 vs F1");
  if (F0.dim() != 4) throw GridError("potential evolution needs a 4-grid");
  if (steps < 1) throw GridError("need at least one step");
  if (!(s_range.second > s_range.first))
    throw GridError("s range must be increasing");

  EvolutionReport rep;
  rep.steps = steps;
  rep.dt = (s_range.second - s_range.first) / steps;
  rep.final = F0;

  double hmin = *std::min_element(F0.spacing.begin(), F0.spacing.end());
  GridField work = F0;  // carries layout metadata for stencils
  RhsFn rhs = [&work, c](const std::vector<double>& Fv, double s) {
    work.values = Fv;
    return maRhs(work, s, c, nullptr);
  };

  std::vector<double> F = F0.values;
  std::vector<double> P = F1.values;
  {
    double m = meanOf(F);
    for (double& v : F) v -= m;
  }
  std::vector<double> Fprev;
  MaStats stats;

  for (int k = 0; k < steps; ++k) {
    double s = s_range.first + k * rep.dt;
    double ssc = s * (s + c);
    double dtmax = 0.25 * hmin * hmin *
                   std::min(1.0, ssc > 0.0 ? 1.0 / ssc : 1.0);
    if (rep.dt > dtmax) {
      rep.aborted = true;
      rep.abort_step = k;
      rep.abort_reason = "step size exceeds the stability heuristic";
      break;
    }
    work.values = F;
    std::vector<double> rhs0 = maRhs(work, s, c, &stats);
    if (!(stats.min_h11 > 0.0) || !(stats.min_det > 0.0)) {
      rep.aborted = true;
      rep.abort_step = k;
      rep.abort_reason = "Kahler positivity lost (h11 or det(h) <= 0)";
      break;
    }
    std::vector<double> Fcur = F;
    rk4Step(F, P, s, rep.dt, rhs, rhs0);
    double m = meanOf(F);
    for (double& v : F) v -= m;
    if (!Fprev.empty())
      rep.max_residual_per_step.push_back(
          staggeredResidual(F, Fcur, Fprev, rep.dt, rhs0));
    Fprev = std::move(Fcur);
    rep.final.values = F;
    rep.final.time_label = s + rep.dt;
  }

  if (!rep.aborted) {
    work.values = F;
    maRhs(work, s_range.second, c, &stats);
    rep.conserved_diagnostics["min_h11"] = stats.min_h11;
    rep.conserved_diagnostics["min_det_h"] = stats.min_det;
    rep.conserved_diagnostics["final_mean"] = meanOf(F);
  }
  rep.final.requireValid();
  return rep;
}

EvolutionReport evolve_dude4(const GridField& u0, const GridField& u1,
                             const GridField& G,
                             std::pair<double, double> y_range, int steps) {
  u0.requireValid();
  u1.requireValid();
  G.requireValid();
  requireSameLayout(u0, u1, "u0 vs u1");
  requireSameLayout(u0, G, "u0 vs G");
  if (u0.dim() != 2) throw GridError("this evolution needs a 2-grid");
  if (steps < 1) throw GridError("need at least one step");
  if (!(y_range.second > y_range.first))
    throw GridError("y range must be increasing");

  double gmin = *std::min_element(G.values.begin(), G.values.end());
  if (!(gmin > 0.0)) throw GridError("coefficient field G must be positive");
  double gmax = *std::max_element(G.values.begin(), G.values.end());
  if (gmax - gmin > 1e-13) {
    double lapmax = 0.0;
    forEachNode(G, [&](std::size_t, const std::vector<int>& idx) {
      lapmax = std::max(
          lapmax, std::abs(secondDiff(G, idx, 0) + secondDiff(G, idx, 1)));
    });
    if (lapmax > 1e-8 * std::max(1.0, G.maxAbs()))
      throw GridError("coefficient field G is not discretely harmonic");
  }

  EvolutionReport rep;
  rep.steps = steps;
  rep.dt = (y_range.second - y_range.first) / steps;
  rep.final = u0;

  GridField work = u0;
  // G (d/dy)^2 u = y Lap u with the geometer's sign: Lap = -(coordinate
  // five-point Laplacian).
  RhsFn rhs = [&work, &G](const std::vector<double>& uv, double y) {
    work.values = uv;
    std::vector<double> r(uv.size());
    forEachNode(work, [&](std::size_t k, const std::vector<int>& idx) {
      double flat = secondDiff(work, idx, 0) + secondDiff(work, idx, 1);
      r[k] = -y * flat / G.values[k];
    });
    return r;
  };

  std::vector<double> u = u0.values;
  std::vector<double> p = u1.values;
  std::vector<double> uprev;

  for (int k = 0; k < steps; ++k) {
    double y = y_range.first + k * rep.dt;
    double umin = *std::min_element(u.begin(), u.end());
    if (!(umin > 0.0)) {
      rep.aborted = true;
      rep.abort_step = k;
      rep.abort_reason = "u <= 0 reached (validity region left)";
      break;
    }
    std::vector<double> rhs0 = rhs(u, y);
    std::vector<double> ucur = u;
    rk4Step(u, p, y, rep.dt, rhs, rhs0);
    if (!uprev.empty())
      rep.max_residual_per_step.push_back(
          staggeredResidual(u, ucur, uprev, rep.dt, rhs0));
    uprev = std::move(ucur);
    rep.final.values = u;
    rep.final.time_label = y + rep.dt;
  }

  if (!rep.aborted)
    rep.conserved_diagnostics["min_u"] =
        *std::min_element(u.begin(), u.end());
  rep.final.requireValid();
  return rep;
}

// ---------------------------------------------------------------------------
// Hypersurface-flow residuals
// ---------------------------------------------------------------------------

ResidualReport hitchin_check(const StructureBundle& b,
                             const std::vector<Point>& pts) {
  if (!b.spin7)
    throw std::invalid_argument("hitchin_check needs a Spin(7) entry");
  if (b.foliation_coord < 0)
    throw std::invalid_argument("hitchin_check needs a declared foliation");
  const Chart& c = b.chart;
  const int t = b.foliation_coord;

  DifferentialForm beta =
      interiorProduct(VectorField::coordinateBasis(c, t), b.spin7->Phi);
  DifferentialForm psi =
      b.spin7->Phi - wedge(DifferentialForm::dx(c, t), beta);
  ScalarField N = sqrt(b.spin7->metric.matrix().at(t, t));
  ScalarField invN = 1.0 / N;
  DifferentialForm phi = invN * beta;

  std::vector<int> leaf;
  for (int i = 0; i < c.dim(); ++i)
    if (i != t) leaf.push_back(i);

  DifferentialForm r1 = dRestricted(psi, leaf);
  DifferentialForm r2 = invN * partialForm(psi, t) - dRestricted(phi, leaf);

  double scale = 1.0, m1 = 0.0, m2 = 0.0, mb = 0.0;
  for (const Point& p : pts) {
    scale = std::max(scale, psi.maxAbsCoeff(p));
    m1 = std::max(m1, r1.maxAbsCoeff(p));
    m2 = std::max(m2, r2.maxAbsCoeff(p));
    for (int i : leaf)
      mb = std::max(mb,
                    std::abs(b.spin7->metric.matrix().at(t, i)(p).value));
  }
  ResidualReport r;
  r.residuals["hit1"] = m1 / scale;
  r.residuals["hit2"] = m2 / scale;
  r.residuals["metric_block"] = mb / scale;
  return r;
}

}  // namespace spin7
