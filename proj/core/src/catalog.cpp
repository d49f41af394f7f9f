#include "spin7/catalog.hpp"

#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "spin7/pullback.hpp"
#include "spin7/specialfns.hpp"

namespace spin7 {

namespace {

using Pairs = std::vector<std::pair<DifferentialForm, DifferentialForm>>;

DifferentialForm d1(const Chart& c, int i) { return DifferentialForm::dx(c, i); }

DifferentialForm two(const Chart& c, int i, int j) {
  return wedge(d1(c, i), d1(c, j));
}

ScalarField X(const Chart& c, int i) { return ScalarField::coordinate(c, i); }

ScalarField K(const Chart& c, double v) { return ScalarField::constant(c, v); }

/// dx_i∧dx_j + dx_k∧dx_l
DifferentialForm sigma(const Chart& c, int i, int j, int k, int l) {
  return two(c, i, j) + two(c, k, l);
}

/// Sub-chart of `big` consisting of the coordinates at `idx`, preserving
/// names and domain boxes.
Chart subChart(const Chart& big, const std::vector<int>& idx) {
  std::vector<std::string> names;
  std::vector<bool> periodic;
  std::vector<Interval> box;
  for (int i : idx) {
    names.push_back(big.coord_name(i));
    periodic.push_back(false);
    box.push_back(big.domain(i));
  }
  return Chart::make(std::move(names), std::move(periodic), std::move(box));
}

FieldMatrix liftMatrix(const FieldMatrix& m, const CoordMap& inc) {
  int N = inc.target.dim();
  FieldMatrix r(inc.target, N, N);
  for (int a = 0; a < inc.source.dim(); ++a) {
    int A = inc.source_to_target[a];
    if (A < 0) continue;
    for (int b = 0; b < inc.source.dim(); ++b) {
      int B = inc.source_to_target[b];
      if (B < 0) continue;
      r.at(A, B) = pullback(m.at(a, b), inc);
    }
  }
  return r;
}

SU3Structure liftSU3(const SU3Structure& s, const Chart& big) {
  CoordMap inc = CoordMap::byName(s.chart, big);
  return SU3Structure{big, pullback(s.omega, inc),
                      pullback(s.omega_plus, inc),
                      pullback(s.omega_minus, inc), liftMatrix(s.J, inc),
                      MetricField(liftMatrix(s.metric.matrix(), inc),
                                  s.metric.orientation())};
}

/// Orientation sign of the Kahler volume ω^(n/2) relative to the coordinate
/// volume, evaluated at one interior point.
int kahlerOrientation(const DifferentialForm& omega, const Point& p) {
  int n = omega.chart().dim();
  DifferentialForm top = omega;
  for (int k = 2; k < n; k += 2) top = wedge(top, omega);
  MultiIndex all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  double v = top.coeff(all)(p).value;
  if (v == 0.0) throw AssemblyError("kahlerOrientation: omega^top vanishes");
  return v > 0.0 ? +1 : -1;
}

Point midPoint(const Chart& c) {
  Eigen::VectorXd x(c.dim());
  for (int i = 0; i < c.dim(); ++i)
    x[i] = 0.5 * (c.domain(i).lo + c.domain(i).hi);
  return c.point(std::move(x));
}

/// Real and imaginary parts of (A1+iB1)∧(A2+iB2)∧(A3+iB3).
std::pair<DifferentialForm, DifferentialForm> complexTriple(
    const DifferentialForm& A1, const DifferentialForm& B1,
    const DifferentialForm& A2, const DifferentialForm& B2,
    const DifferentialForm& A3, const DifferentialForm& B3) {
  DifferentialForm re = wedge(A1, A2, A3) - wedge(A1, B2, B3) -
                        wedge(B1, A2, B3) - wedge(B1, B2, A3);
  DifferentialForm im = wedge(A1, A2, B3) + wedge(A1, B2, A3) +
                        wedge(B1, A2, A3) - wedge(B1, B2, B3);
  return {std::move(re), std::move(im)};
}

/// Base complex structure for the reduction checkers: built from
/// (1,0)-pairs on the 4-sub-chart spanned by the first four coordinates
/// and extended by zero to the given chart.
FieldMatrix baseJ(const Chart& sub,
                  const std::function<Pairs(const Chart&)>& mk) {
  Chart base4 = subChart(sub, {0, 1, 2, 3});
  FieldMatrix J4 = complexStructureFromCoframe(mk(base4));
  return liftMatrix(J4, CoordMap::byName(base4, sub));
}

/// Quotient SU(3)-structure for the one-parameter reduction:
///   ω = ω̃1 + A⁻¹ ds∧α,
///   Ω = H^{-1/2} s^{-1/3} (ω2 + iω3) ∧ (α − i u A⁻¹ ds),
/// with J from the (1,0)-coframe {base pairs, (α, −uA⁻¹ ds)}.
SU3Structure reductionISU3(const Chart& sub, int s_idx, double A,
                           const DifferentialForm& omt1,
                           const DifferentialForm& om2,
                           const DifferentialForm& om3,
                           const DifferentialForm& alpha, const ScalarField& u,
                           const ScalarField& H, Pairs base_pairs) {
  DifferentialForm ds = d1(sub, s_idx);
  ScalarField s = X(sub, s_idx);
  DifferentialForm omega = omt1 + (1.0 / A) * wedge(ds, alpha);
  ScalarField pref = pow(H, -0.5) * pow(s, -1.0 / 3.0);
  DifferentialForm uds = (u * (1.0 / A)) * ds;
  DifferentialForm Op = pref * (wedge(om2, alpha) + wedge(om3, uds));
  DifferentialForm Om = pref * (wedge(om3, alpha) - wedge(om2, uds));
  base_pairs.push_back({alpha, -1.0 * uds});
  FieldMatrix J = complexStructureFromCoframe(base_pairs);
  int orient = kahlerOrientation(omega, midPoint(sub));
  MetricField g = metricFromOmegaJ(omega, J, orient);
  return SU3Structure{sub, std::move(omega), std::move(Op), std::move(Om),
                      std::move(J), std::move(g)};
}

/// Quotient SU(3)-structure for the two-parameter reduction:
///   ω = −α∧dy + κ∧ds + ω̃(s, y),
///   Ω = (sy)^{-1/2} (dx1+idx2) ∧ (α − i u dy) ∧ (κ + i w ds).
SU3Structure reductionIISU3(const Chart& sub, int s_idx, int y_idx,
                            const DifferentialForm& omt,
                            const DifferentialForm& alpha,
                            const DifferentialForm& kappa, const ScalarField& u,
                            const ScalarField& w) {
  DifferentialForm ds = d1(sub, s_idx), dy = d1(sub, y_idx);
  DifferentialForm dx1 = d1(sub, 0), dx2 = d1(sub, 1);
  ScalarField s = X(sub, s_idx), y = X(sub, y_idx);
  DifferentialForm omega = -1.0 * wedge(alpha, dy) + wedge(kappa, ds) + omt;
  DifferentialForm mudy = (-1.0 * u) * dy;
  DifferentialForm wds = w * ds;
  auto [re, im] = complexTriple(dx1, dx2, alpha, mudy, kappa, wds);
  ScalarField pref = pow(s * y, -0.5);
  DifferentialForm Op = pref * re;
  DifferentialForm Om = pref * im;
  Pairs pairs{{dx1, dx2}, {alpha, mudy}, {kappa, wds}};
  FieldMatrix J = complexStructureFromCoframe(pairs);
  int orient = kahlerOrientation(omega, midPoint(sub));
  MetricField g = metricFromOmegaJ(omega, J, orient);
  return SU3Structure{sub, std::move(omega), std::move(Op), std::move(Om),
                      std::move(J), std::move(g)};
}

struct ParamReader {
  std::map<std::string, double> given;
  std::map<std::string, double> resolved;
  std::set<std::string> known;

  explicit ParamReader(std::map<std::string, double> p) : given(std::move(p)) {}

  double get(const std::string& name, double def) {
    known.insert(name);
    auto it = given.find(name);
    double v = (it == given.end()) ? def : it->second;
    resolved[name] = v;
    return v;
  }

  void finish(const std::string& entry) const {
    for (const auto& [k, v] : given)
      if (!known.count(k))
        throw ParameterError("entry '" + entry + "': unknown parameter '" + k +
                             "'");
  }
};

void require(bool ok, const std::string& entry, const std::string& inequality) {
  if (!ok)
    throw ParameterError("entry '" + entry +
                         "': parameter validity violated: " + inequality);
}

MetricField coframeMetric(
    const Chart& c,
    const std::vector<std::pair<ScalarField, DifferentialForm>>& terms) {
  return MetricField::fromCoframeSquares(c, terms);
}

// ---------------------------------------------------------------------------
// GLPS family: P6 = Q5 × R_t with de5 = dx13 + dx42, ω = d(t e5),
// Ω = t(σ3 + iσ1) ∧ (−t^a e5 + i t^b dt) for the variant exponents (a, b).
// ---------------------------------------------------------------------------

struct GlpsSU3Parts {
  Chart sub;  // {x1..x4, x5, t}
  DifferentialForm e5;
  SU3Structure su3;
};

GlpsSU3Parts glpsSU3(double a, double b, const std::vector<Interval>& box6) {
  Chart sub = Chart::make({"x1", "x2", "x3", "x4", "x5", "t"}, {}, box6);
  ScalarField t = X(sub, 5);
  DifferentialForm dt = d1(sub, 5);
  DifferentialForm e5 = d1(sub, 4) + X(sub, 0) * d1(sub, 2) +
                        X(sub, 3) * d1(sub, 1);  // de5 = dx13 + dx42
  DifferentialForm s1 = sigma(sub, 0, 1, 2, 3);  // dx12 + dx34
  DifferentialForm s3 = sigma(sub, 0, 3, 1, 2);  // dx14 + dx23
  DifferentialForm omega = wedge(dt, e5) + t * sigma(sub, 0, 2, 3, 1);
  // Ω± from Ω = t(σ3 + iσ1) ∧ (−t^a e5 + i t^b dt)
  DifferentialForm Op =
      (-1.0 * pow(t, 1.0 + a)) * wedge(s3, e5) -
      pow(t, 1.0 + b) * wedge(s1, dt);
  DifferentialForm Om =
      pow(t, 1.0 + b) * wedge(s3, dt) - pow(t, 1.0 + a) * wedge(s1, e5);
  Pairs pairs{{d1(sub, 0), d1(sub, 2)},
              {d1(sub, 3), d1(sub, 1)},
              {(-1.0 * pow(t, a)) * e5, pow(t, b) * dt}};
  FieldMatrix J = complexStructureFromCoframe(pairs);
  int orient = kahlerOrientation(omega, midPoint(sub));
  MetricField g = metricFromOmegaJ(omega, J, orient);
  return GlpsSU3Parts{sub, std::move(e5),
                      SU3Structure{sub, std::move(omega), std::move(Op),
                                   std::move(Om), std::move(J), std::move(g)}};
}

std::vector<Interval> glpsBox6() {
  std::vector<Interval> b(6, Interval{-1.5, 1.5});
  b[5] = Interval{0.6, 1.6};
  return b;
}

StructureBundle glpsSpin7(ParamReader& pr) {
  pr.finish("glps_spin7");
  std::vector<Interval> box = glpsBox6();
  box.push_back(Interval{-1.5, 1.5});
  box.push_back(Interval{-1.5, 1.5});
  Chart big = Chart::make({"x1", "x2", "x3", "x4", "x5", "t", "x6", "x7"}, {},
                          box);
  GlpsSU3Parts parts = glpsSU3(-2.0, 2.0, glpsBox6());

  DifferentialForm xi = d1(big, 6) + X(big, 0) * d1(big, 3) +
                        X(big, 1) * d1(big, 2);  // dξ = dx14 + dx23
  DifferentialForm eta = d1(big, 7) + X(big, 0) * d1(big, 1) +
                         X(big, 2) * d1(big, 3);  // dη = dx12 + dx34
  ScalarField t = X(big, 5);
  ReductionData rd{big, t, pow(t, 4.0 / 3.0), eta, xi, liftSU3(parts.su3, big)};

  StructureBundle b;
  b.name = "glps_spin7";
  b.kind = StructureBundle::Kind::Spin7;
  b.chart = big;
  Point sample = midPoint(big);
  b.spin7 = assembleSpin7(rd, sample);
  b.reduction = std::move(rd);
  b.family = "nilmanifold (0,0,0,0,13+42) x R, cone-type torsion-free family";
  b.expected_holonomy_rank = 21;
  b.foliation_coord = 5;
  CoordMap inc = CoordMap::byName(parts.sub, big);
  DifferentialForm e5b = pullback(parts.e5, inc);
  b.connection_potentials = {{"alpha", e5b}, {"xi", xi}, {"eta", eta}};
  b.printed_metric = coframeMetric(
      big, {{pow(t, -2.0), eta},
            {pow(t, -2.0), xi},
            {pow(t, -2.0), e5b},
            {pow(t, 6.0), d1(big, 5)},
            {pow(t, 3.0), d1(big, 0)},
            {pow(t, 3.0), d1(big, 1)},
            {pow(t, 3.0), d1(big, 2)},
            {pow(t, 3.0), d1(big, 3)}});
  {
    const Chart& sc = parts.sub;
    ScalarField ts = X(sc, 5);
    b.red1 = ReductionICheckData{
        sc,
        {0, 1, 2, 3},
        5,
        1.0,
        0.0,
        ts * sigma(sc, 0, 2, 3, 1),    // omegatilde1 = t (dx13+dx42)
        -1.0 * sigma(sc, 0, 3, 1, 2),  // omega2 = -(dx14+dx23)
        -1.0 * sigma(sc, 0, 1, 2, 3),  // omega3 = -(dx12+dx34)
        parts.e5,
        pow(ts, 4.0),
        baseJ(sc, [](const Chart& b4) {
          return Pairs{{d1(b4, 0), d1(b4, 2)}, {d1(b4, 3), d1(b4, 1)}};
        })};
  }
  b.notes = {"curvature forms: d(alpha) = dx13+dx42, d(xi) = dx14+dx23, "
             "d(eta) = dx12+dx34",
             "normal-form identification: omega1 = dx13+dx42, "
             "omega2 = -(dx14+dx23), omega3 = -(dx12+dx34), A = 1, c = 0, "
             "(a,b,p,q) = (0,0,0,1), u = t^4"};
  return b;
}

StructureBundle glpsG2(ParamReader& pr) {
  pr.finish("glps_g2");
  std::vector<Interval> box = glpsBox6();
  box.push_back(Interval{-1.5, 1.5});
  Chart big =
      Chart::make({"x1", "x2", "x3", "x4", "x5", "t", "x6"}, {}, box);
  GlpsSU3Parts parts = glpsSU3(-1.5, 1.5, glpsBox6());
  SU3Structure su3 = liftSU3(parts.su3, big);
  DifferentialForm xi =
      d1(big, 6) + X(big, 0) * d1(big, 3) + X(big, 1) * d1(big, 2);
  ScalarField t = X(big, 5);
  // orientation: sign of ξ ∧ ω³ at the sample point
  Point sample = midPoint(big);
  DifferentialForm top =
      wedge(xi, wedge(su3.omega, wedge(su3.omega, su3.omega)));
  MultiIndex all{0, 1, 2, 3, 4, 5, 6};
  int orient = top.coeff(all)(sample).value > 0 ? +1 : -1;

  StructureBundle b;
  b.name = "glps_g2";
  b.kind = StructureBundle::Kind::G2;
  b.chart = big;
  b.g2 = assembleG2(xi, su3, t, orient);
  b.su3 = su3;  // kept for closed/coclosed cross-checks (H^{1/2} Omega+)
  b.family = "nilmanifold (0,0,0,0,13+42) x R, closed-and-coclosed variant";
  b.expected_holonomy_rank = 14;
  b.foliation_coord = 5;
  b.connection_potentials = {{"xi", xi}};
  b.notes = {"H = t, constant first parameter; same symplectic form as the "
             "8-dimensional member, rescaled fibre complex structure"};
  return b;
}

StructureBundle glpsCY(ParamReader& pr) {
  pr.finish("glps_cy");
  GlpsSU3Parts parts = glpsSU3(-1.0, 1.0, glpsBox6());
  StructureBundle b;
  b.name = "glps_cy";
  b.kind = StructureBundle::Kind::SU3;
  b.chart = parts.sub;
  b.su3 = parts.su3;
  b.family = "nilmanifold (0,0,0,0,13+42) x R, Calabi-Yau member";
  b.expected_holonomy_rank = 8;
  b.foliation_coord = 5;
  b.notes = {"torsion-free SU(3)-structure: both omega and Omega closed"};
  return b;
}

StructureBundle glpsSU4(ParamReader& pr) {
  pr.finish("glps_su4");
  std::vector<Interval> box = glpsBox6();
  box.push_back(Interval{-1.5, 1.5});  // x7 (circle fibre)
  box.push_back(Interval{0.6, 1.6});   // s
  Chart big =
      Chart::make({"x1", "x2", "x3", "x4", "x5", "t", "x7", "s"}, {}, box);
  GlpsSU3Parts parts = glpsSU3(-1.0, 1.0, glpsBox6());
  CoordMap inc = CoordMap::byName(parts.sub, big);
  DifferentialForm omega = pullback(parts.su3.omega, inc);
  DifferentialForm Op = pullback(parts.su3.omega_plus, inc);
  DifferentialForm Om = pullback(parts.su3.omega_minus, inc);
  DifferentialForm e5 = pullback(parts.e5, inc);
  ScalarField t = X(big, 5), s = X(big, 7);
  DifferentialForm ds = d1(big, 7), dt = d1(big, 5);
  DifferentialForm etahat = d1(big, 6) - t * e5;  // d(etahat) = -omega
  // ω̂ = −d(s^{2/3} η̂) = s^{2/3} ω + η̂ ∧ d(s^{2/3})
  DifferentialForm ds23 = (2.0 / 3.0) * (pow(s, -1.0 / 3.0) * ds);
  DifferentialForm omhat = pow(s, 2.0 / 3.0) * omega + wedge(etahat, ds23);
  // Ω̂ = Ω ∧ (−η̂ − i (2/3) s^{5/3} ds)
  DifferentialForm c4 = (2.0 / 3.0) * (pow(s, 5.0 / 3.0) * ds);
  DifferentialForm Ophat = -1.0 * wedge(Op, etahat) + wedge(Om, c4);
  DifferentialForm Omhat = -1.0 * wedge(Om, etahat) - wedge(Op, c4);
  Pairs pairs{{d1(big, 0), d1(big, 2)},
              {d1(big, 3), d1(big, 1)},
              {(-1.0 * pow(t, -1.0)) * e5, t * dt},
              {-1.0 * etahat, -1.0 * c4}};
  FieldMatrix J = complexStructureFromCoframe(pairs);
  Point sample = midPoint(big);
  int orient = kahlerOrientation(omhat, sample);
  MetricField g = metricFromOmegaJ(omhat, J, orient);

  StructureBundle b;
  b.name = "glps_su4";
  b.kind = StructureBundle::Kind::SU4;
  b.chart = big;
  b.su4 = SU4Data{big, std::move(omhat), std::move(Ophat), std::move(Omhat),
                  std::move(J), std::move(g)};
  b.family = "circle bundle over the Calabi-Yau member, cohomogeneity two";
  b.expected_holonomy_rank = 15;  // upper bound: full su(4)
  b.foliation_coord = 7;
  b.connection_potentials = {{"etahat", etahat}};
  b.notes = {"d(etahat) = -omega; the moment map is s^{2/3}",
             "expected rank is an upper bound (holonomy contained in SU(4))"};
  return b;
}

// ---------------------------------------------------------------------------
// Second nilmanifold family: de5 = dx24, ω = dx13 − d(t² e5),
// Ω = t(−σ1 + iσ3) ∧ (−2 t^a dt + i t^b e5).
// ---------------------------------------------------------------------------

GlpsSU3Parts nil24SU3(double a, double b, const std::vector<Interval>& box6) {
  Chart sub = Chart::make({"x1", "x2", "x3", "x4", "x5", "t"}, {}, box6);
  ScalarField t = X(sub, 5);
  DifferentialForm dt = d1(sub, 5);
  DifferentialForm e5 = d1(sub, 4) + X(sub, 1) * d1(sub, 3);  // de5 = dx24
  DifferentialForm s1 = sigma(sub, 0, 1, 2, 3);
  DifferentialForm s3 = sigma(sub, 0, 3, 1, 2);
  DifferentialForm omega = two(sub, 0, 2) - (2.0 * t) * wedge(dt, e5) -
                           (t * t) * two(sub, 1, 3);
  DifferentialForm Op = (2.0 * pow(t, 1.0 + a)) * wedge(s1, dt) -
                        pow(t, 1.0 + b) * wedge(s3, e5);
  DifferentialForm Om = (-1.0 * pow(t, 1.0 + b)) * wedge(s1, e5) -
                        (2.0 * pow(t, 1.0 + a)) * wedge(s3, dt);
  Pairs pairs{{-1.0 * d1(sub, 2), d1(sub, 0)},
              {d1(sub, 3), d1(sub, 1)},
              {(-2.0 * pow(t, a)) * dt, pow(t, b) * e5}};
  FieldMatrix J = complexStructureFromCoframe(pairs);
  int orient = kahlerOrientation(omega, midPoint(sub));
  MetricField g = metricFromOmegaJ(omega, J, orient);
  return GlpsSU3Parts{sub, std::move(e5),
                      SU3Structure{sub, std::move(omega), std::move(Op),
                                   std::move(Om), std::move(J), std::move(g)}};
}

StructureBundle nil24Spin7(ParamReader& pr) {
  pr.finish("nil24_spin7");
  std::vector<Interval> box = glpsBox6();
  box.push_back(Interval{-1.5, 1.5});
  box.push_back(Interval{-1.5, 1.5});
  Chart big =
      Chart::make({"x1", "x2", "x3", "x4", "x5", "t", "x6", "x7"}, {}, box);
  GlpsSU3Parts parts = nil24SU3(4.0, -3.0, glpsBox6());
  DifferentialForm xi = d1(big, 6) - X(big, 0) * d1(big, 3) -
                        X(big, 1) * d1(big, 2);  // dξ = −(dx14+dx23)
  DifferentialForm eta = d1(big, 7) - X(big, 0) * d1(big, 1) -
                         X(big, 2) * d1(big, 3);  // dη = −(dx12+dx34)
  ScalarField t = X(big, 5);
  ReductionData rd{big, t * t, pow(t, 8.0 / 3.0), eta, xi,
                   liftSU3(parts.su3, big)};

  StructureBundle b;
  b.name = "nil24_spin7";
  b.kind = StructureBundle::Kind::Spin7;
  b.chart = big;
  Point sample = midPoint(big);
  b.spin7 = assembleSpin7(rd, sample);
  b.reduction = std::move(rd);
  b.family = "nilmanifold (0,0,0,0,24) x R, second torsion-free family";
  b.expected_holonomy_rank = 21;
  b.foliation_coord = 5;
  CoordMap inc = CoordMap::byName(parts.sub, big);
  DifferentialForm e5b = pullback(parts.e5, inc);
  b.connection_potentials = {{"xi", xi}, {"eta", eta}};
  b.printed_metric = coframeMetric(
      big, {{pow(t, 4.0), d1(big, 0)},
            {pow(t, 6.0), d1(big, 1)},
            {pow(t, 4.0), d1(big, 2)},
            {pow(t, 6.0), d1(big, 3)},
            {pow(t, -2.0), e5b},
            {pow(t, -4.0), eta},
            {pow(t, -4.0), xi},
            {4.0 * pow(t, 12.0), d1(big, 5)}});
  b.notes = {"H = t^{8/3}, s = t^2; d(xi) = -(dx14+dx23), "
             "d(eta) = -(dx12+dx34)"};
  return b;
}

StructureBundle nil24G2(ParamReader& pr) {
  pr.finish("nil24_g2");
  std::vector<Interval> box = glpsBox6();
  box.push_back(Interval{-1.5, 1.5});
  Chart big =
      Chart::make({"x1", "x2", "x3", "x4", "x5", "t", "x6"}, {}, box);
  GlpsSU3Parts parts = nil24SU3(3.0, -2.0, glpsBox6());
  SU3Structure su3 = liftSU3(parts.su3, big);
  DifferentialForm xi =
      d1(big, 6) - X(big, 0) * d1(big, 3) - X(big, 1) * d1(big, 2);
  ScalarField t = X(big, 5);
  Point sample = midPoint(big);
  DifferentialForm top =
      wedge(xi, wedge(su3.omega, wedge(su3.omega, su3.omega)));
  MultiIndex all{0, 1, 2, 3, 4, 5, 6};
  int orient = top.coeff(all)(sample).value > 0 ? +1 : -1;

  StructureBundle b;
  b.name = "nil24_g2";
  b.kind = StructureBundle::Kind::G2;
  b.chart = big;
  b.g2 = assembleG2(xi, su3, t * t, orient);
  b.su3 = su3;  // kept for closed/coclosed cross-checks (H^{1/2} Omega+)
  b.family = "nilmanifold (0,0,0,0,24) x R, closed-and-coclosed variant";
  b.expected_holonomy_rank = 14;
  b.foliation_coord = 5;
  b.connection_potentials = {{"xi", xi}};
  b.notes = {"H = t^2, d(xi) = -(dx14+dx23)"};
  return b;
}

// ---------------------------------------------------------------------------
// Constant solutions of the one-parameter reduction on flat T4, parameters
// (A, c, a, b, p, q): ω̃1 = (a+bs)ω0 + (p+qs)ω1,
// u = s(s+c)/A ((p+qs)² − (a+bs)²),
// (dα, dξ, dη) = (A(bω0 + qω1), −ω2, −Aω3).
// ---------------------------------------------------------------------------

StructureBundle constantI(ParamReader& pr) {
  double A = pr.get("A", 1.0);
  double c = pr.get("c", 0.5);
  double a = pr.get("a", 0.1);
  double bb = pr.get("b", 0.2);
  double p = pr.get("p", 1.5);
  double q = pr.get("q", 0.3);
  double s_min = pr.get("s_min", 0.5);
  double s_max = pr.get("s_max", 1.5);
  pr.finish("constant_I");
  require(A != 0.0, "constant_I", "A != 0");
  require(s_min > 0.0 && s_max > s_min, "constant_I", "0 < s_min < s_max");
  require(s_min + c > 0.0, "constant_I", "s + c > 0 on the s-interval");
  for (double s : {s_min, s_max})
    require(p + q * s > std::abs(a + bb * s), "constant_I",
            "p + q s > |a + b s| on the s-interval");

  std::vector<Interval> box(8, Interval{-1.5, 1.5});
  box[4] = Interval{s_min, s_max};
  Chart big = Chart::make({"x1", "x2", "x3", "x4", "s", "x5", "x6", "x7"}, {},
                          box);
  Chart sub = subChart(big, {0, 1, 2, 3, 4, 5});

  auto buildForms = [&](const Chart& ch) {
    struct F {
      DifferentialForm om0, om1, om2, om3, omt1, alpha;
      ScalarField u, H, s;
    } f{two(ch, 0, 1) - two(ch, 2, 3),
        sigma(ch, 0, 1, 2, 3),
        sigma(ch, 0, 2, 3, 1),
        sigma(ch, 0, 3, 1, 2),
        DifferentialForm(ch, 2),
        DifferentialForm(ch, 1),
        ScalarField(),
        ScalarField(),
        X(ch, 4)};
    ScalarField abs_ = K(ch, a) + bb * f.s;
    ScalarField pqs = K(ch, p) + q * f.s;
    f.omt1 = abs_ * f.om0 + pqs * f.om1;
    f.u = (f.s * (f.s + c) * (1.0 / A)) * (pqs * pqs - abs_ * abs_);
    f.H = pow(f.s, 1.0 / 3.0) * (f.s + c) * (1.0 / A);
    f.alpha = d1(ch, 5) + (A * (bb + q)) * (X(ch, 0) * d1(ch, 1)) +
              (A * (q - bb)) * (X(ch, 2) * d1(ch, 3));
    return f;
  };
  auto fs = buildForms(sub);
  SU3Structure su3 = reductionISU3(
      sub, 4, A, fs.omt1, fs.om2, fs.om3, fs.alpha, fs.u, fs.H,
      Pairs{{d1(sub, 0), d1(sub, 1)}, {d1(sub, 2), d1(sub, 3)}});

  auto fb = buildForms(big);
  DifferentialForm xi =
      d1(big, 6) - X(big, 0) * d1(big, 2) - X(big, 3) * d1(big, 1);
  DifferentialForm eta = d1(big, 7) - A * (X(big, 0) * d1(big, 3)) -
                         A * (X(big, 1) * d1(big, 2));
  ReductionData rd{big, fb.s, fb.H, eta, xi, liftSU3(su3, big)};

  StructureBundle b;
  b.name = "constant_I";
  b.kind = StructureBundle::Kind::Spin7;
  b.chart = big;
  Point sample = midPoint(big);
  b.spin7 = assembleSpin7(rd, sample);
  b.reduction = std::move(rd);
  b.family = "constant solutions of the one-parameter reduction on flat T4";
  b.foliation_coord = 4;
  b.params = pr.resolved;
  b.connection_potentials = {{"alpha", fb.alpha}, {"xi", xi}, {"eta", eta}};
  ScalarField S = fb.s * (fb.s + c) * (1.0 / A);
  ScalarField c1 = (K(big, p) + q * fb.s) + (K(big, a) + bb * fb.s);
  ScalarField c2 = (K(big, p) + q * fb.s) - (K(big, a) + bb * fb.s);
  b.printed_metric = coframeMetric(
      big, {{pow(fb.s, -2.0), eta},
            {K(big, A * A) / ((fb.s + c) * (fb.s + c)), xi},
            {S / fb.u, fb.alpha},
            {fb.s * (fb.s + c) * fb.u * (1.0 / (A * A * A)), d1(big, 4)},
            {S * c1, d1(big, 0)},
            {S * c1, d1(big, 1)},
            {S * c2, d1(big, 2)},
            {S * c2, d1(big, 3)}});
  b.red1 = ReductionICheckData{
      sub,
      {0, 1, 2, 3},
      4,
      A,
      c,
      fs.omt1,
      fs.om2,
      fs.om3,
      fs.alpha,
      fs.u,
      baseJ(sub, [](const Chart& b4) {
        return Pairs{{d1(b4, 0), d1(b4, 1)}, {d1(b4, 2), d1(b4, 3)}};
      })};
  b.notes = {"omega0 = dx12-dx34, omega1 = dx12+dx34, omega2 = dx13+dx42, "
             "omega3 = dx14+dx23",
             "connection potentials are linear primitives chosen once: "
             "alpha = dx5 + A(b+q)x1 dx2 + A(q-b)x3 dx4, "
             "xi = dx6 - x1 dx3 - x4 dx2, eta = dx7 - A x1 dx4 - A x2 dx3"};
  return b;
}

// ---------------------------------------------------------------------------
// Gibbons-Hawking based entry with V = x (harmonic, positive on the box):
// triple ω1 = θ∧dx + V dy∧dz etc., θ = dx4 + z dy, (a,b,q) = (0,0,1).
// ---------------------------------------------------------------------------

StructureBundle ghSpin7(ParamReader& pr) {
  double c = pr.get("c", 0.5);
  double p = pr.get("p", 0.7);
  double s_min = pr.get("s_min", 0.5);
  double s_max = pr.get("s_max", 1.5);
  pr.finish("gh_spin7");
  require(c >= 0.0, "gh_spin7", "c >= 0");
  require(p >= 0.0, "gh_spin7", "p >= 0");
  require(s_min > 0.0 && s_max > s_min, "gh_spin7", "0 < s_min < s_max");

  std::vector<Interval> box(8, Interval{-1.5, 1.5});
  box[0] = Interval{0.5, 1.5};  // x (V = x must stay positive)
  box[4] = Interval{s_min, s_max};
  Chart big =
      Chart::make({"x", "y", "z", "x4", "s", "x5", "x6", "x7"}, {}, box);
  Chart sub = subChart(big, {0, 1, 2, 3, 4, 5});

  struct GhForms {
    ScalarField V, u, H, s;
    DifferentialForm theta, om1, om2, om3, omt1, alpha;
  };
  auto buildForms = [&](const Chart& ch) -> GhForms {
    ScalarField V = X(ch, 0);
    ScalarField s = X(ch, 4);
    DifferentialForm theta =
        d1(ch, 3) + X(ch, 2) * d1(ch, 1);  // dθ = −*dV = −dy∧dz
    DifferentialForm om1 = wedge(theta, d1(ch, 0)) + V * two(ch, 1, 2);
    DifferentialForm om2 = wedge(theta, d1(ch, 1)) + V * two(ch, 2, 0);
    DifferentialForm om3 = wedge(theta, d1(ch, 2)) + V * two(ch, 0, 1);
    DifferentialForm omt1 = (K(ch, p) + s) * om1;
    ScalarField u = s * (s + c) * (K(ch, p) + s) * (K(ch, p) + s);
    ScalarField H = pow(s, 1.0 / 3.0) * (s + c);
    // dα = ω1: α = dx5 + x4 dx − x z dy
    DifferentialForm alpha = d1(ch, 5) + X(ch, 3) * d1(ch, 0) -
                             (X(ch, 0) * X(ch, 2)) * d1(ch, 1);
    return GhForms{V, u, H, s, theta, om1, om2, om3, omt1, alpha};
  };
  auto fs = buildForms(sub);
  SU3Structure su3 = reductionISU3(
      sub, 4, 1.0, fs.omt1, fs.om2, fs.om3, fs.alpha, fs.u, fs.H,
      Pairs{{fs.theta, fs.V * d1(sub, 0)}, {d1(sub, 1), d1(sub, 2)}});

  auto fb = buildForms(big);
  // dξ = −ω2 = −θ∧dy − V dz∧dx: ξ = dx6 − x4 dy + ½x² dz
  DifferentialForm xi = d1(big, 6) - X(big, 3) * d1(big, 1) +
                        (0.5 * X(big, 0) * X(big, 0)) * d1(big, 2);
  // dη = −ω3 = −θ∧dz − V dx∧dy: η = dx7 − x4 dz − yz dz − ½x² dy
  DifferentialForm eta = d1(big, 7) - X(big, 3) * d1(big, 2) -
                         (X(big, 1) * X(big, 2)) * d1(big, 2) -
                         (0.5 * X(big, 0) * X(big, 0)) * d1(big, 1);
  ReductionData rd{big, fb.s, fb.H, eta, xi, liftSU3(su3, big)};

  StructureBundle b;
  b.name = "gh_spin7";
  b.kind = StructureBundle::Kind::Spin7;
  b.chart = big;
  Point sample = midPoint(big);
  b.spin7 = assembleSpin7(rd, sample);
  b.reduction = std::move(rd);
  b.family = "Gibbons-Hawking base (V = x), three-torus bundle";
  b.foliation_coord = 4;
  b.params = pr.resolved;
  b.connection_potentials = {{"alpha", fb.alpha}, {"xi", xi}, {"eta", eta}};
  ScalarField T = fb.s * (fb.s + c) * (K(big, p) + fb.s);
  b.printed_metric = coframeMetric(
      big,
      {{pow(fb.s, -2.0), eta},
       {1.0 / ((fb.s + c) * (fb.s + c)), xi},
       {1.0 / ((K(big, p) + fb.s) * (K(big, p) + fb.s)), fb.alpha},
       {fb.s * fb.s * (fb.s + c) * (fb.s + c) * (K(big, p) + fb.s) *
            (K(big, p) + fb.s),
        d1(big, 4)},
       {T / fb.V, fb.theta},
       {T * fb.V, d1(big, 0)},
       {T * fb.V, d1(big, 1)},
       {T * fb.V, d1(big, 2)}});
  b.red1 = ReductionICheckData{
      sub,
      {0, 1, 2, 3},
      4,
      1.0,
      c,
      fs.omt1,
      fs.om2,
      fs.om3,
      fs.alpha,
      fs.u,
      baseJ(sub, [](const Chart& b4) {
        DifferentialForm th = d1(b4, 3) + X(b4, 2) * d1(b4, 1);
        return Pairs{{th, X(b4, 0) * d1(b4, 0)}, {d1(b4, 1), d1(b4, 2)}};
      })};
  b.notes = {"V = x with theta = dx4 + z dy (d theta = -dy^dz = -*dV)",
             "(a,b,q) = (0,0,1); potentials: alpha = dx5 + x4 dx - xz dy, "
             "xi = dx6 - x4 dy + x^2/2 dz, eta = dx7 - x4 dz - yz dz - "
             "x^2/2 dy"};
  return b;
}

// ---------------------------------------------------------------------------
// Tod-ansatz entry with V = y independent of x: additionally
// ω0 = θ∧dx − V dy∧dz, (a,b,q) = (0,1,1).
// ---------------------------------------------------------------------------

StructureBundle todSpin7(ParamReader& pr) {
  double c = pr.get("c", 0.5);
  double p = pr.get("p", 0.8);
  double s_min = pr.get("s_min", 0.5);
  double s_max = pr.get("s_max", 1.5);
  pr.finish("tod_spin7");
  require(c >= 0.0, "tod_spin7", "c >= 0");
  require(p > 0.0, "tod_spin7", "p > 0");
  require(s_min > 0.0 && s_max > s_min, "tod_spin7", "0 < s_min < s_max");

  std::vector<Interval> box(8, Interval{-1.5, 1.5});
  box[1] = Interval{0.5, 1.5};  // y (V = y must stay positive)
  box[4] = Interval{s_min, s_max};
  Chart big =
      Chart::make({"x", "y", "z", "x4", "s", "x5", "x6", "x7"}, {}, box);
  Chart sub = subChart(big, {0, 1, 2, 3, 4, 5});

  struct TodForms {
    ScalarField V, u, H, s;
    DifferentialForm theta, om0, om1, om2, om3, omt1, alpha;
  };
  auto buildForms = [&](const Chart& ch) -> TodForms {
    ScalarField V = X(ch, 1);
    ScalarField s = X(ch, 4);
    DifferentialForm theta =
        d1(ch, 3) - X(ch, 2) * d1(ch, 0);  // dθ = −*dV = −dz∧dx
    DifferentialForm om0 = wedge(theta, d1(ch, 0)) - V * two(ch, 1, 2);
    DifferentialForm om1 = wedge(theta, d1(ch, 0)) + V * two(ch, 1, 2);
    DifferentialForm om2 = wedge(theta, d1(ch, 1)) + V * two(ch, 2, 0);
    DifferentialForm om3 = wedge(theta, d1(ch, 2)) + V * two(ch, 0, 1);
    DifferentialForm omt1 = s * om0 + (K(ch, p) + s) * om1;
    ScalarField u = s * (s + c) * K(ch, p) * (K(ch, p) + 2.0 * s);
    ScalarField H = pow(s, 1.0 / 3.0) * (s + c);
    // dα = ω0 + ω1 = 2θ∧dx: α = dx5 + 2 x4 dx
    DifferentialForm alpha = d1(ch, 5) + 2.0 * (X(ch, 3) * d1(ch, 0));
    return TodForms{V, u, H, s, theta, om0, om1, om2, om3, omt1, alpha};
  };
  auto fs = buildForms(sub);
  SU3Structure su3 = reductionISU3(
      sub, 4, 1.0, fs.omt1, fs.om2, fs.om3, fs.alpha, fs.u, fs.H,
      Pairs{{fs.theta, fs.V * d1(sub, 0)}, {d1(sub, 1), d1(sub, 2)}});

  auto fb = buildForms(big);
  // dξ = −ω2: ξ = dx6 − x4 dy + xz dy + xy dz
  DifferentialForm xi = d1(big, 6) - X(big, 3) * d1(big, 1) +
                        (X(big, 0) * X(big, 2)) * d1(big, 1) +
                        (X(big, 0) * X(big, 1)) * d1(big, 2);
  // dη = −ω3: η = dx7 − x4 dz + xz dz − xy dy
  DifferentialForm eta = d1(big, 7) - X(big, 3) * d1(big, 2) +
                         (X(big, 0) * X(big, 2)) * d1(big, 2) -
                         (X(big, 0) * X(big, 1)) * d1(big, 1);
  ReductionData rd{big, fb.s, fb.H, eta, xi, liftSU3(su3, big)};

  StructureBundle b;
  b.name = "tod_spin7";
  b.kind = StructureBundle::Kind::Spin7;
  b.chart = big;
  Point sample = midPoint(big);
  b.spin7 = assembleSpin7(rd, sample);
  b.reduction = std::move(rd);
  b.family = "Tod-ansatz base (V = y), opposite-orientation companion form";
  b.foliation_coord = 4;
  b.params = pr.resolved;
  b.connection_potentials = {{"alpha", fb.alpha}, {"xi", xi}, {"eta", eta}};
  // The base block of the displayed metric is the metric of ω̃1 on the
  // 4-dimensional slice: (2s+p)(V⁻¹θ² + V dx²) + pV(dy² + dz²).
  ScalarField ssc = fb.s * (fb.s + c);
  ScalarField twos_p = 2.0 * fb.s + p;
  b.printed_metric = coframeMetric(
      big, {{pow(fb.s, -2.0), eta},
            {1.0 / ((fb.s + c) * (fb.s + c)), xi},
            {1.0 / (p * twos_p), fb.alpha},
            {p * fb.s * fb.s * (fb.s + c) * (fb.s + c) * twos_p, d1(big, 4)},
            {ssc * twos_p / fb.V, fb.theta},
            {ssc * twos_p * fb.V, d1(big, 0)},
            {ssc * p * fb.V, d1(big, 1)},
            {ssc * p * fb.V, d1(big, 2)}});
  b.red1 = ReductionICheckData{
      sub,
      {0, 1, 2, 3},
      4,
      1.0,
      c,
      fs.omt1,
      fs.om2,
      fs.om3,
      fs.alpha,
      fs.u,
      baseJ(sub, [](const Chart& b4) {
        DifferentialForm th = d1(b4, 3) - X(b4, 2) * d1(b4, 0);
        return Pairs{{th, X(b4, 1) * d1(b4, 0)}, {d1(b4, 1), d1(b4, 2)}};
      })};
  b.notes = {"V = y with theta = dx4 - z dx (d theta = -dz^dx = -*dV); the "
             "x-direction is the triholomorphic one",
             "(a,b,q) = (0,1,1): omegatilde1 = s omega0 + (p+s) omega1 with "
             "omega0 the anti-self-dual companion theta^dx - V dy^dz"};
  return b;
}

// ---------------------------------------------------------------------------
// Separable perturbation of the first nilmanifold family by a
// parabolic-cylinder profile: u = s² (1 + sin(x1) v(s)) with v̈ = s²v.
// ---------------------------------------------------------------------------

StructureBundle perturbedGlps(ParamReader& pr) {
  pr.finish("perturbed_glps");
  double sstar = specialfns::domain_threshold_u_less_one();
  std::vector<Interval> box(8, Interval{-1.5, 1.5});
  box[4] = Interval{sstar + 0.01, sstar + 1.2};
  Chart big = Chart::make({"x1", "x2", "x3", "x4", "s", "x5", "x6", "x7"}, {},
                          box);
  Chart sub = subChart(big, {0, 1, 2, 3, 4, 5});

  struct PF {
    DifferentialForm omt1, om2, om3, alpha;
    ScalarField u, H, f;
  };
  auto mk = [](const Chart& ch) -> PF {
    ScalarField s = X(ch, 4);
    ScalarField v = compose(specialfns::pcfUnivariate(), s);
    ScalarField vdot = compose(specialfns::pcfPrimeUnivariate(), s);
    ScalarField f = 1.0 + sin(X(ch, 0)) * v;
    DifferentialForm omt1 = f * two(ch, 0, 1) + two(ch, 2, 3);
    DifferentialForm om2 = -1.0 * sigma(ch, 0, 2, 3, 1);
    DifferentialForm om3 = -1.0 * sigma(ch, 0, 3, 1, 2);
    DifferentialForm alpha =
        d1(ch, 5) - (vdot * cos(X(ch, 0))) * d1(ch, 1);
    return PF{omt1, om2, om3, alpha, s * s * f, pow(s, 4.0 / 3.0), f};
  };
  auto fs = mk(sub);
  SU3Structure su3 = reductionISU3(
      sub, 4, 1.0, fs.omt1, fs.om2, fs.om3, fs.alpha, fs.u, fs.H,
      Pairs{{d1(sub, 0), d1(sub, 1)}, {d1(sub, 2), d1(sub, 3)}});

  auto fb = mk(big);
  DifferentialForm xi = d1(big, 6) - X(big, 2) * d1(big, 0) -
                        X(big, 1) * d1(big, 3);  // dξ = dx13 + dx42
  DifferentialForm eta = d1(big, 7) - X(big, 3) * d1(big, 0) -
                         X(big, 2) * d1(big, 1);  // dη = dx14 + dx23
  ScalarField s = X(big, 4);
  ReductionData rd{big, s, fb.H, eta, xi, liftSU3(su3, big)};

  StructureBundle b;
  b.name = "perturbed_glps";
  b.kind = StructureBundle::Kind::Spin7;
  b.chart = big;
  b.spin7 = assembleSpin7(rd, midPoint(big));
  b.reduction = std::move(rd);
  b.family = "nilmanifold family perturbed by a decaying parabolic-cylinder "
             "mode, cohomogeneity two";
  b.expected_holonomy_rank = 21;
  b.foliation_coord = 4;
  b.connection_potentials = {{"alpha", fb.alpha}, {"xi", xi}, {"eta", eta}};
  b.printed_metric = coframeMetric(
      big, {{s * s * fb.f, d1(big, 0)},
            {s * s * fb.f, d1(big, 1)},
            {s * s, d1(big, 2)},
            {s * s, d1(big, 3)},
            {1.0 / fb.f, fb.alpha},
            {pow(s, -2.0), xi},
            {pow(s, -2.0), eta},
            {pow(s, 4.0) * fb.f, d1(big, 4)}});
  b.params["s_threshold"] = sstar;
  b.red1 = ReductionICheckData{
      sub,
      {0, 1, 2, 3},
      4,
      1.0,
      0.0,
      fs.omt1,
      fs.om2,
      fs.om3,
      fs.alpha,
      fs.u,
      baseJ(sub, [](const Chart& b4) {
        return Pairs{{d1(b4, 0), d1(b4, 1)}, {d1(b4, 2), d1(b4, 3)}};
      })};
  b.notes = {"background is the (a,b,p,q) = (0,0,1,0) constant solution with "
             "A = 1, c = 0; perturbation u = s^2(1 + sin(x1) v(s)) with "
             "v(s) = U(0, sqrt(2) s)",
             "the s-interval starts above the threshold where v < 1, so the "
             "conformal factor f = 1 + sin(x1) v stays positive"};
  return b;
}

// ---------------------------------------------------------------------------
// Two-parameter reductions: common frame on the chart
// {x1..x6, s, y} with sub-chart {x1, x2, x3, x4, s, y}. All three entries
// have omegatilde = F dx1∧dx2, and the displayed metric is uniform:
//   s⁻²η² + y⁻²ξ² + (ys/u)α² + ysu dy² + (ys/w)κ² + ysw ds² + ysF(dx1²+dx2²).
// ---------------------------------------------------------------------------

struct RedIIForms {
  DifferentialForm omt, alpha, kappa;
  ScalarField u, w;
};

StructureBundle buildRedII(
    std::string name, std::string family, const Chart& big,
    const std::function<RedIIForms(const Chart&, int, int)>& mk,
    const DifferentialForm& xi, const DifferentialForm& eta,
    std::optional<int> rank, std::vector<std::string> notes,
    std::map<std::string, double> params) {
  Chart sub = subChart(big, {0, 1, 2, 3, 6, 7});
  RedIIForms fs = mk(sub, 4, 5);
  SU3Structure su3 =
      reductionIISU3(sub, 4, 5, fs.omt, fs.alpha, fs.kappa, fs.u, fs.w);
  RedIIForms fb = mk(big, 6, 7);
  ScalarField s = X(big, 6), y = X(big, 7);
  ReductionData rd{big, s, y * pow(s, 1.0 / 3.0), eta, xi,
                   liftSU3(su3, big)};

  StructureBundle b;
  b.name = std::move(name);
  b.kind = StructureBundle::Kind::Spin7;
  b.chart = big;
  b.spin7 = assembleSpin7(rd, midPoint(big));
  b.reduction = std::move(rd);
  b.family = std::move(family);
  b.expected_holonomy_rank = rank;
  b.foliation_coord = 6;
  b.params = std::move(params);
  b.connection_potentials = {
      {"alpha", fb.alpha}, {"kappa", fb.kappa}, {"xi", xi}, {"eta", eta}};
  ScalarField F = fb.omt.coeff({0, 1});
  ScalarField ys = y * s;
  b.printed_metric = coframeMetric(
      big, {{pow(s, -2.0), eta},
            {pow(y, -2.0), xi},
            {ys / fb.u, fb.alpha},
            {ys * fb.u, d1(big, 7)},
            {ys / fb.w, fb.kappa},
            {ys * fb.w, d1(big, 6)},
            {ys * F, d1(big, 0)},
            {ys * F, d1(big, 1)}});
  b.red2 = ReductionIICheckData{big,      6,  7,   fb.omt, fb.alpha,
                                fb.kappa, xi, eta, fb.u,   fb.w};
  b.notes = std::move(notes);
  return b;
}

std::vector<Interval> redIIBox() {
  std::vector<Interval> box(8, Interval{-1.5, 1.5});
  box[6] = Interval{0.5, 1.5};  // s
  box[7] = Interval{0.5, 1.5};  // y
  return box;
}

StructureBundle constantII(ParamReader& pr) {
  double c = pr.get("c", 1.0);
  double p = pr.get("p", 1.0);
  double q = pr.get("q", 0.3);
  double y_min = pr.get("y_min", 0.5);
  double y_max = pr.get("y_max", 1.5);
  pr.finish("constant_II");
  require(c > 0.0, "constant_II", "c > 0");
  require(y_min > 0.0 && y_max > y_min, "constant_II", "0 < y_min < y_max");
  require(p + q * y_min > 0.0 && p + q * y_max > 0.0, "constant_II",
          "p + q y > 0 on the y-interval");
  std::vector<Interval> box = redIIBox();
  box[7] = Interval{y_min, y_max};
  Chart big =
      Chart::make({"x1", "x2", "x3", "x4", "x5", "x6", "s", "y"}, {}, box);
  auto mk = [c, p, q](const Chart& ch, int si, int yi) -> RedIIForms {
    ScalarField s = X(ch, si), y = X(ch, yi);
    DifferentialForm omt = (c * (K(ch, p) + q * y)) * two(ch, 0, 1);
    DifferentialForm alpha = d1(ch, 2) + (c * q) * (X(ch, 0) * d1(ch, 1));
    DifferentialForm kappa = d1(ch, 3);
    return RedIIForms{omt, alpha, kappa, y * (K(ch, p) + q * y), c * s};
  };
  DifferentialForm xi = d1(big, 4) + X(big, 0) * d1(big, 3) -
                        (c * X(big, 6) * X(big, 1)) * d1(big, 6);
  DifferentialForm eta =
      d1(big, 5) + X(big, 1) * d1(big, 2) -
      (X(big, 7) * X(big, 0) * (K(big, p) + q * X(big, 7))) * d1(big, 7);
  return buildRedII(
      "constant_II",
      "constant solutions of the two-parameter reduction on flat T2", big, mk,
      xi, eta, 21,
      {"omegatilde = c(p+qy) dx1^dx2, u = y(p+qy), w = cs",
       "potentials: alpha = dx3 + cq x1 dx2, kappa = dx4, "
       "xi = dx5 + x1 dx4 - cs x2 ds, eta = dx6 + x2 dx3 - y x1 (p+qy) dy"},
      pr.resolved);
}

StructureBundle logExample(ParamReader& pr) {
  pr.finish("log_example");
  std::vector<Interval> box = redIIBox();
  box[0] = Interval{1.0, 1.8};
  box[1] = Interval{0.6, 1.4};
  Chart big =
      Chart::make({"x1", "x2", "x3", "x4", "x5", "x6", "s", "y"}, {}, box);
  auto mk = [](const Chart& ch, int si, int yi) -> RedIIForms {
    ScalarField s = X(ch, si), y = X(ch, yi);
    ScalarField x1 = X(ch, 0), x2 = X(ch, 1);
    ScalarField r = x1 * x1 + x2 * x2;
    ScalarField lnr = log(r);
    DifferentialForm omt = (y * lnr) * two(ch, 0, 1);
    DifferentialForm alpha =
        d1(ch, 2) +
        (x1 * lnr - 2.0 * x1 + 2.0 * x2 * atan(x1 / x2)) * d1(ch, 1);
    DifferentialForm kappa = d1(ch, 3) - (s * s * x2 / r) * d1(ch, 0) +
                             (s * s * x1 / r) * d1(ch, 1);
    return RedIIForms{omt, alpha, kappa, y * y, s * lnr};
  };
  ScalarField sb = X(big, 6), yb = X(big, 7);
  ScalarField rb = X(big, 0) * X(big, 0) + X(big, 1) * X(big, 1);
  DifferentialForm xi = d1(big, 4) + X(big, 0) * d1(big, 3) +
                        (0.5 * sb * sb * log(rb)) * d1(big, 1);
  DifferentialForm eta = d1(big, 5) + X(big, 1) * d1(big, 2) -
                         (X(big, 0) * yb * yb) * d1(big, 7);
  return buildRedII(
      "log_example",
      "two-parameter reduction from the logarithmic harmonic potential", big,
      mk, xi, eta, 21,
      {"omegatilde = y log(r) dx1^dx2 with r = x1^2 + x2^2, u = y^2, "
       "w = s log(r)",
       "the box keeps r > 1 so that w > 0"},
      pr.resolved);
}

StructureBundle airyExample(ParamReader& pr) {
  pr.finish("airy_example");
  std::vector<Interval> box = redIIBox();
  box[0] = Interval{0.3, 2.8};  // keeps sin(x1) > 0
  box[7] = Interval{0.2, 1.2};  // keeps Ai(y) > 0
  Chart big =
      Chart::make({"x1", "x2", "x3", "x4", "x5", "x6", "s", "y"}, {}, box);
  auto mk = [](const Chart& ch, int si, int yi) -> RedIIForms {
    ScalarField s = X(ch, si), y = X(ch, yi);
    ScalarField ai = compose(specialfns::airyUnivariate(), y);
    ScalarField aip = compose(specialfns::airyPrimeUnivariate(), y);
    DifferentialForm omt = (ai * sin(X(ch, 0))) * two(ch, 0, 1);
    DifferentialForm alpha =
        d1(ch, 2) - (aip * cos(X(ch, 0))) * d1(ch, 1);
    DifferentialForm kappa = d1(ch, 3);
    return RedIIForms{omt, alpha, kappa, y * ai * sin(X(ch, 0)), s};
  };
  ScalarField yb = X(big, 7);
  ScalarField aib = compose(specialfns::airyUnivariate(), yb);
  DifferentialForm xi = d1(big, 4) + X(big, 0) * d1(big, 3) -
                        (X(big, 6) * X(big, 1)) * d1(big, 6);
  DifferentialForm eta = d1(big, 5) + X(big, 1) * d1(big, 2) +
                         (yb * aib * cos(X(big, 0))) * d1(big, 7);
  return buildRedII(
      "airy_example",
      "two-parameter reduction separable in the Airy profile", big, mk, xi,
      eta, std::nullopt,
      {"omegatilde = Ai(y) sin(x1) dx1^dx2, u = y Ai(y) sin(x1), w = s",
       "no holonomy rank is asserted for this entry"},
      pr.resolved);
}

}  // namespace

Point StructureBundle::samplePoint() const { return midPoint(chart); }

std::vector<std::string> catalogNames() {
  return {"glps_spin7",  "glps_g2",     "glps_cy",     "glps_su4",
          "nil24_spin7", "nil24_g2",    "constant_I",  "gh_spin7",
          "tod_spin7",   "perturbed_glps", "constant_II", "log_example",
          "airy_example"};
}

StructureBundle buildBundle(const std::string& name,
                            const std::map<std::string, double>& params) {
  ParamReader pr(params);
  if (name == "glps_spin7") return glpsSpin7(pr);
  if (name == "glps_g2") return glpsG2(pr);
  if (name == "glps_cy") return glpsCY(pr);
  if (name == "glps_su4") return glpsSU4(pr);
  if (name == "nil24_spin7") return nil24Spin7(pr);
  if (name == "nil24_g2") return nil24G2(pr);
  if (name == "constant_I") return constantI(pr);
  if (name == "gh_spin7") return ghSpin7(pr);
  if (name == "tod_spin7") return todSpin7(pr);
  if (name == "perturbed_glps") return perturbedGlps(pr);
  if (name == "constant_II") return constantII(pr);
  if (name == "log_example") return logExample(pr);
  if (name == "airy_example") return airyExample(pr);
  throw ParameterError("unknown catalog entry '" + name + "'");
}

HyperkahlerData gibbonsHawkingTriple(const ScalarField& V,
                                     const DifferentialForm& theta, int fibre,
                                     const std::vector<Point>& check_points) {
  Chart c = V.chart();
  if (fibre < 3 || fibre >= c.dim())
    throw std::invalid_argument("gibbonsHawkingTriple: bad fibre index");
  DifferentialForm dx = d1(c, 0), dy = d1(c, 1), dz = d1(c, 2);
  DifferentialForm starDV = V.partial(0) * wedge(dy, dz) +
                            V.partial(1) * wedge(dz, dx) +
                            V.partial(2) * wedge(dx, dy);
  DifferentialForm curv = exteriorDerivative(theta) + starDV;
  for (const Point& p : check_points) {
    Jet2 j = V(p);
    if (j.value <= 0.0)
      throw AssemblyError("gibbonsHawkingTriple: V <= 0 at a check point");
    double lap = j.hess(0, 0) + j.hess(1, 1) + j.hess(2, 2);
    if (std::abs(lap) > 1e-9 * std::max(1.0, std::abs(j.value)))
      throw AssemblyError(
          "gibbonsHawkingTriple: V is not harmonic at a check point");
    if (curv.maxAbsCoeff(p) > 1e-9)
      throw AssemblyError(
          "gibbonsHawkingTriple: d(theta) != -*dV at a check point");
  }
  HyperkahlerData h{c,
                    wedge(theta, dx) + V * wedge(dy, dz),
                    wedge(theta, dy) + V * wedge(dz, dx),
                    wedge(theta, dz) + V * wedge(dx, dy),
                    std::nullopt,
                    MetricField::fromCoframeSquares(
                        c, {{1.0 / V, theta}, {V, dx}, {V, dy}, {V, dz}})};
  DifferentialForm om0 = wedge(theta, dx) - V * wedge(dy, dz);
  DifferentialForm dom0 = exteriorDerivative(om0);
  bool closed0 = true;
  for (const Point& p : check_points)
    if (dom0.maxAbsCoeff(p) > 1e-9) closed0 = false;
  if (closed0 && !check_points.empty()) h.omega0 = std::move(om0);
  return h;
}

std::string bundleDescriptorJson(const StructureBundle& b) {
  nlohmann::json j;
  switch (b.kind) {
    case StructureBundle::Kind::Spin7: j["kind"] = "Spin(7)"; break;
    case StructureBundle::Kind::G2: j["kind"] = "G2"; break;
    case StructureBundle::Kind::SU3: j["kind"] = "SU(3)"; break;
    case StructureBundle::Kind::SU4: j["kind"] = "SU(4)"; break;
  }
  j["name"] = b.name;
  j["family"] = b.family;
  j["dim"] = b.chart.dim();
  j["params"] = b.params;
  nlohmann::json coords = nlohmann::json::array();
  for (int i = 0; i < b.chart.dim(); ++i)
    coords.push_back({{"name", b.chart.coord_name(i)},
                      {"lo", b.chart.domain(i).lo},
                      {"hi", b.chart.domain(i).hi}});
  j["coords"] = coords;
  if (b.expected_holonomy_rank)
    j["expected_holonomy_rank"] = *b.expected_holonomy_rank;
  else
    j["expected_holonomy_rank"] = nullptr;
  if (b.foliation_coord >= 0)
    j["foliation_coord"] = b.chart.coord_name(b.foliation_coord);
  else
    j["foliation_coord"] = nullptr;
  nlohmann::json pots = nlohmann::json::array();
  for (const auto& [k, v] : b.connection_potentials) pots.push_back(k);
  j["connection_potentials"] = pots;
  j["has_printed_metric"] = b.printed_metric.has_value();
  j["notes"] = b.notes;
  return j.dump(2);
}

}  // namespace spin7
