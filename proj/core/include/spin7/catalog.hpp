#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spin7/structures.hpp"

namespace spin7 {

/// Thrown when a requested catalog entry does not exist or its parameters
/// violate the entry's validity region. The message names the violated
/// inequality.
struct ParameterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// SU(4)-structure data on an 8-chart: a (1,1)-form, the real/imaginary
/// parts of the (4,0)-form, the complex structure and the induced metric.
struct SU4Data {
  Chart chart;
  DifferentialForm omega;
  DifferentialForm Omega_plus;   // Re of the (4,0)-form
  DifferentialForm Omega_minus;  // Im of the (4,0)-form
  FieldMatrix J;
  MetricField metric;
};

/// A hyperkahler triple produced by the Gibbons-Hawking ansatz (or supplied
/// directly): three symplectic forms with the quaternionic wedge relations,
/// an optional compatible form for the opposite orientation, and the metric.
struct HyperkahlerData {
  Chart chart;  // contains at least the base coordinates and the fibre
  DifferentialForm omega1, omega2, omega3;
  std::optional<DifferentialForm> omega0;  // anti-self-dual companion
  MetricField metric;
};

/// Normal-form data of the one-parameter reduction, kept for residual
/// checking: on a chart containing the four base coordinates, the evolution
/// coordinate s and the connection fibre, the triple (ω̃1, ω2, ω3), the
/// connection form α, the positive function u and the base complex
/// structure J1 (zero on the non-base directions).
struct ReductionICheckData {
  Chart chart;
  std::vector<int> base;  // indices of the four base coordinates
  int s_idx = -1;
  double A = 1.0;
  double c = 0.0;
  DifferentialForm omt1, om2, om3, alpha;
  ScalarField u;
  FieldMatrix J1;
};

/// Normal-form data of the two-parameter reduction on the full 8-chart:
/// ω̃ = F dx1∧dx2 together with the connection forms (α, κ, ξ, η) and the
/// positive functions u(y, x) and w(s, x). The surface directions are the
/// first two chart coordinates.
struct ReductionIICheckData {
  Chart chart;
  int s_idx = -1;
  int y_idx = -1;
  DifferentialForm omt, alpha, kappa, xi, eta;
  ScalarField u, w;
};

/// A named, fully assembled example. Exactly one of the structure members
/// matching `kind` is populated; Spin(7) entries also carry the reduction
/// data (s, H, eta, xi and the quotient SU(3)-structure) they were
/// assembled from, so torsion and foliation checks can reuse it. G2
/// entries additionally keep the quotient SU(3)-structure for
/// cross-checks of the closed-and-coclosed conditions.
struct StructureBundle {
  enum class Kind { Spin7, G2, SU3, SU4 };

  std::string name;
  Kind kind = Kind::Spin7;
  Chart chart;

  std::optional<Spin7Structure> spin7;
  std::optional<ReductionData> reduction;  // present iff kind == Spin7
  std::optional<G2Structure> g2;
  std::optional<SU3Structure> su3;
  std::optional<SU4Data> su4;

  /// Normal-form data for the reduction residual checkers, present on the
  /// entries whose construction exposes it in chart coordinates.
  std::optional<ReductionICheckData> red1;
  std::optional<ReductionIICheckData> red2;

  std::map<std::string, double> params;
  std::map<std::string, DifferentialForm> connection_potentials;

  /// Human-readable construction family (used by the CLI listing).
  std::string family;

  /// Expected rank of the curvature operator (holonomy algebra dimension),
  /// when the construction asserts one; nullopt means "unknown".
  std::optional<int> expected_holonomy_rank;

  /// Displayed closed-form metric to compare against the assembled one,
  /// for entries that come with an explicit coordinate expression.
  std::optional<MetricField> printed_metric;

  /// Coordinate index of the evolution parameter (t or s) for foliation /
  /// Hitchin-flow checks; -1 when no foliation is declared.
  int foliation_coord = -1;

  /// Recorded convention choices (sign fixes, coordinate identifications).
  std::vector<std::string> notes;

  /// A point in the entry's validity region (used to calibrate orientation
  /// and as a deterministic sample anchor).
  Point samplePoint() const;
};

/// All registered entry names, in listing order.
std::vector<std::string> catalogNames();

/// Build a catalog entry. Unknown names and parameters outside the entry's
/// validity region throw ParameterError. Omitted parameters take the
/// entry's documented defaults.
StructureBundle buildBundle(const std::string& name,
                            const std::map<std::string, double>& params = {});

/// Gibbons-Hawking triple from a positive harmonic V on a 3-dimensional
/// slice of `chart` (coordinates x, y, z at indices 0,1,2; the fibre
/// coordinate at index `fibre`). `theta` must satisfy dθ = −*dV; both the
/// harmonicity of V and the curvature identity are verified at the given
/// sample points (tolerance 1e-9) before the triple is returned.
HyperkahlerData gibbonsHawkingTriple(const ScalarField& V,
                                     const DifferentialForm& theta, int fibre,
                                     const std::vector<Point>& check_points);

/// JSON descriptor of an entry: name, kind, family, params, chart (names
/// and sampling box), expected rank, notes.
std::string bundleDescriptorJson(const StructureBundle& b);

}  // namespace spin7
