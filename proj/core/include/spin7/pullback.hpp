#pragma once

#include "spin7/forms.hpp"

namespace spin7 {

/// An affine coordinate map between charts: each source coordinate is either
/// a target coordinate (source_to_target[i] >= 0) or frozen at fixed[i].
/// Covers both inclusions (hypersurface/base slices, extra coords frozen) and
/// projections (fiber coordinates of the target absent from the source).
struct CoordMap {
  Chart source;
  Chart target;
  std::vector<int> source_to_target;  // length = source.dim(), -1 if frozen
  Eigen::VectorXd fixed;              // used where source_to_target[i] == -1

  static CoordMap byName(const Chart& source, const Chart& target,
                         const Eigen::VectorXd& fixed_defaults = {}) {
    CoordMap m{source, target, std::vector<int>(source.dim(), -1),
               Eigen::VectorXd::Zero(source.dim())};
    if (fixed_defaults.size() == source.dim()) m.fixed = fixed_defaults;
    for (int i = 0; i < source.dim(); ++i)
      for (int j = 0; j < target.dim(); ++j)
        if (source.coord_name(i) == target.coord_name(j)) {
          m.source_to_target[i] = j;
          break;
        }
    return m;
  }

  Point lift(const Point& q) const {
    Eigen::VectorXd x = fixed;
    for (int i = 0; i < source.dim(); ++i)
      if (source_to_target[i] >= 0) x[i] = q[source_to_target[i]];
    return Point(source, std::move(x));
  }
};

/// Pull back a scalar field along the map: (f ∘ map)(q), with the jet
/// reindexed through the selection matrix (exact, no truncation).
inline ScalarField pullback(const ScalarField& f, const CoordMap& m) {
  if (!f.chart().same(m.source))
    throw ChartMismatch("pullback: field not on the map's source chart");
  auto map = std::make_shared<CoordMap>(m);
  auto src = std::make_shared<ScalarField>(f);
  return ScalarField::fromFunction(m.target, [map, src](const Point& q) {
    Jet2 j = (*src)(map->lift(q));
    Jet2 r(q.dim(), j.value);
    r.order = j.order;
    const auto& s2t = map->source_to_target;
    for (size_t i = 0; i < s2t.size(); ++i) {
      if (s2t[i] < 0) continue;
      r.grad[s2t[i]] = j.grad[static_cast<int>(i)];
      for (size_t k = 0; k < s2t.size(); ++k)
        if (s2t[k] >= 0)
          r.hess(s2t[i], s2t[k]) =
              j.hess(static_cast<int>(i), static_cast<int>(k));
    }
    return r;
  });
}

/// Pull back a differential form: dx_i ↦ dx_{map(i)} or 0 where frozen.
inline DifferentialForm pullback(const DifferentialForm& a, const CoordMap& m) {
  DifferentialForm r(m.target, a.degree());
  for (const auto& [idx, f] : a.coeffs()) {
    MultiIndex mapped;
    bool alive = true;
    for (int i : idx) {
      if (m.source_to_target[i] < 0) {
        alive = false;
        break;
      }
      mapped.push_back(m.source_to_target[i]);
    }
    if (alive) r.addTerm(std::move(mapped), pullback(f, m));
  }
  return r;
}

}  // namespace spin7
