// spin7cli — batch interface to the structure catalog and solvers:
//   list            catalog entries with construction family and kind
//   verify          invariant suite for one entry (JSON report)
//   holonomy        curvature-operator rank certificate
//   solve ode1      scalar root solve s^{1/3}(s+c) = A H
//   evolve ma       potential (Monge-Ampere type) grid evolution
//   evolve dude4    surface-harmonic second-order grid evolution
//   hitchin-check   hypersurface-flow residuals for foliated entries
//
// Exit codes: 0 pass, 1 verification failure, 2 usage/parameter/schema
// error, 3 inconclusive certificate, 4 solver abort.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <spin7/catalog.hpp>
#include <spin7/curvature.hpp>
#include <spin7/pde.hpp>
#include <spin7/rng.hpp>
#include <spin7/structures.hpp>

using nlohmann::json;
using namespace spin7;

namespace {

constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Small utilities
// ---------------------------------------------------------------------------

std::map<std::string, double> parseParams(
    const std::vector<std::string>& kvs) {
  std::map<std::string, double> out;
  for (const std::string& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--param expects key=value, got '" + kv +
                                 "'");
    out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  return out;
}

Point samplePoint(const Chart& c, Pcg32& rng, double margin = 0.1) {
  Eigen::VectorXd x(c.dim());
  for (int i = 0; i < c.dim(); ++i) {
    Interval iv = c.domain(i);
    // unbounded directions sample a fixed safe window
    if (!std::isfinite(iv.lo)) iv.lo = -2.0;
    if (!std::isfinite(iv.hi)) iv.hi = 2.0;
    double m = margin * (iv.hi - iv.lo);
    x[i] = rng.uniform(iv.lo + m, iv.hi - m);
  }
  return Point(c, std::move(x));
}

std::vector<Point> samplePoints(const Chart& c, int n, Pcg32& rng) {
  std::vector<Point> pts;
  pts.reserve(n);
  for (int k = 0; k < n; ++k) pts.push_back(samplePoint(c, rng));
  return pts;
}

void emitReport(const json& report, const std::string& path) {
  if (path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream out(path);
    out << report.dump(2) << "\n";
    std::cout << "report written to " << path << "\n";
  }
}

json baseReport(const std::string& command, std::uint64_t seed,
                bool single_thread) {
  json r;
  r["schema_version"] = kSchemaVersion;
  r["command"] = command;
  r["seed"] = seed;
  r["single_thread"] = single_thread;  // the reference path is the only path
  return r;
}

double wallMs(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

/// The metric of whichever structure the entry carries.
const MetricField& entryMetric(const StructureBundle& b) {
  switch (b.kind) {
    case StructureBundle::Kind::Spin7:
      return b.spin7->metric;
    case StructureBundle::Kind::G2:
      return b.g2->metric;
    case StructureBundle::Kind::SU3:
      return b.su3->metric;
    case StructureBundle::Kind::SU4:
      return b.su4->metric;
  }
  throw std::logic_error("unreachable");
}

double maxOver(const DifferentialForm& a, const std::vector<Point>& pts) {
  double m = 0.0;
  for (const Point& p : pts) m = std::max(m, a.maxAbsCoeff(p));
  return m;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct Criterion {
  std::string name;
  double residual;
  double tol;
  bool pass() const { return residual < tol; }
};

void addFormResidual(std::vector<Criterion>& cs, const std::string& name,
                     const DifferentialForm& a, const std::vector<Point>& pts,
                     double tol) {
  cs.push_back({name, maxOver(a, pts), tol});
}

std::vector<Criterion> verifyEntry(const StructureBundle& b, int points,
                                   Pcg32& rng, double dphi_tol) {
  std::vector<Criterion> cs;
  std::vector<Point> pts = samplePoints(b.chart, points, rng);
  std::vector<Point> few(pts.begin(),
                         pts.begin() + std::min<std::size_t>(5, pts.size()));
  std::vector<Point> mid(pts.begin(),
                         pts.begin() + std::min<std::size_t>(20, pts.size()));

  const MetricField& g = entryMetric(b);

  switch (b.kind) {
    case StructureBundle::Kind::Spin7: {
      addFormResidual(cs, "dPhi", exteriorDerivative(b.spin7->Phi), pts,
                      dphi_tol);
      DifferentialForm star = hodgeStar(b.spin7->Phi, g);
      addFormResidual(cs, "selfdual", star - b.spin7->Phi, few, 1e-9);
      DifferentialForm quad =
          wedge(b.spin7->Phi, b.spin7->Phi) - 14.0 * volumeForm(g);
      addFormResidual(cs, "PhiPhi_14vol", quad, few, 1e-9);
      break;
    }
    case StructureBundle::Kind::G2: {
      addFormResidual(cs, "dphi", exteriorDerivative(b.g2->phi), pts,
                      dphi_tol);
      addFormResidual(cs, "dstarphi", exteriorDerivative(b.g2->star_phi),
                      pts, dphi_tol);
      break;
    }
    case StructureBundle::Kind::SU3: {
      addFormResidual(cs, "domega", exteriorDerivative(b.su3->omega), pts,
                      dphi_tol);
      addFormResidual(cs, "dOmega_plus",
                      exteriorDerivative(b.su3->omega_plus), pts, dphi_tol);
      addFormResidual(cs, "dOmega_minus",
                      exteriorDerivative(b.su3->omega_minus), pts, dphi_tol);
      addFormResidual(cs, "compatibility", su3CompatibilityResidual(*b.su3),
                      few, 1e-9);
      break;
    }
    case StructureBundle::Kind::SU4: {
      addFormResidual(cs, "domega", exteriorDerivative(b.su4->omega), pts,
                      dphi_tol);
      addFormResidual(cs, "dOmega_plus",
                      exteriorDerivative(b.su4->Omega_plus), pts, dphi_tol);
      addFormResidual(cs, "dOmega_minus",
                      exteriorDerivative(b.su4->Omega_minus), pts, dphi_tol);
      break;
    }
  }

  // Ricci-flatness, relative to the metric scale.
  double ric = 0.0, gscale = 0.0;
  for (const Point& p : mid) {
    CurvatureSample s = curvatureAt(g, p);
    ric = std::max(ric, s.ricci.cwiseAbs().maxCoeff());
    gscale = std::max(gscale, g.valueMatrix(p).cwiseAbs().maxCoeff());
  }
  cs.push_back({"ricci_rel", ric / std::max(1e-300, gscale), 1e-6});

  if (b.printed_metric) {
    double d = 0.0;
    for (const Point& p : mid)
      d = std::max(d, (g.valueMatrix(p) - b.printed_metric->valueMatrix(p))
                          .cwiseAbs()
                          .maxCoeff());
    cs.push_back({"printed_metric", d, 1e-10});
  }

  if (b.red1) {
    ResidualReport r = check_reduction_I(*b.red1, samplePoints(b.red1->chart,
                                                               5, rng));
    cs.push_back({"reduction_I", r.maxResidual(), 1e-9});
  }
  if (b.red2) {
    ResidualReport r =
        check_reduction_II(*b.red2, samplePoints(b.red2->chart, 5, rng));
    cs.push_back({"reduction_II", r.maxResidual(), 1e-9});
  }
  return cs;
}

// ---------------------------------------------------------------------------
// evolve configuration
// ---------------------------------------------------------------------------

GridField gridFromJson(const json& j, double time_label) {
  std::vector<int> shape = j.at("shape").get<std::vector<int>>();
  std::vector<double> spacing = j.at("spacing").get<std::vector<double>>();
  std::vector<double> origin = j.at("origin").get<std::vector<double>>();
  std::vector<bool> periodic = j.at("periodic").get<std::vector<bool>>();
  GridField g{std::move(shape), std::move(spacing), std::move(origin),
              std::move(periodic), {}, time_label};
  g.values.assign(g.size(), 0.0);
  g.requireValid();
  return g;
}

void fillFromFunction(GridField& g,
                      const std::function<double(const std::vector<double>&)>&
                          f) {
  g = GridField::fromFunction(g.shape, g.spacing, g.origin, g.periodic, f,
                              g.time_label);
}

json evolutionJson(const EvolutionReport& rep) {
  return json::parse(rep.toJson());
}

int finishEvolution(const EvolutionReport& rep, json report,
                    const std::string& json_path,
                    const std::string& csv_path) {
  report["evolution"] = evolutionJson(rep);
  emitReport(report, json_path);
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    out << rep.final.toCsv();
    std::cout << "final grid written to " << csv_path << "\n";
  }
  if (rep.aborted) {
    std::cerr << "solver abort at step " << rep.abort_step << ": "
              << rep.abort_reason << "\n";
    return 4;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structure catalog verification and solver harness"};
  app.require_subcommand(1);

  std::uint64_t seed = 12345;
  bool single_thread = false;
  app.add_option("--seed", seed, "RNG seed (printed in every report)");
  app.add_flag("--single-thread", single_thread,
               "force the deterministic reference path (default behavior)");

  // ---- list ----
  auto* cmd_list = app.add_subcommand("list", "list catalog entries");
  bool list_json = false;
  cmd_list->add_flag("--json", list_json, "emit JSON instead of a table");

  // ---- verify ----
  auto* cmd_verify =
      app.add_subcommand("verify", "run the invariant suite for one entry");
  std::string v_name;
  std::vector<std::string> v_params;
  int v_points = 100;
  double v_tol = 1e-8;
  std::string v_json;
  cmd_verify->add_option("name", v_name, "catalog entry name")->required();
  cmd_verify->add_option("--param", v_params,
                         "entry parameter override, key=value (repeatable)");
  cmd_verify->add_option("--points", v_points, "sample point count");
  cmd_verify->add_option("--tol", v_tol, "closure residual tolerance");
  cmd_verify->add_option("--json", v_json, "write the report to this path");

  // ---- holonomy ----
  auto* cmd_hol = app.add_subcommand(
      "holonomy", "curvature-operator rank certificate for an entry "
                  "(name 'flat_model' uses the flat product structure)");
  std::string h_name;
  std::vector<std::string> h_params;
  int h_points = 4;
  std::string h_json;
  cmd_hol->add_option("name", h_name, "catalog entry name")->required();
  cmd_hol->add_option("--param", h_params, "entry parameter, key=value");
  cmd_hol->add_option("--points", h_points, "curvature sample points");
  cmd_hol->add_option("--json", h_json, "write the report to this path");

  // ---- solve ode1 ----
  auto* cmd_solve = app.add_subcommand("solve", "scalar solvers");
  auto* ode1 = cmd_solve->add_subcommand(
      "ode1", "solve s^(1/3)(s+c) = A H on the monotone branch");
  double o_A = 1.0, o_c = 0.0;
  std::optional<double> o_H;
  int o_samples = 10;
  std::string o_json;
  ode1->add_option("--A", o_A, "coefficient A")->required();
  ode1->add_option("--c", o_c, "offset c")->required();
  ode1->add_option("--H", o_H, "single right-hand side H");
  ode1->add_option("--samples", o_samples,
                   "when --H is absent, solve for this many H in [0.1, 10]");
  ode1->add_option("--json", o_json, "write the report to this path");

  // ---- evolve ----
  auto* cmd_evolve = app.add_subcommand("evolve", "grid evolvers");
  std::string e_config, e_json, e_csv;
  auto* ma = cmd_evolve->add_subcommand(
      "ma", "potential evolution F'' = 4 s(s+c) det(h)");
  ma->add_option("--config", e_config, "JSON config path")->required();
  ma->add_option("--json", e_json, "write the report to this path");
  ma->add_option("--csv", e_csv, "write the final grid to this path");
  auto* dude4 = cmd_evolve->add_subcommand(
      "dude4", "surface-harmonic evolution G u'' = y Lap u");
  dude4->add_option("--config", e_config, "JSON config path")->required();
  dude4->add_option("--json", e_json, "write the report to this path");
  dude4->add_option("--csv", e_csv, "write the final grid to this path");

  // ---- hitchin-check ----
  auto* cmd_hit = app.add_subcommand(
      "hitchin-check", "hypersurface-flow residuals for a foliated entry");
  std::string t_name, t_json;
  std::vector<std::string> t_params;
  int t_points = 4;
  double t_tol = 1e-9;
  cmd_hit->add_option("name", t_name, "catalog entry name")->required();
  cmd_hit->add_option("--param", t_params, "entry parameter, key=value");
  cmd_hit->add_option("--points", t_points, "sample point count");
  cmd_hit->add_option("--tol", t_tol, "residual tolerance");
  cmd_hit->add_option("--json", t_json, "write the report to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  Pcg32 rng(seed);

  try {
    // ------------------------------------------------------------------ list
    if (*cmd_list) {
      const char* kind_names[] = {"spin7", "g2", "su3", "su4"};
      if (list_json) {
        json out = json::array();
        for (const std::string& n : catalogNames())
          out.push_back(json::parse(bundleDescriptorJson(buildBundle(n))));
        std::cout << out.dump(2) << "\n";
      } else {
        for (const std::string& n : catalogNames()) {
          StructureBundle b = buildBundle(n);
          std::printf("%-16s %-6s %s\n", b.name.c_str(),
                      kind_names[static_cast<int>(b.kind)],
                      b.family.c_str());
        }
      }
      return 0;
    }

    // ---------------------------------------------------------------- verify
    if (*cmd_verify) {
      StructureBundle b = buildBundle(v_name, parseParams(v_params));
      std::vector<Criterion> cs = verifyEntry(b, v_points, rng, v_tol);
      json report = baseReport("verify", seed, single_thread);
      report["entry"] = b.name;
      report["params"] = b.params;
      report["points"] = v_points;
      json jc = json::object();
      bool all = true;
      std::string first_fail;
      for (const Criterion& c : cs) {
        jc[c.name] = {{"residual", c.residual},
                      {"tol", c.tol},
                      {"pass", c.pass()}};
        if (!c.pass() && all) first_fail = c.name;
        all = all && c.pass();
      }
      report["criteria"] = jc;
      report["pass"] = all;
      if (!single_thread) report["wall_ms"] = wallMs(t0);
      emitReport(report, v_json);
      if (!all) {
        std::cerr << "verification failed: " << first_fail << "\n";
        return 1;
      }
      return 0;
    }

    // -------------------------------------------------------------- holonomy
    if (*cmd_hol) {
      MetricField g = MetricField::euclidean(modelSpin7().chart);
      std::string shown = h_name;
      if (h_name == "flat_model") {
        // flat product fixture: rank 0
      } else {
        StructureBundle b = buildBundle(h_name, parseParams(h_params));
        g = entryMetric(b);
      }
      HolonomyCertificate cert =
          curvatureOperatorRank(g, samplePoints(g.chart(), h_points, rng));
      json report = baseReport("holonomy", seed, single_thread);
      report["entry"] = shown;
      report["points"] = h_points;
      report["rank"] = cert.operator_rank;
      report["gap_ratio"] = cert.gap_ratio;
      report["status"] = cert.certified ? "certified" : "inconclusive";
      if (!single_thread) report["wall_ms"] = wallMs(t0);
      emitReport(report, h_json);
      std::cout << shown << ": rank " << cert.operator_rank << " ("
                << report["status"].get<std::string>() << ")\n";
      return cert.certified ? 0 : 3;
    }

    // ------------------------------------------------------------ solve ode1
    if (*ode1) {
      json report = baseReport("solve ode1", seed, single_thread);
      report["A"] = o_A;
      report["c"] = o_c;
      json sols = json::array();
      std::vector<double> hs;
      if (o_H) {
        hs.push_back(*o_H);
      } else {
        for (int k = 0; k < o_samples; ++k) hs.push_back(rng.uniform(0.1, 10.0));
      }
      for (double H : hs) {
        double s = solve_s_of_H(o_A, o_c, H);
        double res = std::abs(o_A * H - std::cbrt(s) * (s + o_c));
        sols.push_back({{"H", H}, {"s", s}, {"residual", res}});
        std::cout << "H = " << H << "  ->  s = " << s << "\n";
      }
      report["solutions"] = sols;
      if (!single_thread) report["wall_ms"] = wallMs(t0);
      emitReport(report, o_json);
      return 0;
    }

    // ------------------------------------------------------------- evolve ma
    if (*ma) {
      std::ifstream in(e_config);
      if (!in) throw GridError("cannot open config " + e_config);
      json cfg = json::parse(in);
      double s0 = cfg.at("s_range").at(0), s1 = cfg.at("s_range").at(1);
      double c = cfg.value("c", 0.0);
      int steps = cfg.at("steps");
      GridField F0 = gridFromJson(cfg.at("grid"), s0);
      GridField F1 = F0;
      const json& init = cfg.at("initial");
      if (init.contains("preset")) {
        std::string preset = init.at("preset");
        if (preset == "constant") {
          // separable-in-pairs quadratic with linear-in-s coefficients
          double a = init.value("a", 0.0), bq = init.value("b", 0.0);
          double p = init.value("p", 1.0), q = init.value("q", 0.0);
          double c1 = (p + q * s0) + (a + bq * s0);
          double c2 = (p + q * s0) - (a + bq * s0);
          fillFromFunction(F0, [&](const std::vector<double>& x) {
            return -0.25 * (c1 * (x[0] * x[0] + x[1] * x[1]) +
                            c2 * (x[2] * x[2] + x[3] * x[3]));
          });
          fillFromFunction(F1, [&](const std::vector<double>& x) {
            return -0.25 * ((q + bq) * (x[0] * x[0] + x[1] * x[1]) +
                            (q - bq) * (x[2] * x[2] + x[3] * x[3]));
          });
        } else {
          throw GridError("unknown ma preset '" + preset + "'");
        }
      } else {
        F0.values = init.at("F0").get<std::vector<double>>();
        F1.values = init.at("F1").get<std::vector<double>>();
        F0.requireValid();
        F1.requireValid();
      }
      EvolutionReport rep = evolve_monge_ampere(F0, F1, c, {s0, s1}, steps);
      json report = baseReport("evolve ma", seed, single_thread);
      report["config"] = cfg;
      if (!single_thread) report["wall_ms"] = wallMs(t0);
      return finishEvolution(rep, std::move(report), e_json, e_csv);
    }

    // ---------------------------------------------------------- evolve dude4
    if (*dude4) {
      std::ifstream in(e_config);
      if (!in) throw GridError("cannot open config " + e_config);
      json cfg = json::parse(in);
      double y0 = cfg.at("y_range").at(0), y1 = cfg.at("y_range").at(1);
      int steps = cfg.at("steps");
      GridField u0 = gridFromJson(cfg.at("grid"), y0);
      GridField u1 = u0;
      GridField G = u0;
      const json& init = cfg.at("initial");
      if (init.contains("preset")) {
        std::string preset = init.at("preset");
        if (preset == "affine") {
          double p = init.value("p", 1.0), q = init.value("q", 0.0);
          fillFromFunction(u0, [&](const std::vector<double>&) {
            return p + q * y0;
          });
          fillFromFunction(u1,
                           [&](const std::vector<double>&) { return q; });
        } else {
          throw GridError("unknown dude4 preset '" + preset + "'");
        }
      } else {
        u0.values = init.at("u0").get<std::vector<double>>();
        u1.values = init.at("u1").get<std::vector<double>>();
        u0.requireValid();
        u1.requireValid();
      }
      const json& gj = cfg.at("G");
      if (gj.contains("constant")) {
        double v = gj.at("constant");
        fillFromFunction(G, [&](const std::vector<double>&) { return v; });
      } else {
        G.values = gj.at("values").get<std::vector<double>>();
        G.requireValid();
      }
      EvolutionReport rep = evolve_dude4(u0, u1, G, {y0, y1}, steps);
      json report = baseReport("evolve dude4", seed, single_thread);
      report["config"] = cfg;
      if (!single_thread) report["wall_ms"] = wallMs(t0);
      return finishEvolution(rep, std::move(report), e_json, e_csv);
    }

    // --------------------------------------------------------- hitchin-check
    if (*cmd_hit) {
      StructureBundle b = buildBundle(t_name, parseParams(t_params));
      if (b.kind != StructureBundle::Kind::Spin7 || b.foliation_coord < 0)
        throw ParameterError("entry '" + t_name +
                             "' declares no hypersurface foliation");
      ResidualReport r =
          hitchin_check(b, samplePoints(b.chart, t_points, rng));
      json report = baseReport("hitchin-check", seed, single_thread);
      report["entry"] = b.name;
      report["points"] = t_points;
      report["residuals"] = json::parse(r.toJson());
      bool pass = r.maxResidual() < t_tol;
      report["pass"] = pass;
      if (!single_thread) report["wall_ms"] = wallMs(t0);
      emitReport(report, t_json);
      return pass ? 0 : 1;
    }
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const RootError& e) {
    std::cerr << "solver abort: " << e.what() << "\n";
    return 4;
  } catch (const GridError& e) {
    std::cerr << "config/grid error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config schema error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
