#include "spin7/specialfns.hpp"

#include <array>
#include <cmath>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace spin7::specialfns {
namespace {

using State = std::array<double, 2>;

/// Dense solution of the linear ODE y'' = q(t)·y on a fixed grid, integrated
/// with RKF78 and interpolated by quintic Hermite using ODE-exact second
/// derivatives at the nodes. Evaluation never differences: d2 = q(t)·value.
class LinearOde2 {
 public:
  LinearOde2(std::function<double(double)> q, double t0, double t1,
             const State& init, double h_request = 0.005)
      : q_(std::move(q)), t0_(t0) {
    int nsteps = std::max(1, static_cast<int>(std::ceil(std::abs(t1 - t0) /
                                                        h_request)));
    h_ = (t1 - t0) / nsteps;  // signed step
    nodes_.reserve(nsteps + 1);
    boost::numeric::odeint::runge_kutta_fehlberg78<State> stepper;
    State y = init;
    nodes_.push_back(y);
    auto rhs = [this](const State& x, State& dxdt, double t) {
      dxdt[0] = x[1];
      dxdt[1] = q_(t) * x[0];
    };
    for (int k = 0; k < nsteps; ++k) {
      double t = t0_ + k * h_;
      // substeps for accuracy independent of the node spacing
      const int sub = 8;
      double hs = h_ / sub;
      for (int m = 0; m < sub; ++m) stepper.do_step(rhs, y, t + m * hs, hs);
      nodes_.push_back(y);
    }
  }

  double tBegin() const { return t0_; }
  double tEnd() const { return t0_ + h_ * (static_cast<double>(nodes_.size()) - 1.0); }

  void eval(double t, double& f, double& df) const {
    double u = (t - t0_) / h_;
    int k = static_cast<int>(std::floor(u));
    k = std::max(0, std::min(k, static_cast<int>(nodes_.size()) - 2));
    double tau = u - k;
    double ta = t0_ + k * h_, tb = ta + h_;
    const State& A = nodes_[k];
    const State& B = nodes_[k + 1];
    double a0 = A[0], a1 = A[1] * h_, a2 = q_(ta) * A[0] * h_ * h_;
    double b0 = B[0], b1 = B[1] * h_, b2 = q_(tb) * B[0] * h_ * h_;
    double t2 = tau * tau, t3 = t2 * tau, t4 = t3 * tau, t5 = t4 * tau;
    double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    double H1 = tau - 6 * t3 + 8 * t4 - 3 * t5;
    double H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    double H3 = 10 * t3 - 15 * t4 + 6 * t5;
    double H4 = -4 * t3 + 7 * t4 - 3 * t5;
    double H5 = 0.5 * t3 - t4 + 0.5 * t5;
    f = a0 * H0 + a1 * H1 + a2 * H2 + b0 * H3 + b1 * H4 + b2 * H5;
    double d0 = -30 * t2 + 60 * t3 - 30 * t4;
    double d1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    double d2 = tau - 4.5 * t2 + 6 * t3 - 2.5 * t4;
    double d3 = 30 * t2 - 60 * t3 + 30 * t4;
    double d4 = -12 * t2 + 28 * t3 - 15 * t4;
    double d5 = 1.5 * t2 - 4 * t3 + 2.5 * t4;
    df = (a0 * d0 + a1 * d1 + a2 * d2 + b0 * d3 + b1 * d4 + b2 * d5) / h_;
  }

  /// Multiply the solution (and its derivative) by a constant.
  void scale(double c) {
    for (auto& s : nodes_) {
      s[0] *= c;
      s[1] *= c;
    }
  }

 private:
  std::function<double(double)> q_;
  double t0_;
  double h_;
  std::vector<State> nodes_;
};

struct AiryTable {
  LinearOde2 right;
  LinearOde2 left;
  AiryTable()
      : right([](double y) { return y; }, 0.0, 10.0, {kAi0, kAiPrime0}),
        left([](double y) { return y; }, 0.0, -10.0, {kAi0, kAiPrime0}) {}
  void eval(double y, double& f, double& df) const {
    if (y >= 0.0)
      right.eval(y, f, df);
    else
      left.eval(y, f, df);
  }
};

const AiryTable& airyTable() {
  static const AiryTable t;
  return t;
}

/// v(s) = U(0, √2 s) built by backward integration from s = 12 with an
/// arbitrary small seed (the decaying branch dominates backwards), then
/// normalized to v(0) = U(0,0). The seed transient dies off well before the
/// working domain [0, 10].
struct PcfTable {
  LinearOde2 sol;
  PcfTable() : sol([](double s) { return s * s; }, 12.0, 0.0, {1e-30, -1e-30 * 12.0}) {
    double f, df;
    sol.eval(0.0, f, df);
    sol.scale(kU00 / f);
  }
  void eval(double s, double& f, double& df) const { sol.eval(s, f, df); }
};

const PcfTable& pcfTable() {
  static const PcfTable t;
  return t;
}

}  // namespace

void airy_ai(double y, double& f, double& df, double& ddf) {
  if (y < -10.0 || y > 10.0)
    throw DomainError("airy_ai: argument outside [-10, 10]");
  airyTable().eval(y, f, df);
  ddf = y * f;  // defining ODE
}

void pcf_u0(double s, double& f, double& df, double& ddf) {
  if (s < 0.0 || s > 10.0)
    throw DomainError("pcf_u0: argument outside [0, 10]");
  pcfTable().eval(s, f, df);
  ddf = s * s * f;  // defining ODE v̈ = s² v
}

double domain_threshold_u_less_one() {
  double f, df, ddf;
  pcf_u0(0.0, f, df, ddf);
  if (f < 1.0) return 0.0;
  double lo = 0.0, hi = 10.0;
  pcf_u0(hi, f, df, ddf);
  if (f >= 1.0)
    throw EvaluationError("pcf threshold: v never drops below 1 on [0,10]");
  while (hi - lo > 1e-10) {
    double mid = 0.5 * (lo + hi);
    pcf_u0(mid, f, df, ddf);
    (f >= 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Univariate airyUnivariate() {
  return Univariate{"airy_ai", [](double y, double& f, double& df, double& ddf) {
                      airy_ai(y, f, df, ddf);
                    }};
}

Univariate pcfUnivariate() {
  return Univariate{"pcf_u0", [](double s, double& f, double& df, double& ddf) {
                      pcf_u0(s, f, df, ddf);
                    }};
}

Univariate airyPrimeUnivariate() {
  return Univariate{"airy_ai_prime",
                    [](double y, double& f, double& df, double& ddf) {
                      double ai, dai, ddai;
                      airy_ai(y, ai, dai, ddai);
                      f = dai;
                      df = y * ai;           // Ai'' = y Ai
                      ddf = y * dai + ai;    // Ai''' = y Ai' + Ai
                    }};
}

Univariate pcfPrimeUnivariate() {
  return Univariate{"pcf_u0_prime",
                    [](double s, double& f, double& df, double& ddf) {
                      double v, dv, ddv;
                      pcf_u0(s, v, dv, ddv);
                      f = dv;
                      df = s * s * v;              // v'' = s² v
                      ddf = s * s * dv + 2 * s * v;
                    }};
}

}  // namespace spin7::specialfns
