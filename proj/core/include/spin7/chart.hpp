#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spin7 {

/// Thrown when a point lies outside a chart's validity region.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when fields/forms living on different charts are combined.
struct ChartMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when an evaluation hits a numerical degeneracy (division by a
/// vanishing denominator, non-positive-definite metric, ...).
struct EvaluationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool contains(double x) const { return x > lo && x < hi; }
};

namespace detail {
struct ChartData {
  int dim = 0;
  std::vector<std::string> coord_names;
  std::vector<bool> periodic;
  std::vector<Interval> domain_box;
  std::vector<double> period;
};
}  // namespace detail

class Point;

/// A single local coordinate chart. All fields, forms and metrics in this
/// library live on exactly one chart; there are no transition functions.
class Chart {
 public:
  Chart() = default;

  static Chart make(std::vector<std::string> names,
                    std::vector<bool> periodic = {},
                    std::vector<Interval> box = {},
                    double default_period = 2.0 * M_PI) {
    auto d = std::make_shared<detail::ChartData>();
    d->dim = static_cast<int>(names.size());
    if (d->dim <= 0) throw std::invalid_argument("chart needs >= 1 coordinate");
    d->coord_names = std::move(names);
    d->periodic = periodic.empty() ? std::vector<bool>(d->dim, false)
                                   : std::move(periodic);
    if (box.empty()) box.assign(d->dim, Interval{});
    d->domain_box = std::move(box);
    d->period.assign(d->dim, default_period);
    for (int i = 0; i < d->dim; ++i) {
      if (d->periodic[i])
        d->domain_box[i] = Interval{-2.0 * default_period, 2.0 * default_period};
      if (!(d->domain_box[i].lo < d->domain_box[i].hi))
        throw std::invalid_argument("empty domain interval");
    }
    Chart c;
    c.data_ = std::move(d);
    return c;
  }

  int dim() const { return data_->dim; }
  const std::string& coord_name(int i) const { return data_->coord_names[i]; }
  bool periodic(int i) const { return data_->periodic[i]; }
  double period(int i) const { return data_->period[i]; }
  const Interval& domain(int i) const { return data_->domain_box[i]; }

  bool same(const Chart& other) const { return data_ == other.data_; }

  inline Point point(Eigen::VectorXd coords) const;
  inline Point point(std::initializer_list<double> coords) const;

  friend bool operator==(const Chart& a, const Chart& b) {
    return a.data_ == b.data_;
  }

 private:
  std::shared_ptr<const detail::ChartData> data_;
};

/// A point of a chart. Periodic coordinates are stored as given (all field
/// evaluations are periodic by construction), non-periodic ones are checked
/// against the chart's domain box.
class Point {
 public:
  Point(Chart chart, Eigen::VectorXd coords)
      : chart_(std::move(chart)), x_(std::move(coords)) {
    if (x_.size() != chart_.dim())
      throw std::invalid_argument("coordinate count does not match chart dim");
    for (int i = 0; i < chart_.dim(); ++i) {
      if (chart_.periodic(i)) {
        double p = chart_.period(i);
        x_[i] -= p * std::floor(x_[i] / p);
      } else if (!chart_.domain(i).contains(x_[i])) {
        throw DomainError("coordinate '" + chart_.coord_name(i) + "' = " +
                          std::to_string(x_[i]) + " outside domain (" +
                          std::to_string(chart_.domain(i).lo) + ", " +
                          std::to_string(chart_.domain(i).hi) + ")");
      }
    }
  }

  const Chart& chart() const { return chart_; }
  const Eigen::VectorXd& coords() const { return x_; }
  double operator[](int i) const { return x_[i]; }
  int dim() const { return chart_.dim(); }

 private:
  Chart chart_;
  Eigen::VectorXd x_;
};

inline Point Chart::point(Eigen::VectorXd coords) const {
  return Point(*this, std::move(coords));
}

inline Point Chart::point(std::initializer_list<double> coords) const {
  Eigen::VectorXd v(static_cast<long>(coords.size()));
  int i = 0;
  for (double c : coords) v[i++] = c;
  return Point(*this, std::move(v));
}

}  // namespace spin7
