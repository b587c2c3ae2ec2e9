#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "circle.hpp"
#include "errors.hpp"
#include "json_util.hpp"

namespace tubegeo {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative tolerance for cone membership tests.
inline constexpr double kConeTol = 1e-12;

enum class FaceKind { empty, point, segment, ray, unsupported };

inline const char* to_string(FaceKind k) {
  switch (k) {
    case FaceKind::empty: return "empty";
    case FaceKind::point: return "point";
    case FaceKind::segment: return "segment";
    case FaceKind::ray: return "ray";
    case FaceKind::unsupported: return "unsupported";
  }
  return "?";
}

// How to pick a point of a face that is not a single point.
struct FaceSelection {
  enum class Mode { point_only, ray_offset, segment_param };
  Mode mode = Mode::point_only;
  double s = 0.0;  // distance along a ray from its base
  double t = 0.5;  // position on a segment, 0 = first end
};

// P_D(v) = {p in closure(Re D) : <x - p, v> < 0 for all x in Re D}.
struct FaceDescription {
  FaceKind kind = FaceKind::empty;
  Eigen::VectorXd p0, p1, dir;

  static FaceDescription empty() { return {}; }
  static FaceDescription unsupported() { return {FaceKind::unsupported, {}, {}, {}}; }
  static FaceDescription point(Eigen::VectorXd p) { return {FaceKind::point, std::move(p), {}, {}}; }
  static FaceDescription segment(Eigen::VectorXd a, Eigen::VectorXd b) {
    if ((a - b).norm() == 0.0) return point(std::move(a));
    return {FaceKind::segment, std::move(a), std::move(b), {}};
  }
  static FaceDescription ray(Eigen::VectorXd base, Eigen::VectorXd d) {
    d.normalize();
    return {FaceKind::ray, std::move(base), {}, std::move(d)};
  }

  double distance_to(const Eigen::VectorXd& x) const {
    switch (kind) {
      case FaceKind::point:
        return (x - p0).norm();
      case FaceKind::segment: {
        const Eigen::VectorXd e = p1 - p0;
        const double t = std::clamp((x - p0).dot(e) / e.squaredNorm(), 0.0, 1.0);
        return (x - p0 - t * e).norm();
      }
      case FaceKind::ray: {
        const double t = std::max(0.0, (x - p0).dot(dir));
        return (x - p0 - t * dir).norm();
      }
      default:
        return kInf;
    }
  }

  std::optional<Eigen::VectorXd> select(const FaceSelection& sel) const {
    switch (kind) {
      case FaceKind::point:
        return p0;
      case FaceKind::segment:
        if (sel.mode == FaceSelection::Mode::point_only) return std::nullopt;
        return ((1.0 - sel.t) * p0 + sel.t * p1).eval();
      case FaceKind::ray:
        if (sel.mode == FaceSelection::Mode::point_only) return std::nullopt;
        return (p0 + (sel.mode == FaceSelection::Mode::ray_offset ? sel.s : 0.0) * dir).eval();
      default:
        return std::nullopt;
    }
  }

  FaceDescription mapped(const Eigen::MatrixXd& Q) const {
    FaceDescription f = *this;
    if (p0.size()) f.p0 = Q * p0;
    if (p1.size()) f.p1 = Q * p1;
    if (dir.size()) f.dir = (Q * dir).normalized();
    return f;
  }
};

enum class DomainFamily { bounded, Dn, halfplaneW, general };

inline const char* to_string(DomainFamily f) {
  switch (f) {
    case DomainFamily::bounded: return "bounded";
    case DomainFamily::Dn: return "Dn";
    case DomainFamily::halfplaneW: return "halfplaneW";
    case DomainFamily::general: return "general";
  }
  return "?";
}

// The base Re D of a convex tube D = Re D + iR^n.  `support` is
// sup over Re D of <x, v>; W_D is where it is finite and S_D is the polar
// cone of W_D.
class BaseShape {
 public:
  virtual ~BaseShape() = default;
  virtual int dim() const = 0;
  virtual std::string name() const = 0;
  virtual json params() const { return json::object(); }
  virtual bool contains(const Eigen::VectorXd& x) const = 0;
  virtual double support(const Eigen::VectorXd& v) const = 0;
  virtual FaceDescription face(const Eigen::VectorXd& v) const = 0;
  virtual bool in_wd(const Eigen::VectorXd& v) const { return std::isfinite(support(v)); }
  virtual bool in_wd_closure(const Eigen::VectorXd& v) const = 0;
  // nullopt when the shape cannot decide.
  virtual std::optional<bool> in_wd_interior(const Eigen::VectorXd& v) const = 0;
  virtual bool in_sd(const Eigen::VectorXd& y) const = 0;
  virtual bool strictly_convex() const { return false; }
  virtual DomainFamily family() const { return DomainFamily::general; }
  virtual Eigen::VectorXd interior_point() const = 0;
  // Typical length scale of the base near interior_point.
  virtual double scale() const { return 1.0; }
  virtual json descriptor() const { return json{{"builtin", name()}, {"params", params()}}; }
};

class TubeDomain {
 public:
  TubeDomain() = default;
  explicit TubeDomain(std::shared_ptr<const BaseShape> s) : shape_(std::move(s)) {}

  int dim() const { return shape_->dim(); }
  std::string name() const { return shape_->name(); }
  bool contains(const Eigen::VectorXd& x) const { check(x); return shape_->contains(x); }
  double support(const Eigen::VectorXd& v) const { check(v); return shape_->support(v); }
  FaceDescription face(const Eigen::VectorXd& v) const { check(v); return shape_->face(v); }
  bool in_wd(const Eigen::VectorXd& v) const { check(v); return shape_->in_wd(v); }
  bool in_wd_closure(const Eigen::VectorXd& v) const { check(v); return shape_->in_wd_closure(v); }
  std::optional<bool> in_wd_interior(const Eigen::VectorXd& v) const { check(v); return shape_->in_wd_interior(v); }
  bool in_sd(const Eigen::VectorXd& y) const { check(y); return shape_->in_sd(y); }
  bool strictly_convex() const { return shape_->strictly_convex(); }
  DomainFamily family() const { return shape_->family(); }
  Eigen::VectorXd interior_point() const { return shape_->interior_point(); }
  double scale() const { return shape_->scale(); }
  json descriptor() const { return shape_->descriptor(); }
  const BaseShape& shape() const { return *shape_; }
  explicit operator bool() const { return static_cast<bool>(shape_); }

 private:
  void check(const Eigen::VectorXd& x) const {
    if (x.size() != shape_->dim())
      throw InvalidArgument("domain " + shape_->name() + ": expected a vector of length " +
                            std::to_string(shape_->dim()) + ", got " + std::to_string(x.size()));
  }
  std::shared_ptr<const BaseShape> shape_;
};

namespace shapes {

inline double rel(const Eigen::VectorXd& v) { return kConeTol * std::max(v.norm(), 1e-300); }

inline Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

// Closed-form faces below test exact signs: traces of h are accurate to full
// relative precision componentwise, so a tiny positive entry is genuine.

// Cone tests shared by shapes with closure(W_D) = [0, inf)^n.
struct OrthantCone {
  static bool closure(const Eigen::VectorXd& v) { return (v.array() >= -rel(v)).all(); }
  static bool interior(const Eigen::VectorXd& v) { return (v.array() > rel(v)).all(); }
  static bool polar(const Eigen::VectorXd& y) { return (y.array() <= rel(y)).all(); }
};

// {(max(x1+1,0))^2 + (max(x2+1,0))^2 < 1}
class QuarterCircle : public BaseShape {
 public:
  int dim() const override { return 2; }
  std::string name() const override { return "quarter-circle"; }
  bool contains(const Eigen::VectorXd& x) const override {
    const double a = std::max(x[0] + 1, 0.0), b = std::max(x[1] + 1, 0.0);
    return a * a + b * b < 1.0;
  }
  double support(const Eigen::VectorXd& v) const override {
    if (v[0] < 0 || v[1] < 0) return kInf;
    return v.norm() - v[0] - v[1];
  }
  FaceDescription face(const Eigen::VectorXd& v) const override {
    const double t = 0.0;
    if (v[0] > t && v[1] > t) return FaceDescription::point(v / v.norm() - vec2(1, 1));
    if (std::abs(v[0]) <= t && v[1] > t) return FaceDescription::ray(vec2(-1, 0), vec2(-1, 0));
    if (v[0] > t && std::abs(v[1]) <= t) return FaceDescription::ray(vec2(0, -1), vec2(0, -1));
    return FaceDescription::empty();
  }
  bool in_wd_closure(const Eigen::VectorXd& v) const override { return OrthantCone::closure(v); }
  std::optional<bool> in_wd_interior(const Eigen::VectorXd& v) const override { return OrthantCone::interior(v); }
  bool in_sd(const Eigen::VectorXd& y) const override { return OrthantCone::polar(y); }
  DomainFamily family() const override { return DomainFamily::Dn; }
  Eigen::VectorXd interior_point() const override { return vec2(-1.5, -1.5); }
};

// {x1, x2 < 0, x1 x2 > 1}
class Hyperbola : public BaseShape {
 public:
  int dim() const override { return 2; }
  std::string name() const override { return "hyperbola"; }
  bool contains(const Eigen::VectorXd& x) const override { return x[0] < 0 && x[1] < 0 && x[0] * x[1] > 1; }
  double support(const Eigen::VectorXd& v) const override {
    if (v[0] < 0 || v[1] < 0) return kInf;
    return -2.0 * std::sqrt(v[0] * v[1]);
  }
  FaceDescription face(const Eigen::VectorXd& v) const override {
    const double t = 0.0;
    if (v[0] > t && v[1] > t) return FaceDescription::point(vec2(-std::sqrt(v[1] / v[0]), -std::sqrt(v[0] / v[1])));
    return FaceDescription::empty();
  }
  bool in_wd_closure(const Eigen::VectorXd& v) const override { return OrthantCone::closure(v); }
  std::optional<bool> in_wd_interior(const Eigen::VectorXd& v) const override { return OrthantCone::interior(v); }
  bool in_sd(const Eigen::VectorXd& y) const override { return OrthantCone::polar(y); }
  bool strictly_convex() const override { return true; }
  DomainFamily family() const override { return DomainFamily::Dn; }
  Eigen::VectorXd interior_point() const override { return vec2(-2, -2); }
  double scale() const override { return 2.0; }
};

// {x1, x2 < 0, x2 < -x1^{-2}}
class DPrime : public BaseShape {
 public:
  int dim() const override { return 2; }
  std::string name() const override { return "dprime"; }
  bool contains(const Eigen::VectorXd& x) const override {
    return x[0] < 0 && x[1] < 0 && x[1] < -1.0 / (x[0] * x[0]);
  }
  double support(const Eigen::VectorXd& v) const override {
    if (v[0] < 0 || v[1] < 0) return kInf;
    return -3.0 * std::pow(2.0, -2.0 / 3.0) * std::cbrt(v[0] * v[0] * v[1]);
  }
  FaceDescription face(const Eigen::VectorXd& v) const override {
    const double t = 0.0;
    if (v[0] > t && v[1] > t)
      return FaceDescription::point(vec2(-std::cbrt(2 * v[1] / v[0]), -std::pow(v[0] / (2 * v[1]), 2.0 / 3.0)));
    return FaceDescription::empty();
  }
  bool in_wd_closure(const Eigen::VectorXd& v) const override { return OrthantCone::closure(v); }
  std::optional<bool> in_wd_interior(const Eigen::VectorXd& v) const override { return OrthantCone::interior(v); }
  bool in_sd(const Eigen::VectorXd& y) const override { return OrthantCone::polar(y); }
  bool strictly_convex() const override { return true; }
  DomainFamily family() const override { return DomainFamily::Dn; }
  Eigen::VectorXd interior_point() const override { return vec2(-2, -2); }
  double scale() const override { return 2.0; }
};

// {x1 > 0, x2 > x1^2}
class HalfParabola : public BaseShape {
 public:
  int dim() const override { return 2; }
  std::string name() const override { return "half-parabola"; }
  bool contains(const Eigen::VectorXd& x) const override { return x[0] > 0 && x[1] > x[0] * x[0]; }
  double support(const Eigen::VectorXd& v) const override {
    if (v[1] < 0) return v[0] > 0 ? -v[0] * v[0] / (4 * v[1]) : 0.0;
    if (v[1] == 0 && v[0] <= 0) return 0.0;
    return kInf;
  }
  FaceDescription face(const Eigen::VectorXd& v) const override {
    const double t = 0.0;
    if (v[1] < -t) {
      if (v[0] > t) return FaceDescription::point(vec2(-v[0] / (2 * v[1]), v[0] * v[0] / (4 * v[1] * v[1])));
      return FaceDescription::point(vec2(0, 0));
    }
    if (std::abs(v[1]) <= t && v[0] < -t) return FaceDescription::ray(vec2(0, 0), vec2(0, 1));
    return FaceDescription::empty();
  }
  bool in_wd(const Eigen::VectorXd& v) const override { return std::isfinite(support(v)); }
  bool in_wd_closure(const Eigen::VectorXd& v) const override { return v[1] <= rel(v); }
  std::optional<bool> in_wd_interior(const Eigen::VectorXd& v) const override { return v[1] < -rel(v); }
  bool in_sd(const Eigen::VectorXd& y) const override {
    return std::abs(y[0]) <= rel(y) && y[1] >= -rel(y);
  }
  bool strictly_convex() const override { return false; }
  DomainFamily family() const override { return DomainFamily::halfplaneW; }
  Eigen::VectorXd interior_point() const override { return vec2(0.5, 1.0); }
};

// {x2 > 0, x3 > sqrt(x1^2 + x2^2)}
class HalfCone : public BaseShape {
 public:
  int dim() const override { return 3; }
  std::string name() const override { return "half-cone"; }
  bool contains(const Eigen::VectorXd& x) const override {
    return x[1] > 0 && x[2] > std::hypot(x[0], x[1]);
  }
  // W_D = {M(v) <= 0}; interior is {M(v) < 0}.
  static double margin(const Eigen::VectorXd& v) {
    return (v[1] >= 0 ? std::hypot(v[0], v[1]) : std::abs(v[0])) + v[2];
  }
  double support(const Eigen::VectorXd& v) const override { return margin(v) <= 0 ? 0.0 : kInf; }
  FaceDescription face(const Eigen::VectorXd& v) const override {
    const double t = rel(v);
    const double m = margin(v);
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
    if (v.norm() == 0.0 || m > t) return FaceDescription::empty();
    if (m < -t) return FaceDescription::point(zero);
    Eigen::VectorXd d(3);
    if (v[1] >= 0) {
      const double r = std::hypot(v[0], v[1]);
      d << v[0] / r, v[1] / r, 1.0;
    } else if (std::abs(v[0]) > t) {
      d << (v[0] > 0 ? 1.0 : -1.0), 0.0, 1.0;
    } else {
      return FaceDescription::unsupported();
    }
    return FaceDescription::ray(zero, d);
  }
  bool in_wd(const Eigen::VectorXd& v) const override { return margin(v) <= 0; }
  bool in_wd_closure(const Eigen::VectorXd& v) const override { return margin(v) <= rel(v); }
  std::optional<bool> in_wd_interior(const Eigen::VectorXd& v) const override { return margin(v) < -rel(v); }
  bool in_sd(const Eigen::VectorXd& y) const override {
    return y[1] >= -rel(y) && y[2] >= std::hypot(y[0], y[1]) - rel(y);
  }
  DomainFamily family() const override { return DomainFamily::general; }
  Eigen::VectorXd interior_point() const override {
    Eigen::VectorXd x(3);
    x << 0.0, 1.0, 2.0;
    return x;
  }
};

// log G_{a,p,q} = {x1, x2 < 0, p x1 + q x2 < log a}
class GapqLog : public BaseShape {
 public:
  GapqLog(double a, double p, double q) : a_(a), p_(p), q_(q), l_(std::log(a)) {
    if (!(a > 0 && a < 1) || !(p > 0) || !(q > 0))
      throw InvalidArgument("gapq: need 0 < a < 1 and p, q > 0");
  }
  int dim() const override { return 2; }
  std::string name() const override { return "gapq-log"; }
  json params() const override { return json{{"a", a_}, {"p", p_}, {"q", q_}}; }
  bool contains(const Eigen::VectorXd& x) const override {
    return x[0] < 0 && x[1] < 0 && p_ * x[0] + q_ * x[1] < l_;
  }
  Eigen::VectorXd vertex1() const { return vec2(l_ / p_, 0.0); }
  Eigen::VectorXd vertex2() const { return vec2(0.0, l_ / q_); }
  double support(const Eigen::VectorXd& v) const override {
    if (v[0] < 0 || v[1] < 0) return kInf;
    return std::max(v[0] * l_ / p_, v[1] * l_ / q_);
  }
  FaceDescription face(const Eigen::VectorXd& v) const override {
    if (v[0] < 0 || v[1] < 0 || (v[0] == 0 && v[1] == 0)) return FaceDescription::empty();
    if (v[0] == 0) return FaceDescription::ray(vertex1(), vec2(-1, 0));
    if (v[1] == 0) return FaceDescription::ray(vertex2(), vec2(0, -1));
    const double s1 = v[0] * l_ / p_, s2 = v[1] * l_ / q_;
    if (std::abs(s1 - s2) <= 1e-12 * std::max(std::abs(s1), std::abs(s2)))
      return FaceDescription::segment(vertex1(), vertex2());
    return FaceDescription::point(s1 > s2 ? vertex1() : vertex2());
  }
  bool in_wd_closure(const Eigen::VectorXd& v) const override { return OrthantCone::closure(v); }
  std::optional<bool> in_wd_interior(const Eigen::VectorXd& v) const override { return OrthantCone::interior(v); }
  bool in_sd(const Eigen::VectorXd& y) const override { return OrthantCone::polar(y); }
  DomainFamily family() const override { return DomainFamily::Dn; }
  Eigen::VectorXd interior_point() const override { return vec2(l_ / p_, l_ / q_); }
  double scale() const override { return std::max(1.0, std::abs(l_) / std::min(p_, q_)); }

 private:
  double a_, p_, q_, l_;
};

// (-inf, 0)^n
class Orthant : public BaseShape {
 public:
  explicit Orthant(int n) : n_(n) {
    if (n < 1) throw InvalidArgument("orthant: n must be positive");
  }
  int dim() const override { return n_; }
  std::string name() const override { return "orthant"; }
  json params() const override { return json{{"n", n_}}; }
  bool contains(const Eigen::VectorXd& x) const override { return (x.array() < 0).all(); }
  double support(const Eigen::VectorXd& v) const override { return (v.array() >= 0).all() ? 0.0 : kInf; }
  FaceDescription face(const Eigen::VectorXd& v) const override {
    const double t = 0.0;
    if (v.norm() == 0.0 || (v.array() < -t).any()) return FaceDescription::empty();
    int zeros = 0, last = -1;
    for (int j = 0; j < n_; ++j)
      if (std::abs(v[j]) <= t) {
        ++zeros;
        last = j;
      }
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n_);
    if (zeros == 0) return FaceDescription::point(z);
    if (zeros == 1) {
      Eigen::VectorXd d = Eigen::VectorXd::Zero(n_);
      d[last] = -1;
      return FaceDescription::ray(z, d);
    }
    return FaceDescription::unsupported();
  }
  bool in_wd_closure(const Eigen::VectorXd& v) const override { return OrthantCone::closure(v); }
  std::optional<bool> in_wd_interior(const Eigen::VectorXd& v) const override { return OrthantCone::interior(v); }
  bool in_sd(const Eigen::VectorXd& y) const override { return OrthantCone::polar(y); }
  DomainFamily family() const override { return DomainFamily::Dn; }
  Eigen::VectorXd interior_point() const override { return -Eigen::VectorXd::Ones(n_); }

 private:
  int n_;
};

// {sum_j e^{2 x_j} < 1}, the logarithmic image of the unit ball.
class BallLog : public BaseShape {
 public:
  explicit BallLog(int n) : n_(n) {
    if (n < 1) throw InvalidArgument("ball-log: n must be positive");
  }
  int dim() const override { return n_; }
  std::string name() const override { return "ball-log"; }
  json params() const override { return json{{"n", n_}}; }
  bool contains(const Eigen::VectorXd& x) const override { return (2.0 * x.array()).exp().sum() < 1.0; }
  double support(const Eigen::VectorXd& v) const override {
    if ((v.array() < 0).any()) return kInf;
    const double s = v.sum();
    if (s == 0) return 0.0;
    double out = 0.0;
    for (int j = 0; j < n_; ++j)
      if (v[j] > 0) out += 0.5 * v[j] * std::log(v[j] / s);
    return out;
  }
  FaceDescription face(const Eigen::VectorXd& v) const override {
    if (!(v.array() > 0).all()) return FaceDescription::empty();
    return FaceDescription::point((0.5 * (v.array() / v.sum()).log()).matrix());
  }
  bool in_wd_closure(const Eigen::VectorXd& v) const override { return OrthantCone::closure(v); }
  std::optional<bool> in_wd_interior(const Eigen::VectorXd& v) const override { return OrthantCone::interior(v); }
  bool in_sd(const Eigen::VectorXd& y) const override { return OrthantCone::polar(y); }
  bool strictly_convex() const override { return true; }
  DomainFamily family() const override { return DomainFamily::Dn; }
  Eigen::VectorXd interior_point() const override {
    return Eigen::VectorXd::Constant(n_, -0.5 * std::log(static_cast<double>(n_)) - 0.5);
  }
 private:
  int n_;
};

// Euclidean ball, a bounded base.
class Ball : public BaseShape {
 public:
  Ball(Eigen::VectorXd center, double radius) : c_(std::move(center)), r_(radius) {
    if (!(r_ > 0) || c_.size() < 1) throw InvalidArgument("ball: need a center and a positive radius");
  }
  int dim() const override { return static_cast<int>(c_.size()); }
  std::string name() const override { return "ball"; }
  json params() const override { return json{{"center", jsonio::vector_to_json(c_)}, {"radius", r_}}; }
  bool contains(const Eigen::VectorXd& x) const override { return (x - c_).norm() < r_; }
  double support(const Eigen::VectorXd& v) const override { return c_.dot(v) + r_ * v.norm(); }
  FaceDescription face(const Eigen::VectorXd& v) const override {
    if (v.norm() == 0.0) return FaceDescription::empty();
    return FaceDescription::point(c_ + r_ * v / v.norm());
  }
  bool in_wd_closure(const Eigen::VectorXd&) const override { return true; }
  std::optional<bool> in_wd_interior(const Eigen::VectorXd&) const override { return true; }
  bool in_sd(const Eigen::VectorXd& y) const override { return y.norm() <= kConeTol; }
  bool strictly_convex() const override { return true; }
  DomainFamily family() const override { return DomainFamily::bounded; }
  Eigen::VectorXd interior_point() const override { return c_; }
  double scale() const override { return r_; }

 private:
  Eigen::VectorXd c_;
  double r_;
};

// An open interval (lo, hi), not the whole line.
class Interval : public BaseShape {
 public:
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo < hi)) throw InvalidArgument("interval: need lo < hi");
    if (std::isinf(lo) && std::isinf(hi)) throw InvalidArgument("interval: the whole line contains complex lines");
  }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  int dim() const override { return 1; }
  std::string name() const override { return "interval"; }
  json params() const override { return json{{"lo", jsonio::number_to_json(lo_)}, {"hi", jsonio::number_to_json(hi_)}}; }
  bool contains(const Eigen::VectorXd& x) const override { return x[0] > lo_ && x[0] < hi_; }
  double support(const Eigen::VectorXd& v) const override {
    if (v[0] > 0) return std::isinf(hi_) ? kInf : v[0] * hi_;
    if (v[0] < 0) return std::isinf(lo_) ? kInf : v[0] * lo_;
    return 0.0;
  }
  FaceDescription face(const Eigen::VectorXd& v) const override {
    Eigen::VectorXd p(1);
    if (v[0] > 0 && std::isfinite(hi_)) {
      p[0] = hi_;
      return FaceDescription::point(p);
    }
    if (v[0] < 0 && std::isfinite(lo_)) {
      p[0] = lo_;
      return FaceDescription::point(p);
    }
    return FaceDescription::empty();
  }
  // Face of closure when the direction vanishes in a product.
  FaceDescription closure_face() const {
    Eigen::VectorXd a(1), b(1);
    if (std::isfinite(lo_) && std::isfinite(hi_)) {
      a[0] = lo_;
      b[0] = hi_;
      return FaceDescription::segment(a, b);
    }
    Eigen::VectorXd d(1);
    if (std::isfinite(hi_)) {
      a[0] = hi_;
      d[0] = -1;
    } else {
      a[0] = lo_;
      d[0] = 1;
    }
    return FaceDescription::ray(a, d);
  }
  bool in_wd_closure(const Eigen::VectorXd& v) const override {
    if (std::isinf(hi_)) return v[0] <= 0;
    if (std::isinf(lo_)) return v[0] >= 0;
    return true;
  }
  std::optional<bool> in_wd_interior(const Eigen::VectorXd& v) const override {
    if (std::isinf(hi_)) return v[0] < 0;
    if (std::isinf(lo_)) return v[0] > 0;
    return true;
  }
  bool in_sd(const Eigen::VectorXd& y) const override {
    if (std::isinf(hi_)) return y[0] >= 0;
    if (std::isinf(lo_)) return y[0] <= 0;
    return y[0] == 0;
  }
  DomainFamily family() const override {
    if (std::isfinite(lo_) && std::isfinite(hi_)) return DomainFamily::bounded;
    return std::isinf(lo_) ? DomainFamily::Dn : DomainFamily::general;
  }
  Eigen::VectorXd interior_point() const override {
    Eigen::VectorXd p(1);
    if (std::isfinite(lo_) && std::isfinite(hi_)) p[0] = 0.5 * (lo_ + hi_);
    else if (std::isfinite(hi_)) p[0] = hi_ - 1;
    else p[0] = lo_ + 1;
    return p;
  }
  double scale() const override {
    return (std::isfinite(lo_) && std::isfinite(hi_)) ? 0.5 * (hi_ - lo_) : 1.0;
  }

 private:
  double lo_, hi_;
};

}  // namespace shapes

inline TubeDomain make_builtin_domain(const std::string& name, const json& params);
inline TubeDomain make_domain(const json& desc);

namespace shapes {

// Cartesian product of bases.
class Product : public BaseShape {
 public:
  explicit Product(std::vector<TubeDomain> factors) : f_(std::move(factors)) {
    if (f_.size() < 2) throw InvalidArgument("product: need at least two factors");
    for (const auto& f : f_) {
      off_.push_back(n_);
      n_ += f.dim();
    }
  }
  const std::vector<TubeDomain>& factors() const { return f_; }
  int offset(std::size_t i) const { return off_[i]; }
  int dim() const override { return n_; }
  std::string name() const override { return "product"; }
  json params() const override {
    json fs = json::array();
    for (const auto& f : f_) fs.push_back(f.descriptor());
    return json{{"factors", fs}};
  }
  Eigen::VectorXd part(const Eigen::VectorXd& x, std::size_t i) const {
    return x.segment(off_[i], f_[i].dim());
  }
  bool contains(const Eigen::VectorXd& x) const override {
    for (std::size_t i = 0; i < f_.size(); ++i)
      if (!f_[i].contains(part(x, i))) return false;
    return true;
  }
  double support(const Eigen::VectorXd& v) const override {
    double s = 0;
    for (std::size_t i = 0; i < f_.size(); ++i) s += f_[i].support(part(v, i));
    return s;
  }
  // P(v) is the product of the factor faces, with the whole closed factor in
  // place of a face wherever the direction vanishes on that factor.
  FaceDescription face(const Eigen::VectorXd& v) const override {
    if (v.norm() == 0.0) return FaceDescription::empty();
    const double t = rel(v);
    std::vector<FaceDescription> parts;
    for (std::size_t i = 0; i < f_.size(); ++i) {
      Eigen::VectorXd vi = part(v, i);
      if (vi.norm() <= t) {
        auto* iv = dynamic_cast<const Interval*>(&f_[i].shape());
        if (!iv) return FaceDescription::unsupported();
        parts.push_back(iv->closure_face());
      } else {
        FaceDescription fi = f_[i].face(vi);
        if (fi.kind == FaceKind::empty) return fi;
        if (fi.kind == FaceKind::unsupported) return fi;
        parts.push_back(fi);
      }
    }
    int extended = -1;
    for (std::size_t i = 0; i < parts.size(); ++i)
      if (parts[i].kind != FaceKind::point) {
        if (extended >= 0) return FaceDescription::unsupported();
        extended = static_cast<int>(i);
      }
    Eigen::VectorXd p0(n_);
    for (std::size_t i = 0; i < parts.size(); ++i) p0.segment(off_[i], f_[i].dim()) = parts[i].p0;
    if (extended < 0) return FaceDescription::point(p0);
    const auto e = static_cast<std::size_t>(extended);
    if (parts[e].kind == FaceKind::segment) {
      Eigen::VectorXd p1 = p0;
      p1.segment(off_[e], f_[e].dim()) = parts[e].p1;
      return FaceDescription::segment(p0, p1);
    }
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n_);
    d.segment(off_[e], f_[e].dim()) = parts[e].dir;
    return FaceDescription::ray(p0, d);
  }
  bool in_wd_closure(const Eigen::VectorXd& v) const override {
    for (std::size_t i = 0; i < f_.size(); ++i)
      if (!f_[i].in_wd_closure(part(v, i))) return false;
    return true;
  }
  std::optional<bool> in_wd_interior(const Eigen::VectorXd& v) const override {
    for (std::size_t i = 0; i < f_.size(); ++i) {
      auto r = f_[i].in_wd_interior(part(v, i));
      if (!r) return std::nullopt;
      if (!*r) return false;
    }
    return true;
  }
  bool in_sd(const Eigen::VectorXd& y) const override {
    for (std::size_t i = 0; i < f_.size(); ++i)
      if (!f_[i].in_sd(part(y, i))) return false;
    return true;
  }
  DomainFamily family() const override {
    bool all_bounded = true, all_dn = true;
    for (const auto& f : f_) {
      all_bounded = all_bounded && f.family() == DomainFamily::bounded;
      all_dn = all_dn && f.family() == DomainFamily::Dn;
    }
    if (all_bounded) return DomainFamily::bounded;
    if (all_dn) return DomainFamily::Dn;
    return DomainFamily::general;
  }
  Eigen::VectorXd interior_point() const override {
    Eigen::VectorXd x(n_);
    for (std::size_t i = 0; i < f_.size(); ++i) x.segment(off_[i], f_[i].dim()) = f_[i].interior_point();
    return x;
  }
  double scale() const override {
    double s = 0;
    for (const auto& f : f_) s = std::max(s, f.scale());
    return s;
  }

 private:
  std::vector<TubeDomain> f_;
  std::vector<int> off_;
  int n_ = 0;
};

// {Q x : x in base} for an orthogonal Q.
class LinearImage : public BaseShape {
 public:
  LinearImage(Eigen::MatrixXd Q, TubeDomain base) : Q_(std::move(Q)), base_(std::move(base)) {
    if (Q_.rows() != Q_.cols() || Q_.rows() != base_.dim())
      throw InvalidArgument("linear image: matrix must be square of the base dimension");
    if ((Q_.transpose() * Q_ - Eigen::MatrixXd::Identity(Q_.rows(), Q_.cols())).norm() > 1e-9)
      throw InvalidArgument("linear image: matrix must be orthogonal");
  }
  const Eigen::MatrixXd& matrix() const { return Q_; }
  const TubeDomain& base() const { return base_; }
  int dim() const override { return base_.dim(); }
  std::string name() const override { return "linear-image"; }
  json params() const override { return json{{"matrix", jsonio::matrix_to_json(Q_)}, {"base", base_.descriptor()}}; }
  Eigen::VectorXd pull(const Eigen::VectorXd& x) const { return Q_.transpose() * x; }
  bool contains(const Eigen::VectorXd& x) const override { return base_.contains(pull(x)); }
  double support(const Eigen::VectorXd& v) const override { return base_.support(pull(v)); }
  // Rounding in the pull-back is snapped to zero so that axis directions of
  // the base keep their faces.
  FaceDescription face(const Eigen::VectorXd& v) const override {
    Eigen::VectorXd w = pull(v);
    const double t = 1e-14 * w.cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < w.size(); ++j)
      if (std::abs(w[j]) <= t) w[j] = 0.0;
    return base_.face(w).mapped(Q_);
  }
  bool in_wd(const Eigen::VectorXd& v) const override { return base_.in_wd(pull(v)); }
  bool in_wd_closure(const Eigen::VectorXd& v) const override { return base_.in_wd_closure(pull(v)); }
  std::optional<bool> in_wd_interior(const Eigen::VectorXd& v) const override { return base_.in_wd_interior(pull(v)); }
  bool in_sd(const Eigen::VectorXd& y) const override { return base_.in_sd(pull(y)); }
  bool strictly_convex() const override { return base_.strictly_convex(); }
  DomainFamily family() const override {
    if (base_.family() == DomainFamily::bounded) return DomainFamily::bounded;
    if ((Q_ - Eigen::MatrixXd::Identity(Q_.rows(), Q_.cols())).norm() <= 1e-12) return base_.family();
    return DomainFamily::general;
  }
  Eigen::VectorXd interior_point() const override { return Q_ * base_.interior_point(); }
  double scale() const override { return base_.scale(); }

 private:
  Eigen::MatrixXd Q_;
  TubeDomain base_;
};

// {x : a_i . x < b_i for all i}, a pointed polyhedron given by inequalities.
// Faces and support come from vertex and extreme-ray enumeration, which is
// fine for the low dimensions this library targets.
class Polyhedron : public BaseShape {
 public:
  Polyhedron(Eigen::MatrixXd A, Eigen::VectorXd b) : A_(std::move(A)), b_(std::move(b)) {
    if (A_.rows() != b_.size() || A_.rows() == 0) throw InvalidArgument("polyhedron: bad inequalities");
    n_ = static_cast<int>(A_.cols());
    enumerate();
    if (vertices_.empty())
      throw InvalidArgument("polyhedron: no vertices (empty, or the base contains a line)");
    if (!contains(interior_point())) throw InvalidArgument("polyhedron: empty interior");
  }
  int dim() const override { return n_; }
  std::string name() const override { return "polyhedron"; }
  json descriptor() const override {
    json ineq = json::array();
    for (Eigen::Index i = 0; i < A_.rows(); ++i)
      ineq.push_back(json{{"a", jsonio::vector_to_json(A_.row(i).transpose())}, {"b", b_[i]}});
    return json{{"custom", {{"inequalities", ineq}}}};
  }
  bool contains(const Eigen::VectorXd& x) const override { return ((A_ * x - b_).array() < 0).all(); }
  double support(const Eigen::VectorXd& v) const override {
    for (const auto& r : rays_)
      if (r.dot(v) > tol(v)) return kInf;
    double s = -kInf;
    for (const auto& p : vertices_) s = std::max(s, p.dot(v));
    return s;
  }
  FaceDescription face(const Eigen::VectorXd& v) const override {
    if (v.norm() == 0.0) return FaceDescription::empty();
    const double s = support(v);
    if (!std::isfinite(s)) return FaceDescription::empty();
    std::vector<Eigen::VectorXd> vs, rs;
    const double vt = 1e-10 * std::max(1.0, std::abs(s));
    for (const auto& p : vertices_)
      if (p.dot(v) >= s - vt) vs.push_back(p);
    for (const auto& r : rays_)
      if (std::abs(r.dot(v)) <= tol(v)) rs.push_back(r);
    if (vs.size() == 1 && rs.empty()) return FaceDescription::point(vs[0]);
    if (vs.size() == 2 && rs.empty()) return FaceDescription::segment(vs[0], vs[1]);
    if (vs.size() == 1 && rs.size() == 1) return FaceDescription::ray(vs[0], rs[0]);
    return FaceDescription::unsupported();
  }
  bool in_wd_closure(const Eigen::VectorXd& v) const override { return std::isfinite(support(v)); }
  std::optional<bool> in_wd_interior(const Eigen::VectorXd&) const override { return std::nullopt; }
  // Whether y is a recession direction, tested along rays from sample points.
  bool in_sd(const Eigen::VectorXd& y) const override {
    if (y.norm() <= kConeTol) return true;
    const Eigen::VectorXd d = y.normalized();
    const Eigen::VectorXd x0 = interior_point();
    for (int k = 0; k < 32; ++k) {
      Eigen::VectorXd base = x0;
      if (k > 0 && !vertices_.empty()) {
        const auto& p = vertices_[static_cast<std::size_t>(k) % vertices_.size()];
        base = x0 + (0.5 + 0.01 * k) * (p - x0) * 0.9;
        if (!contains(base)) base = x0;
      }
      for (double t : {1.0, 10.0, 100.0, 1000.0})
        if (!contains(base + t * scale_ * d)) return false;
    }
    return true;
  }
  DomainFamily family() const override { return rays_.empty() ? DomainFamily::bounded : DomainFamily::general; }
  Eigen::VectorXd interior_point() const override { return center_; }
  double scale() const override { return scale_; }

 private:
  double tol(const Eigen::VectorXd& v) const { return 1e-12 * std::max(1e-300, v.norm()); }

  void enumerate() {
    const int m = static_cast<int>(A_.rows());
    std::vector<int> idx(static_cast<std::size_t>(n_));
    auto combos = [&](int k, auto&& visit) {
      std::vector<int> c(static_cast<std::size_t>(k));
      std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == k) {
          visit(c);
          return;
        }
        for (int i = start; i < m; ++i) {
          c[static_cast<std::size_t>(depth)] = i;
          rec(i + 1, depth + 1);
        }
      };
      rec(0, 0);
    };
    const double scaleA = A_.cwiseAbs().maxCoeff();
    combos(n_, [&](const std::vector<int>& c) {
      Eigen::MatrixXd M(n_, n_);
      Eigen::VectorXd r(n_);
      for (int i = 0; i < n_; ++i) {
        M.row(i) = A_.row(c[static_cast<std::size_t>(i)]);
        r[i] = b_[c[static_cast<std::size_t>(i)]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
      if (lu.rank() < n_) return;
      Eigen::VectorXd x = lu.solve(r);
      if (((A_ * x - b_).array() <= 1e-9 * std::max(1.0, scaleA * x.norm())).all()) {
        for (const auto& p : vertices_)
          if ((p - x).norm() <= 1e-9 * std::max(1.0, x.norm())) return;
        vertices_.push_back(x);
      }
    });
    if (n_ >= 2) {
      combos(n_ - 1, [&](const std::vector<int>& c) {
        Eigen::MatrixXd M(n_ - 1, n_);
        for (int i = 0; i < n_ - 1; ++i) M.row(i) = A_.row(c[static_cast<std::size_t>(i)]);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
        if (lu.rank() < n_ - 1) return;
        Eigen::MatrixXd K = lu.kernel();
        if (K.cols() != 1) return;
        for (double sgn : {1.0, -1.0}) {
          Eigen::VectorXd d = sgn * K.col(0).normalized();
          if (((A_ * d).array() <= 1e-12 * scaleA).all()) {
            bool dup = false;
            for (const auto& r : rays_) dup = dup || (r - d).norm() <= 1e-9;
            if (!dup) rays_.push_back(d);
          }
        }
      });
    } else {
      for (double sgn : {1.0, -1.0}) {
        Eigen::VectorXd d = Eigen::VectorXd::Constant(1, sgn);
        if (((A_ * d).array() <= 0).all()) rays_.push_back(d);
      }
    }
    center_ = Eigen::VectorXd::Zero(n_);
    for (const auto& p : vertices_) center_ += p;
    center_ /= static_cast<double>(std::max<std::size_t>(1, vertices_.size()));
    for (const auto& r : rays_) center_ += r;
    double spread = 0;
    for (const auto& p : vertices_) spread = std::max(spread, (p - center_).norm());
    scale_ = std::max(1.0, spread);
    // Nudge toward the interior if the average sits on the boundary.
    for (int it = 0; it < 60 && !contains(center_); ++it) {
      Eigen::VectorXd step = Eigen::VectorXd::Zero(n_);
      for (Eigen::Index i = 0; i < A_.rows(); ++i)
        if (A_.row(i).dot(center_) >= b_[i]) step -= A_.row(i).transpose().normalized();
      center_ += 0.1 * scale_ * std::pow(0.7, it) * step;
    }
  }

  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  int n_ = 0;
  std::vector<Eigen::VectorXd> vertices_, rays_;
  Eigen::VectorXd center_;
  double scale_ = 1.0;
};

}  // namespace shapes

inline TubeDomain make_builtin_domain(const std::string& name, const json& params) {
  auto num = [&](const char* k) { return jsonio::number(jsonio::field(params, k, name), name + "." + k); };
  auto count = [&](const char* k, int dflt) {
    return params.is_object() && params.contains(k) ? static_cast<int>(num(k)) : dflt;
  };
  if (name == "quarter-circle") return TubeDomain(std::make_shared<shapes::QuarterCircle>());
  if (name == "hyperbola") return TubeDomain(std::make_shared<shapes::Hyperbola>());
  if (name == "dprime") return TubeDomain(std::make_shared<shapes::DPrime>());
  if (name == "half-parabola") return TubeDomain(std::make_shared<shapes::HalfParabola>());
  if (name == "half-cone") return TubeDomain(std::make_shared<shapes::HalfCone>());
  if (name == "gapq-log") return TubeDomain(std::make_shared<shapes::GapqLog>(num("a"), num("p"), num("q")));
  if (name == "orthant") return TubeDomain(std::make_shared<shapes::Orthant>(count("n", 2)));
  if (name == "ball-log") return TubeDomain(std::make_shared<shapes::BallLog>(count("n", 2)));
  if (name == "ball") {
    Eigen::VectorXd c = params.contains("center")
                            ? jsonio::vector(params.at("center"), "ball.center")
                            : Eigen::VectorXd::Zero(count("n", 2)).eval();
    const double r = params.contains("radius") ? num("radius") : 1.0;
    return TubeDomain(std::make_shared<shapes::Ball>(c, r));
  }
  if (name == "interval") return TubeDomain(std::make_shared<shapes::Interval>(num("lo"), num("hi")));
  if (name == "product") {
    std::vector<TubeDomain> fs;
    for (const auto& f : jsonio::field(params, "factors", name)) fs.push_back(make_domain(f));
    return TubeDomain(std::make_shared<shapes::Product>(std::move(fs)));
  }
  if (name == "linear-image")
    return TubeDomain(std::make_shared<shapes::LinearImage>(
        jsonio::matrix(jsonio::field(params, "matrix", name), name + ".matrix"),
        make_domain(jsonio::field(params, "base", name))));
  throw InvalidArgument("unknown builtin domain '" + name + "'");
}

inline TubeDomain make_domain(const json& desc) {
  if (desc.is_object() && desc.contains("builtin")) {
    if (!desc.at("builtin").is_string()) throw InvalidArgument("domain.builtin: expected a string");
    return make_builtin_domain(desc.at("builtin").get<std::string>(),
                               desc.contains("params") ? desc.at("params") : json::object());
  }
  if (desc.is_object() && desc.contains("custom")) {
    const json& ineq = jsonio::field(desc.at("custom"), "inequalities", "domain.custom");
    if (!ineq.is_array() || ineq.empty()) throw InvalidArgument("domain.custom.inequalities: expected a non-empty array");
    Eigen::VectorXd a0 = jsonio::vector(jsonio::field(ineq[0], "a", "inequality"), "inequality.a");
    Eigen::MatrixXd A(static_cast<Eigen::Index>(ineq.size()), a0.size());
    Eigen::VectorXd b(static_cast<Eigen::Index>(ineq.size()));
    for (std::size_t i = 0; i < ineq.size(); ++i) {
      const std::string w = "domain.custom.inequalities[" + std::to_string(i) + "]";
      Eigen::VectorXd ai = jsonio::vector(jsonio::field(ineq[i], "a", w), w + ".a");
      if (ai.size() != a0.size()) throw InvalidArgument(w + ": dimension mismatch");
      A.row(static_cast<Eigen::Index>(i)) = ai.transpose();
      b[static_cast<Eigen::Index>(i)] = jsonio::number(jsonio::field(ineq[i], "b", w), w + ".b");
    }
    return TubeDomain(std::make_shared<shapes::Polyhedron>(A, b));
  }
  throw InvalidArgument("domain: expected {\"builtin\": ...} or {\"custom\": ...}");
}

// Image domain {V x : x in D} for a real m x n matrix V with orthonormal rows.
// Square V gives a rotated copy.  Rows spanning a block of coordinates of a
// product give the rotated sub-product.  Other cases need the projection of
// a general convex set and are refused.
inline TubeDomain pushforward(const TubeDomain& D, const Eigen::MatrixXd& V) {
  const int n = D.dim();
  const auto m = static_cast<int>(V.rows());
  if (V.cols() != n) throw InvalidArgument("pushforward: matrix has the wrong number of columns");
  if (m == n) return TubeDomain(std::make_shared<shapes::LinearImage>(V, D));
  if (m == 1) {
    Eigen::VectorXd v = V.row(0).transpose();
    const double hi = D.support(v);
    const double lo = -D.support(-v);
    if (std::isinf(hi) && std::isinf(lo))
      throw Unsupported("pushforward: the image is the whole line, which contains complex lines");
    return TubeDomain(std::make_shared<shapes::Interval>(lo, hi));
  }
  if (auto* prod = dynamic_cast<const shapes::Product*>(&D.shape())) {
    // Find the factors whose coordinates carry the row space.
    std::vector<TubeDomain> used;
    std::vector<int> cols;
    for (std::size_t i = 0; i < prod->factors().size(); ++i) {
      const int o = prod->offset(i), d = prod->factors()[i].dim();
      if (V.middleCols(o, d).norm() > 1e-12) {
        used.push_back(prod->factors()[i]);
        for (int c = 0; c < d; ++c) cols.push_back(o + c);
      }
    }
    if (static_cast<int>(cols.size()) == m) {
      Eigen::MatrixXd Q(m, m);
      for (int c = 0; c < m; ++c) Q.col(c) = V.col(cols[static_cast<std::size_t>(c)]);
      TubeDomain sub = used.size() == 1 ? used.front()
                                        : TubeDomain(std::make_shared<shapes::Product>(used));
      if ((Q.transpose() * Q - Eigen::MatrixXd::Identity(m, m)).norm() <= 1e-9)
        return TubeDomain(std::make_shared<shapes::LinearImage>(Q, sub));
    }
  }
  throw Unsupported("pushforward: projection of a general convex base onto a " + std::to_string(m) +
                    "-dimensional subspace is not supported");
}

struct SupportEstimate {
  double value;
  Eigen::VectorXd point;
};

// Estimates sup <x, v> over the base using only membership queries.  Points
// b(w) = c + r(w) w are boundary points shot from the interior point c along
// unit directions w, with r(w) found by bisection and capped far away.  A
// coarse scan of directions picks a start, then a pattern search in the
// tangent plane of the sphere refines it.  On a convex base <b(w), v> has no
// spurious local maxima, so the search converges to the support value.
inline SupportEstimate numeric_support(const TubeDomain& D, const Eigen::VectorXd& v, int max_iter = 2000) {
  const int n = D.dim();
  const Eigen::VectorXd c = D.interior_point();
  if (v.norm() == 0.0) return {0.0, c};
  const double cap = 1e4 * D.scale();
  auto shoot = [&](const Eigen::VectorXd& w) {
    double lo = 0.0, hi = 1e-3 * D.scale();
    while (D.contains(c + hi * w)) {
      lo = hi;
      hi *= 2;
      if (hi > cap) return (c + lo * w).eval();
    }
    for (int k = 0; k < 200 && hi - lo > 1e-16 * hi; ++k) {
      const double mid = 0.5 * (lo + hi);
      if (D.contains(c + mid * w)) lo = mid;
      else hi = mid;
    }
    return (c + lo * w).eval();
  };
  auto tangent_basis = [&](const Eigen::VectorXd& w) {
    std::vector<Eigen::VectorXd> tang;
    for (int j = 0; j < n && static_cast<int>(tang.size()) < n - 1; ++j) {
      Eigen::VectorXd e = Eigen::VectorXd::Unit(n, j);
      e -= e.dot(w) * w;
      for (const auto& t : tang) e -= e.dot(t) * t;
      if (e.norm() > 1e-6) tang.push_back(e.normalized());
    }
    return tang;
  };

  // Coarse scan: a circle in 2-d, a Fibonacci sphere otherwise.
  std::vector<Eigen::VectorXd> starts;
  const int coarse = n == 2 ? 720 : 4000;
  for (int k = 0; k < coarse; ++k) {
    Eigen::VectorXd w(n);
    if (n == 1) {
      w[0] = k % 2 ? 1.0 : -1.0;
    } else if (n == 2) {
      w << std::cos(kTwoPi * k / coarse), std::sin(kTwoPi * k / coarse);
    } else {
      w.setZero();
      const double z = 1.0 - 2.0 * (k + 0.5) / coarse;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double ph = k * kPi * (3.0 - std::sqrt(5.0));
      w[0] = r * std::cos(ph);
      w[1] = r * std::sin(ph);
      w[2] = z;
    }
    starts.push_back(w);
  }
  Eigen::VectorXd w = v.normalized();
  Eigen::VectorXd x = shoot(w);
  double best = x.dot(v);
  for (const auto& s : starts) {
    Eigen::VectorXd y = shoot(s);
    if (y.dot(v) > best) {
      best = y.dot(v);
      x = y;
      w = s;
    }
  }
  // Random tangent moves besides the coordinate ones get past ridges, such
  // as the one at a cone apex.
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss;
  double step = n == 2 ? kTwoPi / coarse : 0.1;
  for (int it = 0; it < max_iter && step > 1e-15; ++it) {
    bool improved = false;
    std::vector<Eigen::VectorXd> moves = tangent_basis(w);
    for (int k = 0; n > 2 && k < 32; ++k) {
      Eigen::VectorXd t = Eigen::VectorXd::Zero(n);
      for (const auto& e : tangent_basis(w)) t += gauss(rng) * e;
      moves.push_back(t.normalized());
    }
    for (const auto& t : moves)
      for (double sgn : {1.0, -1.0}) {
        const Eigen::VectorXd cand = (w + sgn * step * t).normalized();
        Eigen::VectorXd y = shoot(cand);
        if (y.dot(v) > best) {
          best = y.dot(v);
          x = y;
          w = cand;
          improved = true;
        }
      }
    if (!improved) step *= 0.5;
  }
  return {best, x};
}

}  // namespace tubegeo
