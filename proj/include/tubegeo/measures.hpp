#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "circle.hpp"
#include "errors.hpp"
#include "json_util.hpp"
#include "quadrature.hpp"

namespace tubegeo {

// An L^1 density on the circle with values in R^n.  `kind` and `params`
// describe it so it can be written back to JSON; the callable does the work.
class DensityFn {
 public:
  using Fn = std::function<Eigen::VectorXd(const CirclePoint&)>;

  DensityFn() = default;
  DensityFn(int n, std::string kind, json params, Fn fn, std::vector<double> singular = {})
      : n_(n), kind_(std::move(kind)), params_(std::move(params)), fn_(std::move(fn)) {
    for (double s : singular) add_singular_point(s);
  }

  static DensityFn zero(int n) {
    return DensityFn(n, "zero", json::object({{"n", n}}),
                     [n](const CirclePoint&) { return Eigen::VectorXd::Zero(n).eval(); });
  }
  static DensityFn constant(const Eigen::VectorXd& c) {
    return DensityFn(static_cast<int>(c.size()), "constant",
                     json::object({{"value", jsonio::vector_to_json(c)}}),
                     [c](const CirclePoint&) { return c; });
  }

  int dim() const { return n_; }
  const std::string& kind() const { return kind_; }
  const json& params() const { return params_; }
  const std::vector<double>& singular_points() const { return singular_; }

  void add_singular_point(double theta) {
    theta = normalize_angle(theta);
    for (double s : singular_)
      if (std::abs(wrap_difference(s - theta)) <= 1e-14) return;
    singular_.push_back(theta);
    std::sort(singular_.begin(), singular_.end());
  }

  bool near_singular(double theta, double tol) const {
    for (double s : singular_)
      if (std::abs(wrap_difference(theta - s)) <= tol) return true;
    return false;
  }

  Eigen::VectorXd operator()(const CirclePoint& p) const { return fn_(p); }
  Eigen::VectorXd operator()(double theta) const { return fn_(CirclePoint(theta)); }

  json descriptor() const {
    json out{{"kind", kind_}, {"params", params_}};
    out["singular_points"] = singular_;
    return out;
  }

 private:
  int n_ = 0;
  std::string kind_ = "zero";
  json params_ = json::object();
  Fn fn_;
  std::vector<double> singular_;
};

inline DensityFn density_sum(const DensityFn& x, const DensityFn& y) {
  if (x.dim() != y.dim()) throw InvalidArgument("density sum: dimension mismatch");
  std::vector<double> sing = x.singular_points();
  sing.insert(sing.end(), y.singular_points().begin(), y.singular_points().end());
  json params{{"terms", json::array({x.descriptor(), y.descriptor()})}};
  return DensityFn(x.dim(), "sum", params,
                   [x, y](const CirclePoint& p) { return (x(p) + y(p)).eval(); }, sing);
}

inline DensityFn density_scaled(const DensityFn& x, double s) {
  json params{{"matrix", jsonio::matrix_to_json(s * Eigen::MatrixXd::Identity(x.dim(), x.dim()))},
              {"base", x.descriptor()}};
  return DensityFn(x.dim(), "linear-map", params,
                   [x, s](const CirclePoint& p) { return (s * x(p)).eval(); }, x.singular_points());
}

inline DensityFn density_mapped(const DensityFn& x, const Eigen::MatrixXd& V) {
  if (V.cols() != x.dim()) throw InvalidArgument("density map: dimension mismatch");
  json params{{"matrix", jsonio::matrix_to_json(V)}, {"base", x.descriptor()}};
  return DensityFn(static_cast<int>(V.rows()), "linear-map", params,
                   [x, V](const CirclePoint& p) { return (V * x(p)).eval(); }, x.singular_points());
}

struct Atom {
  CirclePoint location;
  Eigen::VectorXd weight;
};

// Finitely many point masses at distinct locations, sorted by angle.
class AtomList {
 public:
  AtomList() = default;

  // Coincident locations (within tol) are merged by summing weights; entries
  // are summed in a canonical order so the result does not depend on input order.
  static AtomList merged(std::vector<Atom> in, double tol = 1e-12) {
    std::sort(in.begin(), in.end(), [](const Atom& x, const Atom& y) {
      const double ax = x.location.angle(), ay = y.location.angle();
      if (ax != ay) return ax < ay;
      return std::lexicographical_compare(x.weight.data(), x.weight.data() + x.weight.size(),
                                          y.weight.data(), y.weight.data() + y.weight.size());
    });
    std::vector<std::vector<Atom>> groups;
    for (auto& a : in) {
      if (!groups.empty() && groups.back().back().location.coincides(a.location, tol))
        groups.back().push_back(std::move(a));
      else
        groups.push_back({std::move(a)});
    }
    if (groups.size() > 1 && groups.back().back().location.coincides(groups.front().front().location, tol)) {
      auto tail = std::move(groups.back());
      groups.pop_back();
      tail.insert(tail.end(), groups.front().begin(), groups.front().end());
      groups.front() = std::move(tail);
    }
    AtomList out;
    for (auto& g : groups) {
      Atom acc{g.front().location, Eigen::VectorXd::Zero(g.front().weight.size())};
      for (const auto& a : g) {
        if (a.weight.size() != acc.weight.size()) throw InvalidArgument("atoms: dimension mismatch");
        acc.weight += a.weight;
      }
      if ((acc.weight.array() != 0.0).any()) out.atoms_.push_back(std::move(acc));
    }
    std::sort(out.atoms_.begin(), out.atoms_.end(),
              [](const Atom& x, const Atom& y) { return x.location.angle() < y.location.angle(); });
    return out;
  }

  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }
  auto begin() const { return atoms_.begin(); }
  auto end() const { return atoms_.end(); }
  const std::vector<Atom>& items() const { return atoms_; }

  std::optional<Eigen::VectorXd> weight_at(double theta, double tol = 1e-12) const {
    for (const auto& a : atoms_)
      if (a.location.coincides(theta, tol)) return a.weight;
    return std::nullopt;
  }

 private:
  std::vector<Atom> atoms_;
};

// mu_j = g_j dtheta + sum of point masses.
struct BoundaryMeasureTuple {
  DensityFn ac;
  AtomList atoms;

  BoundaryMeasureTuple() = default;
  BoundaryMeasureTuple(DensityFn g, AtomList at) : ac(std::move(g)), atoms(std::move(at)) {
    for (const auto& a : atoms)
      if (a.weight.size() != ac.dim()) throw InvalidArgument("measure: atom dimension differs from density");
  }
  int dim() const { return ac.dim(); }
};

inline BoundaryMeasureTuple operator+(const BoundaryMeasureTuple& x, const BoundaryMeasureTuple& y) {
  std::vector<Atom> all(x.atoms.begin(), x.atoms.end());
  all.insert(all.end(), y.atoms.begin(), y.atoms.end());
  return BoundaryMeasureTuple(density_sum(x.ac, y.ac), AtomList::merged(std::move(all)));
}

inline BoundaryMeasureTuple operator*(double s, const BoundaryMeasureTuple& x) {
  std::vector<Atom> all;
  for (const auto& a : x.atoms) all.push_back({a.location, s * a.weight});
  return BoundaryMeasureTuple(density_scaled(x.ac, s), AtomList::merged(std::move(all)));
}

inline BoundaryMeasureTuple pushforward(const BoundaryMeasureTuple& x, const Eigen::MatrixXd& V) {
  std::vector<Atom> all;
  for (const auto& a : x.atoms) all.push_back({a.location, V * a.weight});
  return BoundaryMeasureTuple(density_mapped(x.ac, V), AtomList::merged(std::move(all)));
}

// g dtheta + rho dnu with nu >= 0 and |rho| = 1 nu-a.e.
struct SphericalDecomposition {
  struct NuAtom {
    CirclePoint location;
    double weight;
    Eigen::VectorXd rho;
  };
  DensityFn g;
  std::vector<NuAtom> nu;

  std::optional<Eigen::VectorXd> rho_at(double theta, double tol = 1e-12) const {
    for (const auto& a : nu)
      if (a.location.coincides(theta, tol)) return a.rho;
    return std::nullopt;
  }
};

// Groups the scalar atoms alpha_j delta_{lambda_j} by location: for each
// entry, A is the set of entries sharing its location, and the entry adds
// sqrt(sum_A alpha^2) / #A to nu there.  rho_j = alpha_j / sqrt(sum_A alpha^2).
inline SphericalDecomposition spherical_decompose(const BoundaryMeasureTuple& mu) {
  SphericalDecomposition out;
  out.g = mu.ac;
  const int n = mu.dim();
  for (const auto& atom : mu.atoms) {
    std::vector<int> entries;
    for (int j = 0; j < n; ++j)
      if (atom.weight[j] != 0.0) entries.push_back(j);
    if (entries.empty()) continue;
    double sq = 0.0;
    for (int j : entries) sq += atom.weight[j] * atom.weight[j];
    const double norm = std::sqrt(sq);
    double nu = 0.0;
    for (std::size_t e = 0; e < entries.size(); ++e) nu += norm / static_cast<double>(entries.size());
    Eigen::VectorXd rho = Eigen::VectorXd::Zero(n);
    for (int j : entries) rho[j] = atom.weight[j] / norm;
    out.nu.push_back({atom.location, nu, rho});
  }
  return out;
}

inline BoundaryMeasureTuple recombine(const SphericalDecomposition& d) {
  std::vector<Atom> atoms;
  for (const auto& a : d.nu) atoms.push_back({a.location, a.weight * a.rho});
  return BoundaryMeasureTuple(d.g, AtomList::merged(std::move(atoms)));
}

// (1/2pi) mu(circle)
inline Eigen::VectorXd total_mass(const BoundaryMeasureTuple& mu, const QuadratureOptions& opt = {}) {
  const int n = mu.dim();
  auto r = integrate_circle([&](const CirclePoint& p) { return mu.ac(p); }, mu.ac.singular_points(), {},
                            Eigen::VectorXd::Zero(n).eval(), opt);
  Eigen::VectorXd m = r.value;
  for (const auto& a : mu.atoms) m += a.weight;
  return m / kTwoPi;
}

struct MeasureCompareOptions {
  int grid = 4096;
  double density_tol = 1e-10;
  double atom_tol = 1e-12;
  // Grid points this close to a singular point are skipped.
  double singular_gap = 1e-9;
};

inline bool measures_equal(const BoundaryMeasureTuple& x, const BoundaryMeasureTuple& y,
                           const MeasureCompareOptions& opt = {}) {
  if (x.dim() != y.dim()) return false;
  if (x.atoms.size() != y.atoms.size()) return false;
  for (std::size_t i = 0; i < x.atoms.size(); ++i) {
    if (!x.atoms[i].location.coincides(y.atoms[i].location, opt.atom_tol)) return false;
    const double scale = std::max(1.0, x.atoms[i].weight.cwiseAbs().maxCoeff());
    if ((x.atoms[i].weight - y.atoms[i].weight).cwiseAbs().maxCoeff() > opt.atom_tol * scale) return false;
  }
  for (int k = 0; k < opt.grid; ++k) {
    const double t = kTwoPi * (k + 0.5) / opt.grid;
    if (x.ac.near_singular(t, opt.singular_gap) || y.ac.near_singular(t, opt.singular_gap)) continue;
    const Eigen::VectorXd gx = x.ac(t), gy = y.ac(t);
    const double scale = std::max(1.0, gx.cwiseAbs().maxCoeff());
    if ((gx - gy).cwiseAbs().maxCoeff() > opt.density_tol * scale) return false;
  }
  return true;
}

}  // namespace tubegeo
