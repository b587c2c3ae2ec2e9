#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "densities.hpp"
#include "errors.hpp"
#include "hclass.hpp"
#include "herglotz.hpp"
#include "measures.hpp"
#include "parallel.hpp"
#include "tube_geometry.hpp"

namespace tubegeo {

struct GeodesicCandidate {
  BoundaryMeasureTuple mu;
  HMap h;
  TubeDomain domain;
  Eigen::VectorXd im0;

  GeodesicCandidate() = default;
  GeodesicCandidate(BoundaryMeasureTuple m, HMap hh, TubeDomain d, Eigen::VectorXd i0 = {})
      : mu(std::move(m)), h(std::move(hh)), domain(std::move(d)), im0(std::move(i0)) {
    if (!domain) throw InvalidArgument("candidate: missing domain");
    if (im0.size() == 0) im0 = Eigen::VectorXd::Zero(mu.dim());
    if (mu.dim() != h.dim() || mu.dim() != domain.dim() || im0.size() != mu.dim())
      throw InvalidArgument("candidate: dimensions of mu, h, domain and im0 disagree");
    if (h.is_zero()) throw InvalidArgument("candidate: h is identically zero");
  }
  int dim() const { return mu.dim(); }
};

struct VerifyOptions {
  int grid = 1024;
  int z_samples = 100;
  double tol_face = 1e-7;
  double tol_sign = 1e-9;
  std::uint64_t seed = 12345;
  int threads = 1;
  // Grid points closer than this to a singular point or a root of h are skipped.
  double singular_gap = 1e-9;
  // Re phi(0) must stay in the base under shifts of this relative size.
  double mass_margin = 1e-10;
  QuadratureOptions quad{};
};

enum class Status { pass, fail, inapplicable, indeterminate };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inapplicable: return "inapplicable";
    case Status::indeterminate: return "indeterminate";
  }
  return "?";
}

struct ConditionRecord {
  std::string id;
  Status status = Status::pass;
  double residual = 0.0;
  json witness;  // null when there is nothing to point at
  std::string note;
};

struct VerificationReport {
  std::vector<ConditionRecord> conditions;
  Status overall = Status::pass;
  Eigen::VectorXd mass;

  const ConditionRecord& at(const std::string& id) const {
    for (const auto& c : conditions)
      if (c.id == id) return c;
    throw InvalidArgument("report: no condition '" + id + "'");
  }
  bool passed() const { return overall == Status::pass; }
  // Ids among (i)-(iv) that failed.
  std::vector<std::string> failed_primary() const {
    std::vector<std::string> out;
    for (const auto& c : conditions)
      if ((c.id == "i" || c.id == "ii" || c.id == "iii" || c.id == "iv") && c.status == Status::fail)
        out.push_back(c.id);
    return out;
  }
};

namespace detail {

inline Eigen::VectorXd random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (;;) {
    for (int j = 0; j < n; ++j) v[j] = N(rng);
    if (v.norm() > 1e-8) return v.normalized();
  }
}

inline double grid_angle(int k, int grid) { return kTwoPi * (k + 0.5) / grid; }

// Points of the base: spread around the interior point, and points just
// inside the faces hit by the trace of h so that the direct inequality is
// tested where it is tight.
inline std::vector<Eigen::VectorXd> sample_base_points(const TubeDomain& D, const HMap& h, int count,
                                                       std::mt19937_64& rng) {
  std::vector<Eigen::VectorXd> out;
  const int n = D.dim();
  const Eigen::VectorXd x0 = D.interior_point();
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto pull_inside = [&](Eigen::VectorXd p) -> std::optional<Eigen::VectorXd> {
    for (double eta = 1e-7; eta <= 0.5; eta *= 4) {
      Eigen::VectorXd z = p + eta * (x0 - p);
      if (D.contains(z)) return z;
    }
    return std::nullopt;
  };
  int tries = 0;
  while (static_cast<int>(out.size()) < count && tries < 50 * count) {
    ++tries;
    if (out.size() % 2 == 0) {
      const double r = 3.0 * U(rng);
      Eigen::VectorXd z = x0 + r * D.scale() * random_unit(rng, n);
      for (int k = 0; k < 60 && !D.contains(z); ++k) z = 0.5 * (z + x0);
      if (D.contains(z)) out.push_back(z);
    } else {
      const CirclePoint p(kTwoPi * U(rng));
      const Eigen::VectorXd v = h.trace(p);
      if (v.norm() == 0.0) continue;
      FaceSelection sel{FaceSelection::Mode::ray_offset, 3.0 * U(rng) * D.scale(), U(rng)};
      FaceDescription f = D.face(v);
      if (f.kind == FaceKind::segment) sel.mode = FaceSelection::Mode::segment_param;
      auto q = f.select(sel);
      if (!q) continue;
      if (auto z = pull_inside(*q)) out.push_back(*z);
    }
  }
  if (out.empty()) out.push_back(x0);
  return out;
}

// Directions of closure(W_D): coordinate and random directions that pass the
// membership test, plus the trace values of h on the grid.
inline std::vector<Eigen::VectorXd> sample_wd_closure(const TubeDomain& D, const HMap& h, int grid,
                                                      std::mt19937_64& rng) {
  std::vector<Eigen::VectorXd> out;
  const int n = D.dim();
  for (int j = 0; j < n; ++j)
    for (double s : {1.0, -1.0}) {
      Eigen::VectorXd e = s * Eigen::VectorXd::Unit(n, j);
      if (D.in_wd_closure(e)) out.push_back(e);
    }
  for (int k = 0; k < 2000; ++k) {
    Eigen::VectorXd w = random_unit(rng, n);
    if (D.in_wd_closure(w)) out.push_back(w);
  }
  for (int k = 0; k < grid; k += std::max(1, grid / 64)) {
    Eigen::VectorXd v = h.trace(CirclePoint(grid_angle(k, grid)));
    if (v.norm() > 0 && D.in_wd_closure(v)) out.push_back(v.normalized());
  }
  return out;
}

inline json angle_witness(double theta) { return json{{"angle", theta}}; }

// x and x +- eps e_j all in the base, eps relative to |x|.  The mass is a
// quadrature result, so a point on the boundary must not pass by rounding.
inline bool inside_with_margin(const TubeDomain& D, const Eigen::VectorXd& x, double margin) {
  if (!x.allFinite() || !D.contains(x)) return false;
  const double eps = margin * std::max(1.0, x.norm());
  for (int j = 0; j < x.size(); ++j)
    for (double s : {eps, -eps})
      if (!D.contains(x + s * Eigen::VectorXd::Unit(x.size(), j))) return false;
  return true;
}

}  // namespace detail

// Checks the geodesy conditions (i)-(iv) and the necessary conditions
// (v)-(vii) for the pair (mu, h), and re-checks the defining inequality
// <conj(l) h(l), Re z dtheta - dmu> <= 0 directly on sampled z.
inline VerificationReport verify(const GeodesicCandidate& cand, const VerifyOptions& opt = {}) {
  const TubeDomain& D = cand.domain;
  const HMap& h = cand.h;
  const int n = cand.dim();
  if (opt.grid < 256) throw InvalidArgument("verify: grid must be at least 256");
  if (D.dim() != n || h.dim() != n) throw InvalidArgument("verify: dimension mismatch");
  if (h.is_zero()) throw InvalidArgument("verify: h is identically zero");

  VerificationReport rep;
  const int N = opt.grid;
  std::vector<double> skip = cand.mu.ac.singular_points();
  for (double r : all_circle_roots(h)) skip.push_back(r);
  auto skipped = [&](double t) {
    for (double s : skip)
      if (std::abs(wrap_difference(t - s)) <= opt.singular_gap) return true;
    return false;
  };

  // Grid values, computed once.
  std::vector<Eigen::VectorXd> tr(N), g(N);
  std::vector<char> use(N, 0);
  std::vector<FaceDescription> faces(N);
  parallel_for(N, opt.threads, [&](int k) {
    const CirclePoint p(detail::grid_angle(k, N));
    tr[k] = h.trace(p);
    if (skipped(p.angle())) return;
    use[k] = 1;
    g[k] = cand.mu.ac(p);
    faces[k] = D.face(tr[k]);
  });

  // (i) g(l) in P_D(conj(l) h(l))
  {
    ConditionRecord r{"i", Status::pass, 0.0, nullptr, "pass (sampled)"};
    int unsupported = 0, worst = -1;
    for (int k = 0; k < N; ++k) {
      if (!use[k]) continue;
      double d;
      if (faces[k].kind == FaceKind::unsupported) {
        ++unsupported;
        continue;
      }
      if (!g[k].allFinite()) d = kInf;
      else d = faces[k].distance_to(g[k]) / std::max(1.0, g[k].norm());
      if (d > r.residual) {
        r.residual = d;
        worst = k;
      }
    }
    if (r.residual > opt.tol_face) {
      r.status = Status::fail;
      r.note = faces[worst].kind == FaceKind::empty ? "empty face at the witness" : "g off the face";
    } else if (unsupported > 0) {
      r.status = Status::indeterminate;
      r.note = std::to_string(unsupported) + " grid points with a face the domain cannot describe";
    }
    if (worst >= 0) {
      r.witness = detail::angle_witness(detail::grid_angle(worst, N));
      r.witness["g"] = g[worst].allFinite() ? jsonio::vector_to_json(g[worst]) : json(nullptr);
      r.witness["face"] = to_string(faces[worst].kind);
    }
    if (!std::isfinite(r.residual)) r.residual = std::numeric_limits<double>::max();
    rep.conditions.push_back(r);
  }

  const SphericalDecomposition sd = spherical_decompose(cand.mu);
  auto atom_trace = [&](const SphericalDecomposition::NuAtom& a) { return h.trace(a.location); };

  // (ii) <trace, rho> >= 0 at the atoms of nu
  {
    ConditionRecord r{"ii", Status::pass, 0.0, nullptr, sd.nu.empty() ? "no atoms" : ""};
    for (const auto& a : sd.nu) {
      const Eigen::VectorXd v = atom_trace(a);
      const double s = v.dot(a.rho);
      const double viol = -s / std::max(1.0, v.norm());
      if (viol > r.residual) {
        r.residual = viol;
        r.witness = detail::angle_witness(a.location.angle());
        r.witness["value"] = s;
      }
    }
    if (r.residual > opt.tol_sign) r.status = Status::fail;
    rep.conditions.push_back(r);
  }

  // (iii) rho in S_D
  {
    ConditionRecord r{"iii", Status::pass, 0.0, nullptr, sd.nu.empty() ? "no atoms" : "boolean test"};
    for (const auto& a : sd.nu)
      if (!D.in_sd(a.rho)) {
        r.status = Status::fail;
        r.residual = 1.0;
        r.witness = detail::angle_witness(a.location.angle());
        r.witness["rho"] = jsonio::vector_to_json(a.rho);
        break;
      }
    rep.conditions.push_back(r);
  }

  // (iv) Re phi(0) = mu(T)/2pi in Re D
  rep.mass = total_mass(cand.mu, opt.quad);
  const bool mass_inside = detail::inside_with_margin(D, rep.mass, opt.mass_margin);
  {
    ConditionRecord r{"iv", Status::pass, 0.0, json{{"mass", jsonio::vector_to_json(rep.mass)}},
                      "interior test with margin"};
    if (!mass_inside) {
      r.status = Status::fail;
      r.residual = 1.0;
    }
    rep.conditions.push_back(r);
  }

  // (v) rho in S_D and orthogonal to the trace
  {
    ConditionRecord r{"v", Status::pass, 0.0, nullptr, sd.nu.empty() ? "no atoms" : ""};
    for (const auto& a : sd.nu) {
      const Eigen::VectorXd v = atom_trace(a);
      double viol = std::abs(v.dot(a.rho)) / std::max(1.0, v.norm());
      if (!D.in_sd(a.rho)) viol = std::max(viol, 1.0);
      if (viol > r.residual) {
        r.residual = viol;
        r.witness = detail::angle_witness(a.location.angle());
      }
    }
    if (r.residual > opt.tol_sign) r.status = Status::fail;
    rep.conditions.push_back(r);
  }

  // (vi) nu-almost every trace lies on the boundary of closure(W_D)
  {
    ConditionRecord r{"vi", Status::pass, 0.0, nullptr, sd.nu.empty() ? "no atoms" : "boolean test"};
    bool undecided = false;
    for (const auto& a : sd.nu) {
      const Eigen::VectorXd v = atom_trace(a);
      const bool closed = D.in_wd_closure(v);
      const auto interior = D.in_wd_interior(v);
      if (!interior) undecided = true;
      if (!closed || (interior && *interior)) {
        r.status = Status::fail;
        r.residual = 1.0;
        r.witness = detail::angle_witness(a.location.angle());
        r.witness["trace"] = jsonio::vector_to_json(v);
        break;
      }
    }
    if (r.status == Status::pass && undecided) {
      r.status = Status::indeterminate;
      r.note = "interior of W_D not decidable for this domain; closure membership holds";
    }
    rep.conditions.push_back(r);
  }

  // (vii) trace in closure(W_D) on the grid
  {
    ConditionRecord r{"vii", Status::pass, 0.0, nullptr, "pass (sampled)"};
    for (int k = 0; k < N; ++k)
      if (!D.in_wd_closure(tr[k])) {
        r.status = Status::fail;
        r.residual = 1.0;
        r.witness = detail::angle_witness(detail::grid_angle(k, N));
        r.witness["trace"] = jsonio::vector_to_json(tr[k]);
        r.note = "boolean test";
        break;
      }
    rep.conditions.push_back(r);
  }

  // Direct check.  The inequality characterizes geodesics among maps into D,
  // so the image hypothesis (mass in the base, <rho, w> <= 0 on closure(W_D))
  // is checked alongside it.
  {
    ConditionRecord r{"direct", Status::pass, 0.0, nullptr, "pass (sampled)"};
    std::mt19937_64 rng(opt.seed);
    const auto zs = detail::sample_base_points(D, h, opt.z_samples, rng);
    const auto ws = detail::sample_wd_closure(D, h, N, rng);
    std::vector<double> worst(zs.size(), 0.0);
    std::vector<int> where(zs.size(), -1);
    parallel_for(static_cast<int>(zs.size()), opt.threads, [&](int s) {
      const Eigen::VectorXd& z = zs[static_cast<std::size_t>(s)];
      for (int k = 0; k < N; ++k) {
        if (!use[k]) continue;
        double val;
        if (!g[k].allFinite()) val = kInf;
        else val = tr[k].dot(z - g[k]) / std::max(1.0, tr[k].norm() * std::max(z.norm(), g[k].norm()));
        if (val > worst[static_cast<std::size_t>(s)]) {
          worst[static_cast<std::size_t>(s)] = val;
          where[static_cast<std::size_t>(s)] = k;
        }
      }
    });
    for (std::size_t s = 0; s < zs.size(); ++s)
      if (worst[s] > r.residual) {
        r.residual = worst[s];
        r.witness = detail::angle_witness(detail::grid_angle(where[s], N));
        r.witness["z"] = jsonio::vector_to_json(zs[s]);
      }
    std::string why = r.residual > opt.tol_sign ? "density term positive" : "";
    for (const auto& a : sd.nu) {
      const Eigen::VectorXd v = atom_trace(a);
      const double term = -v.dot(a.rho) * a.weight / std::max(1.0, v.norm() * a.weight);
      if (term > r.residual) {
        r.residual = term;
        r.witness = detail::angle_witness(a.location.angle());
        why = "atom term positive";
      }
      for (const auto& w : ws) {
        const double ip = a.rho.dot(w);
        if (ip > r.residual) {
          r.residual = ip;
          r.witness = detail::angle_witness(a.location.angle());
          r.witness["w"] = jsonio::vector_to_json(w);
          why = "atom leaves the closed image (<rho, w> > 0)";
        }
      }
    }
    if (!mass_inside) {
      r.status = Status::fail;
      r.residual = std::max(r.residual, 1.0);
      r.witness = json{{"mass", jsonio::vector_to_json(rep.mass)}};
      why = "Re phi(0) outside the base";
    }
    if (r.residual > opt.tol_sign) {
      r.status = Status::fail;
      r.note = why;
    }
    r.witness = r.witness.is_null() ? json{{"z_samples", zs.size()}} : r.witness;
    r.witness["z_samples"] = zs.size();
    rep.conditions.push_back(r);
  }

  bool any_fail = false, any_open = false;
  for (const auto& c : rep.conditions) {
    if (c.id != "i" && c.id != "ii" && c.id != "iii" && c.id != "iv") continue;
    any_fail = any_fail || c.status == Status::fail;
    any_open = any_open || c.status == Status::indeterminate;
  }
  rep.overall = any_fail ? Status::fail : (any_open ? Status::indeterminate : Status::pass);
  return rep;
}

// Raises NonIntegrableDensity when |g| is not integrable near one of its
// singular points: |g| is integrated over dyadic shells toward the point and
// the shell sums are required to decay.
inline void check_integrable(const DensityFn& g, const QuadratureOptions& quad = {}) {
  const int shells = 60;
  for (double s : g.singular_points()) {
    for (double side : {1.0, -1.0}) {
      std::vector<double> sums;
      double total = 0.0;
      for (int k = 0; k < shells; ++k) {
        const double hi = 0.25 * std::ldexp(1.0, -k), lo = 0.5 * hi;
        QuadratureOptions q = quad;
        q.rel_tol = 1e-8;
        auto r = integrate_gk(
            [&](double u) {
              const Eigen::VectorXd v = g(CirclePoint::near(s, side * u));
              if (!v.allFinite()) throw DomainError("density: no face point near a singular point");
              return v.norm();
            },
            lo, hi, 0.0, q);
        sums.push_back(r.value);
        total += r.value;
      }
      double mean_ratio = 0.0;
      int count = 0;
      for (int k = shells - 10; k < shells; ++k)
        if (sums[static_cast<std::size_t>(k - 1)] > 0) {
          mean_ratio += sums[static_cast<std::size_t>(k)] / sums[static_cast<std::size_t>(k - 1)];
          ++count;
        }
      if (count > 0) mean_ratio /= count;
      if (total > 1e6 || (count > 0 && mean_ratio >= 0.99))
        throw NonIntegrableDensity("density is not integrable near angle " + std::to_string(s) +
                                   " (shell sums do not decay)");
    }
  }
}

namespace detail {

inline void require_faces(const TubeDomain& D, const HMap& h, const DensityFn& g, int grid = 1024) {
  std::vector<double> skip = g.singular_points();
  for (int k = 0; k < grid; ++k) {
    const double t = grid_angle(k, grid);
    bool near = false;
    for (double s : skip) near = near || std::abs(wrap_difference(t - s)) <= 1e-9;
    if (near) continue;
    if (!g(t).allFinite()) {
      const FaceDescription f = D.face(h.trace(CirclePoint(t)));
      const std::string what = f.kind == FaceKind::empty ? "the face P_D(conj(l) h(l)) is empty"
                               : f.kind == FaceKind::unsupported
                                   ? "the domain cannot describe the face P_D(conj(l) h(l))"
                                   : "the face is not a point and no selection was given";
      throw DomainError("construct: at angle " + std::to_string(t) + " " + what);
    }
  }
}

inline void validate_atoms(const TubeDomain& D, const HMap& h, const AtomList& atoms, double tol = 1e-9) {
  for (const auto& a : atoms) {
    if (a.weight.size() != D.dim()) throw InvalidArgument("atoms: dimension mismatch");
    const Eigen::VectorXd rho = a.weight.normalized();
    const Eigen::VectorXd v = h.trace(a.location);
    const std::string at = " at angle " + std::to_string(a.location.angle());
    if (v.dot(rho) < -tol * std::max(1.0, v.norm()))
      throw InvalidArgument("atoms: <trace, rho> < 0" + at + " (condition ii)");
    if (!D.in_sd(rho)) throw InvalidArgument("atoms: rho is not in S_D" + at + " (condition iii)");
    const auto interior = D.in_wd_interior(v);
    if (!D.in_wd_closure(v) || (interior && *interior))
      throw InvalidArgument("atoms: the trace is not on the boundary of W_D" + at + " (condition vi)");
  }
}

inline bool is_root(const std::vector<double>& roots, double theta, double tol = 1e-9) {
  for (double r : roots)
    if (std::abs(wrap_difference(r - theta)) <= tol) return true;
  return false;
}

}  // namespace detail

// g = the (selected) point of P_D(trace h); atoms validated against (ii),
// (iii) and (vi).
inline GeodesicCandidate construct(const HMap& h, const TubeDomain& D, const AtomList& atoms,
                                   const Eigen::VectorXd& im0 = {}, const FaceSelection& sel = {}) {
  if (h.dim() != D.dim()) throw InvalidArgument("construct: h and domain dimensions differ");
  if (h.is_zero()) throw InvalidArgument("construct: h is identically zero");
  DensityFn g = face_selection_density(D, h, sel);
  detail::require_faces(D, h, g);
  check_integrable(g);
  detail::validate_atoms(D, h, atoms);
  return GeodesicCandidate(BoundaryMeasureTuple(std::move(g), atoms), h, D, im0);
}

// Family D_n: h in H_+^n, singular part (alpha_1 delta_{l_1}, ...) with
// alpha_j <= 0 and l_j a root of h_j unless h_j vanishes identically.
struct DnAtom {
  double angle;
  double alpha;
};

inline GeodesicCandidate construct_dn(const HMap& h, const TubeDomain& D,
                                      const std::vector<std::optional<DnAtom>>& spec,
                                      const Eigen::VectorXd& im0 = {},
                                      const FaceSelection& sel = {FaceSelection::Mode::ray_offset, 0.0, 0.5}) {
  const int n = h.dim();
  if (D.dim() != n) throw InvalidArgument("construct-dn: h and domain dimensions differ");
  if (D.family() != DomainFamily::Dn) throw InvalidArgument("construct-dn: the domain is not in the family D_n");
  if (!is_hplus(h)) throw InvalidArgument("construct-dn: h is not in H_+^n");
  if (!spec.empty() && static_cast<int>(spec.size()) != n)
    throw InvalidArgument("construct-dn: atom spec must have one entry per coordinate");
  std::vector<Atom> atoms;
  for (int j = 0; j < static_cast<int>(spec.size()); ++j) {
    if (!spec[static_cast<std::size_t>(j)]) continue;
    const DnAtom& s = *spec[static_cast<std::size_t>(j)];
    if (s.alpha > 0) throw InvalidArgument("construct-dn: alpha_" + std::to_string(j + 1) + " must be <= 0");
    if (s.alpha == 0) continue;
    if (!h.component_zero(j) && !detail::is_root(circle_roots(h, j), s.angle))
      throw InvalidArgument("construct-dn: atom " + std::to_string(j + 1) + " at angle " + std::to_string(s.angle) +
                            " is not a root of h_" + std::to_string(j + 1));
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    w[j] = s.alpha;
    atoms.push_back({CirclePoint(s.angle), w});
  }
  return construct(h, D, AtomList::merged(std::move(atoms)), im0, sel);
}

// W_D a half-plane in R^2 (normalized to {v2 <= 0} up to the boundary ray):
// h2 in -H_+^1, singular part (0, alpha delta_{l0}) with alpha >= 0.
struct HalfplaneAtom {
  double angle;
  double alpha;
};

inline GeodesicCandidate construct_halfplane_c2(const HMap& h, const TubeDomain& D,
                                                const std::optional<HalfplaneAtom>& atom,
                                                const Eigen::VectorXd& im0 = {},
                                                const FaceSelection& sel = {FaceSelection::Mode::ray_offset, 0.0, 0.5}) {
  if (h.dim() != 2 || D.dim() != 2) throw InvalidArgument("construct-halfplane: n must be 2");
  if (D.family() != DomainFamily::halfplaneW)
    throw InvalidArgument("construct-halfplane: closure(W_D) is not the half-plane {v2 <= 0}");
  if (!is_hplus(-h.a[1], -h.b[1])) throw InvalidArgument("construct-halfplane: h2 is not in -H_+^1");
  std::vector<Atom> atoms;
  if (atom && atom->alpha != 0) {
    if (atom->alpha < 0) throw InvalidArgument("construct-halfplane: alpha must be >= 0");
    if (!h.component_zero(1) && !detail::is_root(circle_roots(h, 1), atom->angle))
      throw InvalidArgument("construct-halfplane: atom at angle " + std::to_string(atom->angle) +
                            " is not a root of h2");
    atoms.push_back({CirclePoint(atom->angle), shapes::vec2(0, atom->alpha)});
  }
  return construct(h, D, AtomList::merged(std::move(atoms)), im0, sel);
}

inline Eigen::VectorXcd eval_candidate(const GeodesicCandidate& cand, std::complex<double> lam,
                                       const QuadratureOptions& q = {}) {
  return HolomorphicFromMeasure(cand.mu, cand.im0, q).eval(lam);
}

struct Reduction {
  Eigen::MatrixXd V;
  GeodesicCandidate reduced;
};

// Pushes the candidate forward by a matrix whose rows are an orthonormal
// basis of X_h = span_R{Re a, Im a, b}.
inline Reduction reduce_dimension(const GeodesicCandidate& cand) {
  if (cand.h.is_zero()) throw InvalidArgument("reduce: h is identically zero");
  Eigen::MatrixXd V = hspan_basis(cand.h);
  TubeDomain D2 = pushforward(cand.domain, V);
  return {V, GeodesicCandidate(pushforward(cand.mu, V), cand.h.mapped(V), D2, V * cand.im0)};
}

}  // namespace tubegeo
