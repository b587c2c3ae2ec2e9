#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "densities.hpp"
#include "disc.hpp"
#include "errors.hpp"
#include "geodesics.hpp"
#include "herglotz.hpp"
#include "measures.hpp"
#include "tube_geometry.hpp"

namespace tubegeo {

// A complete Reinhardt domain given through its moduli. defining(r) < 0 on G,
// = 0 on the boundary, > 0 outside; r must be entrywise nonnegative.
class ReinhardtDomain {
 public:
  using Defining = std::function<double(const Eigen::VectorXd&)>;

  struct Flags {
    bool bounded = true;
    bool pseudoconvex = true;
    bool log_strictly_convex = false;
  };

  ReinhardtDomain() = default;
  ReinhardtDomain(std::string name, json params, int n, Defining defining, TubeDomain log_image,
                  Eigen::VectorXd radii, Flags flags)
      : name_(std::move(name)),
        params_(std::move(params)),
        n_(n),
        defining_(std::move(defining)),
        log_(std::move(log_image)),
        radii_(std::move(radii)),
        flags_(flags) {
    if (log_.dim() != n_ || radii_.size() != n_) throw InvalidArgument("reinhardt: dimension mismatch");
  }

  const std::string& name() const { return name_; }
  const json& params() const { return params_; }
  json descriptor() const { return json{{"name", name_}, {"params", params_}}; }
  int dim() const { return n_; }
  const TubeDomain& log_image() const { return log_; }
  const Eigen::VectorXd& radii() const { return radii_; }
  double radius(int j) const { return radii_[j]; }
  const Flags& flags() const { return flags_; }

  double defining(const Eigen::VectorXd& r) const {
    check(r);
    return defining_(r);
  }
  bool contains_moduli(const Eigen::VectorXd& r) const { return defining(r) < 0; }
  bool in_closure_moduli(const Eigen::VectorXd& r, double tol = 1e-9) const { return defining(r) <= tol; }
  bool contains(const Eigen::VectorXcd& z) const { return contains_moduli(z.cwiseAbs()); }

  // pi_A(G), which for a complete Reinhardt domain is the slice {z_j = 0, j not in A}.
  ReinhardtDomain projection(const std::vector<int>& A) const;

 private:
  void check(const Eigen::VectorXd& r) const {
    if (r.size() != n_) throw InvalidArgument("reinhardt " + name_ + ": wrong number of moduli");
  }

  std::string name_;
  json params_ = json::object();
  int n_ = 0;
  Defining defining_;
  TubeDomain log_;
  Eigen::VectorXd radii_;
  Flags flags_;
};

namespace reinhardt_detail {

inline TubeDomain orthant(int n) { return TubeDomain(std::make_shared<shapes::Orthant>(n)); }

inline ReinhardtDomain polydisc(int n) {
  if (n < 1) throw InvalidArgument("polydisc: n must be positive");
  return ReinhardtDomain(
      "polydisc", json{{"n", n}}, n, [](const Eigen::VectorXd& r) { return r.maxCoeff() - 1.0; }, orthant(n),
      Eigen::VectorXd::Ones(n), {true, true, false});
}

inline ReinhardtDomain ball(int n) {
  if (n < 1) throw InvalidArgument("ball: n must be positive");
  TubeDomain L = n == 1 ? orthant(1) : TubeDomain(std::make_shared<shapes::BallLog>(n));
  return ReinhardtDomain(
      "ball", json{{"n", n}}, n, [](const Eigen::VectorXd& r) { return r.squaredNorm() - 1.0; }, L,
      Eigen::VectorXd::Ones(n), {true, true, n > 1});
}

inline ReinhardtDomain gapq(double a, double p, double q) {
  auto L = TubeDomain(std::make_shared<shapes::GapqLog>(a, p, q));
  return ReinhardtDomain(
      "gapq", json{{"a", a}, {"p", p}, {"q", q}}, 2,
      [a, p, q](const Eigen::VectorXd& r) {
        return std::max({r[0] - 1.0, r[1] - 1.0, std::pow(r[0], p) * std::pow(r[1], q) / a - 1.0});
      },
      L, Eigen::VectorXd::Ones(2), {true, true, false});
}

// {|z1|, |z2| < 1, log|z1| log|z2| > 1} together with the two coordinate discs.
inline ReinhardtDomain hyperbola() {
  auto L = TubeDomain(std::make_shared<shapes::Hyperbola>());
  return ReinhardtDomain(
      "hyperbola", json::object(), 2,
      [](const Eigen::VectorXd& r) {
        const double edge = std::max(r[0] - 1.0, r[1] - 1.0);
        if (edge >= 0) return edge;
        if (r[0] == 0.0 || r[1] == 0.0) return edge;
        return std::max(edge, 1.0 - std::log(r[0]) * std::log(r[1]));
      },
      L, Eigen::VectorXd::Ones(2), {true, true, true});
}

}  // namespace reinhardt_detail

inline ReinhardtDomain make_reinhardt(const std::string& name, const json& params = json::object()) {
  auto num = [&](const char* k) { return jsonio::number(jsonio::field(params, k, name), name + "." + k); };
  auto count = [&](int dflt) {
    return params.is_object() && params.contains("n") ? static_cast<int>(num("n")) : dflt;
  };
  if (name == "bidisc") return reinhardt_detail::polydisc(2);
  if (name == "polydisc") return reinhardt_detail::polydisc(count(2));
  if (name == "ball") return reinhardt_detail::ball(count(2));
  if (name == "gapq") return reinhardt_detail::gapq(num("a"), num("p"), num("q"));
  if (name == "hyperbola") return reinhardt_detail::hyperbola();
  throw InvalidArgument("reinhardt: unregistered domain '" + name + "'");
}

inline ReinhardtDomain reinhardt_from_json(const json& desc) {
  if (desc.is_string()) return make_reinhardt(desc.get<std::string>());
  if (!desc.is_object() || !desc.contains("name"))
    throw InvalidArgument("reinhardt domain: expected a name or {\"name\", \"params\"}");
  return make_reinhardt(desc.at("name").get<std::string>(), desc.value("params", json::object()));
}

inline ReinhardtDomain ReinhardtDomain::projection(const std::vector<int>& A) const {
  if (A.empty()) throw InvalidArgument("projection: empty coordinate set");
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i] < 0 || A[i] >= n_) throw InvalidArgument("projection: coordinate out of range");
    if (i > 0 && A[i] <= A[i - 1]) throw InvalidArgument("projection: coordinates must be increasing");
  }
  const int k = static_cast<int>(A.size());
  if (k == n_) return *this;
  // Every built-in has unit coordinate discs as its one-dimensional slices.
  if (name_ == "polydisc") return reinhardt_detail::polydisc(k);
  if (name_ == "ball") return reinhardt_detail::ball(k);
  if (k == 1 && (name_ == "gapq" || name_ == "hyperbola")) return reinhardt_detail::polydisc(1);
  throw Unsupported("projection of " + name_ + " onto " + std::to_string(k) + " coordinates");
}

// Randomized check that shrinking one modulus keeps points of G inside G.
inline bool spot_check_complete(const ReinhardtDomain& G, int samples = 2000, std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = G.dim();
  int found = 0;
  for (int s = 0; s < samples * 20 && found < samples; ++s) {
    Eigen::VectorXd r(n);
    for (int j = 0; j < n; ++j) r[j] = G.radius(j) * u(rng);
    if (!G.contains_moduli(r)) continue;
    ++found;
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd t = r;
      t[j] *= u(rng);
      if (!G.contains_moduli(t)) return false;
    }
  }
  return found > 0;
}

enum class CoordKind { zero, exp, aut };

inline const char* to_string(CoordKind k) {
  switch (k) {
    case CoordKind::zero: return "zero";
    case CoordKind::exp: return "exp";
    case CoordKind::aut: return "aut";
  }
  return "?";
}

// f_j = B_j e^{phi_i} for exp coordinates (i counts exp coordinates in order),
// f_j = R_j B_j for aut coordinates, f_j = 0 otherwise.
struct ExtremalCandidate {
  ReinhardtDomain G;
  std::vector<CoordKind> kinds;
  std::vector<DiscAutomorphism> B;
  HolomorphicFromMeasure phi;
  // Set when phi is a candidate geodesic of the log image of pi_A(G).
  std::optional<HMap> h;
  std::vector<std::string> flags;

  std::vector<int> coords(CoordKind k) const {
    std::vector<int> out;
    for (int j = 0; j < static_cast<int>(kinds.size()); ++j)
      if (kinds[static_cast<std::size_t>(j)] == k) out.push_back(j);
    return out;
  }
  std::vector<int> active() const {
    std::vector<int> out;
    for (int j = 0; j < static_cast<int>(kinds.size()); ++j)
      if (kinds[static_cast<std::size_t>(j)] != CoordKind::zero) out.push_back(j);
    return out;
  }
  int exp_count() const { return static_cast<int>(coords(CoordKind::exp).size()); }
  bool exponential_form() const { return coords(CoordKind::aut).empty(); }

  // The tube geodesic behind an exponential-form candidate.
  std::optional<GeodesicCandidate> geodesic() const {
    if (!h || !exponential_form()) return std::nullopt;
    return GeodesicCandidate(phi.measure(), *h, G.projection(active()).log_image(), phi.im0());
  }
};

namespace reinhardt_detail {
inline void validate(const ExtremalCandidate& c) {
  const int n = c.G.dim();
  if (static_cast<int>(c.kinds.size()) != n || static_cast<int>(c.B.size()) != n)
    throw InvalidArgument("extremal candidate: need one kind and one automorphism per coordinate");
  if (c.active().empty()) throw InvalidArgument("extremal candidate: every component vanishes (k = 0)");
  const int m = c.exp_count();
  if (m > 0 && c.phi.dim() != m)
    throw InvalidArgument("extremal candidate: phi must have one component per exp coordinate");
  if (c.h && c.h->dim() != m) throw InvalidArgument("extremal candidate: h has the wrong dimension");
}

inline std::complex<double> as_map(const DiscAutomorphism& s, std::complex<double> l) {
  return s.is_one() ? l : s(l);
}
inline std::complex<double> as_map_derivative(const DiscAutomorphism& s, std::complex<double> l) {
  return s.is_one() ? 1.0 : s.derivative(l);
}
}  // namespace reinhardt_detail

// pi_A o f = (B_j e^{phi_j}), zero off A.
inline ExtremalCandidate exponential_candidate(const ReinhardtDomain& G, const std::vector<int>& A,
                                               std::vector<DiscAutomorphism> B, const GeodesicCandidate& geo,
                                               const QuadratureOptions& quad = {}) {
  const int n = G.dim();
  if (static_cast<int>(A.size()) != geo.dim()) throw InvalidArgument("extremal candidate: #A must equal dim phi");
  if (B.size() != A.size()) throw InvalidArgument("extremal candidate: need one automorphism per active coordinate");
  ExtremalCandidate c;
  c.G = G;
  c.kinds.assign(static_cast<std::size_t>(n), CoordKind::zero);
  c.B.assign(static_cast<std::size_t>(n), DiscAutomorphism::one());
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i] < 0 || A[i] >= n || (i > 0 && A[i] <= A[i - 1]))
      throw InvalidArgument("extremal candidate: A must be increasing coordinates of G");
    c.kinds[static_cast<std::size_t>(A[i])] = CoordKind::exp;
    c.B[static_cast<std::size_t>(A[i])] = B[i];
  }
  c.phi = HolomorphicFromMeasure(geo.mu, geo.im0, quad);
  c.h = geo.h;
  reinhardt_detail::validate(c);
  if (c.geodesic()->domain.descriptor() != geo.domain.descriptor())
    throw InvalidArgument("extremal candidate: phi is not posed over the log image of pi_A(G)");
  return c;
}

// f_j = R_j B_j, and the other coordinates either vanish or are B_k e^{phi_k}.
struct OtherComponent {
  int coord = 0;
  DiscAutomorphism B;
  BoundaryMeasureTuple mu;
  double im0 = 0.0;
};

inline ExtremalCandidate automorphism_candidate(const ReinhardtDomain& G, int j, const DiscAutomorphism& Bj,
                                                const std::vector<OtherComponent>& others = {},
                                                const QuadratureOptions& quad = {}) {
  const int n = G.dim();
  if (j < 0 || j >= n) throw InvalidArgument("automorphism candidate: coordinate out of range");
  if (Bj.is_one()) throw InvalidArgument("automorphism candidate: B_j must be an automorphism, not 1");
  ExtremalCandidate c;
  c.G = G;
  c.kinds.assign(static_cast<std::size_t>(n), CoordKind::zero);
  c.B.assign(static_cast<std::size_t>(n), DiscAutomorphism::one());
  c.kinds[static_cast<std::size_t>(j)] = CoordKind::aut;
  c.B[static_cast<std::size_t>(j)] = Bj;
  std::vector<OtherComponent> os = others;
  std::sort(os.begin(), os.end(), [](const auto& x, const auto& y) { return x.coord < y.coord; });
  std::vector<Atom> atoms;
  Eigen::VectorXd im0(static_cast<Eigen::Index>(os.size()));
  for (std::size_t i = 0; i < os.size(); ++i) {
    const auto& o = os[i];
    if (o.coord < 0 || o.coord >= n || o.coord == j || c.kinds[static_cast<std::size_t>(o.coord)] != CoordKind::zero)
      throw InvalidArgument("automorphism candidate: bad or repeated coordinate");
    if (o.mu.dim() != 1) throw InvalidArgument("automorphism candidate: other components need 1-d measures");
    c.kinds[static_cast<std::size_t>(o.coord)] = CoordKind::exp;
    c.B[static_cast<std::size_t>(o.coord)] = o.B;
    im0[static_cast<Eigen::Index>(i)] = o.im0;
  }
  if (!os.empty()) {
    // Stack the one-dimensional measures into one tuple.
    const int m = static_cast<int>(os.size());
    std::vector<DensityFn> parts;
    for (std::size_t i = 0; i < os.size(); ++i) {
      parts.push_back(os[i].mu.ac);
      for (const auto& a : os[i].mu.atoms) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
        w[static_cast<Eigen::Index>(i)] = a.weight[0];
        atoms.push_back({a.location, w});
      }
    }
    const DensityFn g = density_stack(parts);
    c.phi = HolomorphicFromMeasure(BoundaryMeasureTuple(g, AtomList::merged(atoms)), im0, quad);
  }
  reinhardt_detail::validate(c);
  return c;
}

// Example-form extremal for G_{a,p,q}:
// f = (B1 exp(psi log(a)/p), B2 exp((1 - psi) log(a)/q + i beta)), psi = m o sigma,
// where a trivial sigma stands for the identity.
inline ExtremalCandidate gapq_extremal(double a, double p, double q, const DiscAutomorphism& sigma, double beta,
                                       const DiscAutomorphism& B1, const DiscAutomorphism& B2,
                                       const QuadratureOptions& quad = {}) {
  if (!(a > 0 && a < 1) || !(p > 0) || !(q > 0)) throw InvalidArgument("gapq extremal: need 0 < a < 1, p, q > 0");
  if (!std::isfinite(beta)) throw InvalidArgument("gapq extremal: beta must be finite");
  const ReinhardtDomain G = make_reinhardt("gapq", json{{"a", a}, {"p", p}, {"q", q}});
  const double l = std::log(a);
  HMap h(Eigen::VectorXcd::Zero(2), (Eigen::VectorXd(2) << p, q).finished());
  const std::complex<double> psi0 = strip_map(reinhardt_detail::as_map(sigma, 0.0));
  Eigen::VectorXd im0(2);
  im0 << psi0.imag() * l / p, -psi0.imag() * l / q + beta;
  BoundaryMeasureTuple mu(gapq_strip_density(a, p, q, sigma), AtomList());
  GeodesicCandidate geo(mu, h, G.log_image(), im0);
  ExtremalCandidate c = exponential_candidate(G, {0, 1}, {B1, B2}, geo, quad);
  if (B1.is_one() && B2.is_one()) c.flags.push_back("B1 B2 = 1: excluded by the trichotomy's third form");
  return c;
}

// Closed form of Example-form phi, for cross-checks.
inline Eigen::VectorXcd gapq_phi_closed_form(double a, double p, double q, const DiscAutomorphism& sigma,
                                             double beta, std::complex<double> lam) {
  const double l = std::log(a);
  const std::complex<double> psi = strip_map(reinhardt_detail::as_map(sigma, lam));
  Eigen::VectorXcd out(2);
  out << psi * l / p, (1.0 - psi) * l / q + std::complex<double>(0, beta);
  return out;
}

inline void lift_guard(std::complex<double> lam) {
  if (!(std::abs(lam) <= 1.0 - kDiscGuard))
    throw DomainError("lift: |lambda| must be <= 1 - 1e-9");
}

inline Eigen::VectorXcd lift_unchecked(const ExtremalCandidate& c, std::complex<double> lam) {
  lift_guard(lam);
  const int n = c.G.dim();
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(n);
  Eigen::VectorXcd ph;
  if (c.exp_count() > 0) ph = c.phi.eval(lam);
  int i = 0;
  for (int j = 0; j < n; ++j) {
    const auto& Bj = c.B[static_cast<std::size_t>(j)];
    switch (c.kinds[static_cast<std::size_t>(j)]) {
      case CoordKind::zero: break;
      case CoordKind::aut: f[j] = c.G.radius(j) * Bj(lam); break;
      case CoordKind::exp: f[j] = Bj(lam) * std::exp(ph[i++]); break;
    }
  }
  return f;
}

inline Eigen::VectorXcd lift(const ExtremalCandidate& c, std::complex<double> lam, double tol = 1e-9) {
  Eigen::VectorXcd f = lift_unchecked(c, lam);
  const double r = c.G.defining(f.cwiseAbs());
  if (!(r <= tol))
    throw LiftOutsideDomain("lift: f(lambda) leaves the closure of " + c.G.name() + " (defining value " +
                            std::to_string(r) + ")");
  return f;
}

// f_j' = B_j' e^{phi} + B_j phi' e^{phi}.
inline Eigen::VectorXcd lift_derivative(const ExtremalCandidate& c, std::complex<double> lam) {
  lift_guard(lam);
  const int n = c.G.dim();
  Eigen::VectorXcd d = Eigen::VectorXcd::Zero(n);
  Eigen::VectorXcd ph, dph;
  if (c.exp_count() > 0) {
    ph = c.phi.eval(lam);
    dph = c.phi.derivative(lam);
  }
  int i = 0;
  for (int j = 0; j < n; ++j) {
    const auto& Bj = c.B[static_cast<std::size_t>(j)];
    switch (c.kinds[static_cast<std::size_t>(j)]) {
      case CoordKind::zero: break;
      case CoordKind::aut: d[j] = c.G.radius(j) * Bj.derivative(lam); break;
      case CoordKind::exp: {
        const std::complex<double> e = std::exp(ph[i]);
        d[j] = Bj.derivative(lam) * e + Bj(lam) * dph[i] * e;
        ++i;
        break;
      }
    }
  }
  return d;
}

// Constant candidates cannot be extremal.
inline bool is_degenerate(const ExtremalCandidate& c) {
  if (!c.coords(CoordKind::aut).empty()) return false;
  for (int j : c.active())
    if (!c.B[static_cast<std::size_t>(j)].is_one()) return false;
  double scale = 1.0;
  for (const std::complex<double> l : {std::complex<double>(0, 0), {0.5, 0}, {0, -0.5}, {-0.3, 0.4}}) {
    const Eigen::VectorXcd v = c.phi.eval(l);
    scale = std::max(scale, v.cwiseAbs().maxCoeff());
    if (c.phi.derivative(l).cwiseAbs().maxCoeff() > 1e-12 * scale) return false;
  }
  return true;
}

struct ContactReport {
  double residual = 0.0;
  int checked = 0;
  double worst_angle = 0.0;
  bool pass = true;
};

// |defining(|f*(lambda)|)| on the circle grid, missing the declared singular
// points and atoms of phi's measure.
inline ContactReport boundary_contact(const ExtremalCandidate& c, int grid = 1024, double tol = 1e-9,
                                      double gap = 1e-9) {
  ContactReport rep;
  const int n = c.G.dim();
  const auto& mu = c.phi.measure();
  for (int k = 0; k < grid; ++k) {
    const double th = detail::grid_angle(k, grid);
    const CirclePoint pt(th);
    if (c.exp_count() > 0) {
      if (mu.ac.near_singular(th, gap)) continue;
      bool at_atom = false;
      for (const auto& a : mu.atoms) at_atom = at_atom || std::abs(a.location.offset_from(th)) <= gap;
      if (at_atom) continue;
    }
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd g;
    if (c.exp_count() > 0) g = mu.ac(pt);
    int i = 0;
    bool finite = true;
    for (int j = 0; j < n; ++j) {
      switch (c.kinds[static_cast<std::size_t>(j)]) {
        case CoordKind::zero: break;
        case CoordKind::aut: r[j] = c.G.radius(j); break;
        case CoordKind::exp:
          finite = finite && std::isfinite(g[i]);
          r[j] = std::exp(g[i++]);
          break;
      }
    }
    if (!finite) continue;
    ++rep.checked;
    const double res = std::abs(c.G.defining(r));
    if (res > rep.residual) {
      rep.residual = res;
      rep.worst_angle = th;
    }
  }
  rep.pass = rep.checked > 0 && rep.residual <= tol;
  return rep;
}

struct Trichotomy {
  bool re1_zero = false;
  bool re2_zero = false;
  bool on_line = false;
  double residual[3] = {0, 0, 0};
  int count() const { return int(re1_zero) + int(re2_zero) + int(on_line); }
};

// Which of Re phi1 = 0, Re phi2 = 0, p Re phi1 + q Re phi2 = log a holds on a
// polar grid; phi_j = 0 for aut coordinates, -inf for vanishing ones.
inline Trichotomy gapq_trichotomy(const ExtremalCandidate& c, int grid = 256, double tol = 1e-9) {
  if (c.G.name() != "gapq") throw InvalidArgument("trichotomy: the candidate must live on G_{a,p,q}");
  const double p = jsonio::number(c.G.params().at("p"), "p");
  const double q = jsonio::number(c.G.params().at("q"), "q");
  const double l = std::log(jsonio::number(c.G.params().at("a"), "a"));
  const int rings = std::max(1, static_cast<int>(std::lround(std::sqrt(double(grid)))));
  const int per = std::max(1, grid / rings);
  Trichotomy t;
  const double inf = std::numeric_limits<double>::infinity();
  for (int a = 0; a < rings; ++a) {
    const double rad = 0.95 * (a + 0.5) / rings;
    for (int b = 0; b < per; ++b) {
      const std::complex<double> lam = std::polar(rad, kTwoPi * (b + 0.25) / per);
      Eigen::VectorXcd ph;
      if (c.exp_count() > 0) ph = c.phi.eval(lam);
      double re[2] = {0.0, 0.0};
      int i = 0;
      for (int j = 0; j < 2; ++j) {
        switch (c.kinds[static_cast<std::size_t>(j)]) {
          case CoordKind::zero: re[j] = -inf; break;
          case CoordKind::aut: re[j] = 0.0; break;
          case CoordKind::exp: re[j] = ph[i++].real(); break;
        }
      }
      t.residual[0] = std::max(t.residual[0], std::abs(re[0]));
      t.residual[1] = std::max(t.residual[1], std::abs(re[1]));
      t.residual[2] = std::max(t.residual[2], std::abs(p * re[0] + q * re[1] - l));
    }
  }
  t.re1_zero = t.residual[0] <= tol;
  t.re2_zero = t.residual[1] <= tol;
  t.on_line = t.residual[2] <= tol;
  return t;
}

enum class Branch { strictly_convex_form, automorphism_coordinate, exponential_form, unclassified };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::strictly_convex_form: return "strictly-convex-form";
    case Branch::automorphism_coordinate: return "automorphism-coordinate";
    case Branch::exponential_form: return "exponential-form";
    case Branch::unclassified: return "unclassified";
  }
  return "?";
}

struct Classification {
  Branch branch = Branch::unclassified;
  bool strict_refused = false;
  std::string note;
};

inline Classification classify(const ExtremalCandidate& c) {
  Classification out;
  const bool exp_form = c.exponential_form();
  const int n = c.G.dim();
  if (exp_form) {
    if (c.G.flags().log_strictly_convex) {
      out.branch = Branch::strictly_convex_form;
      return out;
    }
    out.strict_refused = true;
    out.note = "log G is not strictly convex; the strictly convex form does not apply";
  }
  if (n != 2) {
    if (out.note.empty()) out.note = "only the two-dimensional alternatives cover this candidate";
    return out;
  }
  if (!c.coords(CoordKind::aut).empty()) {
    out.branch = Branch::automorphism_coordinate;
    return out;
  }
  if (exp_form && c.active().size() == 2) {
    out.branch = Branch::exponential_form;
    return out;
  }
  out.note += out.note.empty() ? "" : "; ";
  out.note += "a vanishing coordinate requires the other to be an automorphism";
  return out;
}

struct Verdict {
  Classification cls;
  bool degenerate = false;
  ContactReport contact;
  std::optional<VerificationReport> tube;
  bool necessary_conditions = false;
  std::vector<std::string> flags;
};

// Necessary conditions from the extremal forms: a recognized branch, a
// non-constant map, boundary moduli on the boundary of G, and for exp forms a
// boundary density of phi lying on the faces P(trace h).
inline Verdict assess(const ExtremalCandidate& c, const VerifyOptions& opt = {}) {
  Verdict v;
  v.cls = classify(c);
  v.degenerate = is_degenerate(c);
  v.contact = boundary_contact(c, opt.grid, 1e-9, opt.singular_gap);
  v.flags = c.flags;
  bool ok = v.cls.branch != Branch::unclassified && !v.degenerate && v.contact.pass;
  if (auto geo = c.geodesic()) {
    v.tube = verify(*geo, opt);
    const bool face = v.tube->at("i").status == Status::pass;
    if (!geo->mu.atoms.empty()) v.flags.push_back("phi has a singular boundary part");
    // The forms allow phi(D) inside the boundary of the tube; then only (iv) fails.
    if (v.tube->failed_primary() == std::vector<std::string>{"iv"}) v.flags.push_back("phi maps into the boundary of the tube");
    ok = ok && face && geo->mu.atoms.empty();
  } else if (c.exponential_form()) {
    v.flags.push_back("no h attached; face condition not checked");
    ok = false;
  }
  if (v.degenerate) v.flags.push_back("constant candidate");
  v.necessary_conditions = ok;
  return v;
}

struct LempertValue {
  Eigen::VectorXcd z, w;
  double bound = 0.0;
};

inline LempertValue lempert_value(const ExtremalCandidate& c, std::complex<double> s1, std::complex<double> s2) {
  if (s1 == s2) throw InvalidArgument("lempert: sigma1 and sigma2 must differ");
  LempertValue out;
  out.z = lift(c, s1);
  out.w = lift(c, s2);
  out.bound = poincare_distance(s1, s2);
  return out;
}

struct KobayashiValue {
  Eigen::VectorXcd z, X;
  double bound = 0.0;
};

inline KobayashiValue kobayashi_value(const ExtremalCandidate& c, std::complex<double> s) {
  if (!(std::abs(s) < 1.0)) throw InvalidArgument("kobayashi: sigma must lie in the unit disc");
  KobayashiValue out;
  out.z = lift(c, s);
  out.X = lift_derivative(c, s);
  out.bound = 1.0 / (1.0 - std::norm(s));
  return out;
}

}  // namespace tubegeo
