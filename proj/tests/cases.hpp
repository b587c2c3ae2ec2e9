#pragma once

// The closed-form geodesic examples and their single-fault mutations, shared
// by the unit tests and the acceptance binary.  Each case also carries an
// oracle for its density written straight from the displayed formula, with
// the circle trace computed from the polynomial rather than from HMap.

#include <complex>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tubegeo/geodesics.hpp"

namespace cases {

using namespace tubegeo;
using C = std::complex<double>;

inline Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline TubeDomain builtin(const std::string& name, const json& params = json::object()) {
  return make_builtin_domain(name, params);
}

// conj(l) (conj(a) l^2 + b l + a) on the circle, by complex arithmetic
inline double poly_trace(C a, double b, double theta) {
  const C l = std::polar(1.0, theta);
  return (std::conj(l) * (std::conj(a) * l * l + b * l + a)).real();
}

struct Mutation {
  std::string kind;                    // positive-atom, non-root-atom, mass-outside, off-face
  std::optional<std::string> target;   // the one condition among (i)-(iv) expected to fail
  std::function<GeodesicCandidate()> build;
};

struct Case {
  std::string name;
  std::function<GeodesicCandidate()> build;
  // density oracle; empty when the density is identically zero
  std::function<Eigen::VectorXd(double)> oracle;
  std::vector<Mutation> mutations;
};

inline GeodesicCandidate with_atom(const GeodesicCandidate& c, double theta, const Eigen::VectorXd& w) {
  BoundaryMeasureTuple extra(DensityFn::zero(c.dim()), AtomList::merged({{CirclePoint(theta), w}}));
  return GeodesicCandidate(c.mu + extra, c.h, c.domain, c.im0);
}

inline GeodesicCandidate off_face(const GeodesicCandidate& c, double delta = 1e-3) {
  return GeodesicCandidate(BoundaryMeasureTuple(normal_offset_density(c.mu.ac, c.h, delta), c.mu.atoms), c.h,
                           c.domain, c.im0);
}

inline std::vector<Case> positive_cases() {
  std::vector<Case> out;
  const double tiny = 0.05;

  // quarter circle, independent factors with roots at 0 and pi/2
  {
    auto build = [] {
      HMap h = from_factors({{1.0, 1.0}, {2.0, C(0, 1)}});
      return construct_dn(h, builtin("quarter-circle"), {DnAtom{0.0, -0.5}, DnAtom{kPi / 2, -1.0}});
    };
    auto oracle = [](double t) {
      const double v1 = poly_trace(-1.0, 2.0, t), v2 = poly_trace(C(0, -2), 4.0, t);
      const double r = std::hypot(v1, v2);
      return vec({v1 / r - 1, v2 / r - 1});
    };
    out.push_back({"quarter-circle independent", build, oracle,
                   {{"positive-atom", "iii", [=] { return with_atom(build(), 2.0, vec({tiny, 0})); }},
                    {"non-root-atom", "ii", [=] { return with_atom(build(), 2.0, vec({-0.3, 0})); }},
                    {"mass-outside", std::nullopt, nullptr},
                    {"off-face", "i", [=] { return off_face(build()); }}}});
  }
  // quarter circle, h2 = 2 h1 with common root l0 = 1
  {
    auto make = [](double a1, double a2) {
      HMap h = from_factors({{1.0, 1.0}, {2.0, 1.0}});
      return construct_dn(h, builtin("quarter-circle"), {DnAtom{0.0, a1}, DnAtom{0.0, a2}});
    };
    auto build = [=] { return make(-0.3, -0.2); };
    auto oracle = [](double) { return vec({1 / std::sqrt(5.0) - 1, 2 / std::sqrt(5.0) - 1}); };
    out.push_back({"quarter-circle dependent", build, oracle,
                   {{"positive-atom", "iii", [=] { return with_atom(build(), 2.0, vec({0, tiny})); }},
                    {"non-root-atom", "ii", [=] { return with_atom(build(), 1.5, vec({0, -0.3})); }},
                    {"mass-outside", "iv", [=] { return make(0.0, 0.0); }},
                    {"off-face", "i", [=] { return off_face(build()); }}}});
  }
  // quarter circle, h1 = 0: mu = (c dtheta, alpha2 delta_{l2}) with c <= -1
  {
    auto make = [](double a2) {
      HMap h = HMap::zero(2) + from_factors({{0.0, 0.0}, {1.0, 1.0}});
      return construct_dn(h, builtin("quarter-circle"), {std::nullopt, DnAtom{0.0, a2}}, {},
                          {FaceSelection::Mode::ray_offset, 0.5, 0.5});
    };
    auto build = [=] { return make(-1.0); };
    auto oracle = [](double) { return vec({-1.5, 0.0}); };
    out.push_back({"quarter-circle h1 = 0", build, oracle,
                   {{"positive-atom", "iii", [=] { return with_atom(build(), 2.0, vec({0, tiny})); }},
                    {"non-root-atom", "ii", [=] { return with_atom(build(), 2.5, vec({0, -0.3})); }},
                    {"mass-outside", "iv", [=] { return make(0.0); }},
                    {"off-face", "i", [=] { return off_face(build()); }}}});
  }
  // the mirror case h2 = 0
  {
    auto make = [](double a1) {
      HMap h = from_factors({{1.0, C(0, 1)}, {0.0, 0.0}});
      return construct_dn(h, builtin("quarter-circle"), {DnAtom{kPi / 2, a1}, std::nullopt}, {},
                          {FaceSelection::Mode::ray_offset, 1.0, 0.5});
    };
    auto build = [=] { return make(-2.0); };
    auto oracle = [](double) { return vec({0.0, -2.0}); };
    out.push_back({"quarter-circle h2 = 0", build, oracle,
                   {{"positive-atom", "iii", [=] { return with_atom(build(), 2.0, vec({tiny, 0})); }},
                    {"non-root-atom", "ii", [=] { return with_atom(build(), 0.5, vec({-0.3, 0})); }},
                    {"mass-outside", "iv", [=] { return make(0.0); }},
                    {"off-face", "i", [=] { return off_face(build()); }}}});
  }
  // hyperbola, independent factors (c1, l1) = (1, 0.2i), (c2, l2) = (4, -0.5)
  {
    auto build = [] {
      HMap h = from_factors({{1.0, C(0, 0.2)}, {4.0, -0.5}});
      return construct_dn(h, builtin("hyperbola"), {});
    };
    auto oracle = [](double t) {
      const C l = std::polar(1.0, t);
      const double c = -std::sqrt(4.0 / 1.0);
      const double r = std::abs(l - C(-0.5)) / std::abs(l - C(0, 0.2));
      return vec({c * r, 1 / (c * r)});
    };
    out.push_back({"hyperbola independent", build, oracle,
                   {{"positive-atom", "iii", [=] { return with_atom(build(), 0.0, vec({tiny, 0})); }},
                    {"non-root-atom", "ii", [=] { return with_atom(build(), 1.0, vec({-0.3, 0})); }},
                    {"mass-outside", std::nullopt, nullptr},
                    {"off-face", "i", [=] { return off_face(build()); }}}});
  }
  // hyperbola, h = factor(l0) (1, gamma) with gamma = 3, l0 = e^{i}
  {
    auto make = [](double a1, double a2) {
      const C l0 = std::polar(1.0, 1.0);
      HMap h = from_factors({{1.0, l0}, {3.0, l0}});
      return construct_dn(h, builtin("hyperbola"), {DnAtom{1.0, a1}, DnAtom{1.0, a2}});
    };
    auto build = [=] { return make(-1.0, -0.5); };
    auto oracle = [](double) { return vec({-std::sqrt(3.0), -1 / std::sqrt(3.0)}); };
    out.push_back({"hyperbola dependent", build, oracle,
                   {{"positive-atom", "iii", [=] { return with_atom(build(), 2.0, vec({tiny, 0})); }},
                    {"non-root-atom", "ii", [=] { return with_atom(build(), 3.0, vec({-0.3, 0})); }},
                    {"mass-outside", "iv", [=] { return make(0.0, 0.0); }},
                    {"off-face", "i", [=] { return off_face(build()); }}}});
  }
  // D': h = ((l + 1)^2, l), atom (alpha1, 0) at -1
  {
    auto build = [] {
      HMap h(Eigen::VectorXcd::Zero(2), vec({2, 1}));
      h.a[0] = 1.0;
      return construct_dn(h, builtin("dprime"), {DnAtom{kPi, -1.0}, std::nullopt});
    };
    auto oracle = [](double t) {
      const double r = std::abs(std::polar(1.0, t) + 1.0);
      return vec({-std::cbrt(2.0) * std::pow(r, -2.0 / 3.0), -std::pow(2.0, -2.0 / 3.0) * std::pow(r, 4.0 / 3.0)});
    };
    out.push_back({"dprime", build, oracle,
                   {{"positive-atom", "iii", [=] { return with_atom(build(), 2.0, vec({tiny, 0})); }},
                    {"non-root-atom", "ii", [=] { return with_atom(build(), 1.0, vec({-0.3, 0})); }},
                    {"mass-outside", std::nullopt, nullptr},
                    {"off-face", "i", [=] { return off_face(build()); }}}});
  }
  // half-parabola, independent: h1 with trace 2 cos, h2 = -|l + 1|^2, atom (0, alpha) at -1
  {
    auto build = [] {
      HMap h(Eigen::VectorXcd::Zero(2), Eigen::VectorXd::Zero(2));
      h.a[0] = 1.0;
      HMap f = from_factors({{1.0, -1.0}});
      h.a[1] = -f.a[0];
      h.b[1] = -f.b[0];
      return construct_halfplane_c2(h, builtin("half-parabola"), HalfplaneAtom{kPi, 0.5});
    };
    auto oracle = [](double t) {
      const double t1 = poly_trace(1.0, 0.0, t), t2 = poly_trace(-1.0, -2.0, t);
      if (t1 <= 0) return vec({0, 0});
      return vec({-t1 / (2 * t2), t1 * t1 / (4 * t2 * t2)});
    };
    out.push_back({"half-parabola independent", build, oracle,
                   {{"positive-atom", "iii", [=] { return with_atom(build(), 0.0, vec({tiny, 0})); }},
                    {"non-root-atom", "ii", [=] { return with_atom(build(), 1.0, vec({0, 0.3})); }},
                    {"mass-outside", std::nullopt, nullptr},
                    {"off-face", "i", [=] { return off_face(build()); }}}});
  }
  // half-parabola, dependent: h1 = -2 gamma h2, mu = (gamma, gamma^2) + (0, alpha delta_{-1})
  {
    const double gamma = 0.7;
    auto make = [=](double alpha) {
      HMap f = from_factors({{1.0, -1.0}});
      HMap h(Eigen::VectorXcd::Zero(2), Eigen::VectorXd::Zero(2));
      h.a[1] = -f.a[0];
      h.b[1] = -f.b[0];
      h.a[0] = -2 * gamma * h.a[1];
      h.b[0] = -2 * gamma * h.b[1];
      return construct_halfplane_c2(h, builtin("half-parabola"), HalfplaneAtom{kPi, alpha});
    };
    auto build = [=] { return make(0.8); };
    auto oracle = [=](double) { return vec({gamma, gamma * gamma}); };
    out.push_back({"half-parabola dependent", build, oracle,
                   {{"positive-atom", "iii", [=] { return with_atom(build(), 0.0, vec({tiny, 0})); }},
                    {"non-root-atom", "ii", [=] { return with_atom(build(), 1.0, vec({0, 0.3})); }},
                    {"mass-outside", "iv", [=] { return make(0.0); }},
                    {"off-face", "i", [=] { return off_face(build()); }}}});
  }
  // half-cone: trace (Re l, Im l, -1), g = 0, nu = delta_1 + delta_i
  {
    auto make = [](bool both) {
      Eigen::VectorXcd a(3);
      a << 0.5, C(0, 0.5), 0.0;
      HMap h(a, vec({0, 0, -1}));
      std::vector<Atom> atoms{{CirclePoint(0.0), vec({1, 0, 1}) / std::sqrt(2.0)}};
      if (both) atoms.push_back({CirclePoint(kPi / 2), vec({0, 1, 1}) / std::sqrt(2.0)});
      return construct(h, builtin("half-cone"), AtomList::merged(atoms), {},
                       {FaceSelection::Mode::ray_offset, 0.0, 0.5});
    };
    auto build = [=] { return make(true); };
    out.push_back({"half-cone", build, nullptr,
                   {{"positive-atom", "iii", [=] { return with_atom(build(), 1.0, vec({0, 0, -tiny})); }},
                    {"non-root-atom", "ii", [=] { return with_atom(build(), 3 * kPi / 2, vec({0, 0, 0.3})); }},
                    {"mass-outside", "iv", [=] { return make(false); }},
                    {"off-face", "i", [=] { return off_face(build()); }}}});
  }
  return out;
}

// Candidates whose h spans a proper subspace of R^n, for the dimension
// reduction check.  Each pairs a construction with whether verify should pass.
struct Degenerate {
  std::string name;
  GeodesicCandidate cand;
  bool expect_pass;
};

inline std::vector<Degenerate> degenerate_cases(std::uint64_t seed = 77) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<Degenerate> out;
  const auto qc = builtin("quarter-circle");
  // one vanishing component on the quarter circle, root of the other on the circle
  for (int k = 0; k < 10; ++k) {
    const int j = k % 2;
    const double root = kTwoPi * U(rng), c = 0.5 + 2.5 * U(rng), alpha = -2.0 * U(rng);
    std::vector<HFactor> f(2, HFactor{0.0, 0.0});
    f[static_cast<std::size_t>(j)] = {c, std::polar(1.0, root)};
    std::vector<std::optional<DnAtom>> atoms(2);
    atoms[static_cast<std::size_t>(j)] = DnAtom{root, alpha};
    auto cand = construct_dn(from_factors(f), qc, atoms, {}, {FaceSelection::Mode::ray_offset, 2.0 * U(rng), 0.5});
    out.push_back({"quarter-circle, h" + std::to_string(2 - j) + " = 0", cand, true});
  }
  // quarter circle times a half-line, h3 = 0
  json pd = {{"builtin", "product"},
             {"params", {{"factors", json::array({json{{"builtin", "quarter-circle"}},
                                                  json{{"builtin", "interval"}, {"params", {{"lo", "-inf"}, {"hi", 0}}}}})}}}};
  const auto D = make_domain(pd);
  for (int k = 0; k < 5; ++k) {
    const double r1 = kTwoPi * U(rng), c2 = 0.5 + 2 * U(rng);
    const C d2 = std::polar(0.8 * U(rng), kTwoPi * U(rng));
    HMap h = from_factors({{1.0, std::polar(1.0, r1)}, {c2, d2}, {0.0, 0.0}});
    auto cand = construct_dn(h, D, {DnAtom{r1, -U(rng)}, std::nullopt, std::nullopt}, {},
                             {FaceSelection::Mode::ray_offset, 0.2 + U(rng), 0.5});
    out.push_back({"product, h3 = 0", cand, true});
  }
  // single faults on some of the above: off-face densities, and positive
  // atoms on the components where h does not vanish
  for (int k = 0; k < 5; ++k) {
    const Degenerate base = out[static_cast<std::size_t>(3 * k % 15)];
    const double t = 1.0 + k;
    const Eigen::VectorXd w = 0.05 * base.cand.h.trace(CirclePoint(t)).cwiseAbs().cwiseSign();
    out.push_back({"fault on " + base.name, k % 2 == 0 ? off_face(base.cand) : with_atom(base.cand, t, w), false});
  }
  return out;
}

}  // namespace cases
