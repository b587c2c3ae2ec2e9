#pragma once

// Extremal-map candidates in the built-in Reinhardt domains, shared by the
// unit tests and the acceptance binary.

#include <complex>
#include <random>
#include <string>
#include <vector>

#include "cases.hpp"
#include "tubegeo/reinhardt.hpp"

namespace rcases {

using namespace tubegeo;
using C = std::complex<double>;

struct Named {
  std::string name;
  ExtremalCandidate cand;
};

inline DiscAutomorphism random_aut(std::mt19937_64& rng, double rmax = 0.6) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return DiscAutomorphism::mobius(std::polar(1.0, kTwoPi * u(rng)), std::polar(rmax * u(rng), kTwoPi * u(rng)));
}

struct GapqDraw {
  double a, p, q, beta;
  DiscAutomorphism sigma, B1, B2;
  ExtremalCandidate cand;
  // 0: third form, 1 or 2: f_j is an automorphism.
  int form = 0;
};

// Random G_{a,p,q} candidates: two draws in three use the strip form, the
// rest make one coordinate an automorphism and the other B e^{c} with a
// constant c strictly below the slice bound.
inline std::vector<GapqDraw> gapq_draws(int count, std::uint64_t seed = 2024) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<GapqDraw> out;
  for (int i = 0; i < count; ++i) {
    GapqDraw d;
    d.a = 0.05 + 0.9 * u(rng);
    d.p = 0.3 + 2.7 * u(rng);
    d.q = 0.3 + 2.7 * u(rng);
    d.beta = -3.0 + 6.0 * u(rng);
    d.sigma = i % 4 == 0 ? DiscAutomorphism::one() : random_aut(rng);
    d.B1 = u(rng) < 0.5 ? DiscAutomorphism::one() : random_aut(rng);
    d.B2 = random_aut(rng);
    if (i % 3 != 2) {
      d.form = 0;
      d.cand = gapq_extremal(d.a, d.p, d.q, d.sigma, d.beta, d.B1, d.B2);
    } else {
      d.form = 1 + (i / 3) % 2;
      const int j = d.form - 1, k = 1 - j;
      const double pk = k == 0 ? d.p : d.q;
      const double c = (1.0 + 2.0 * u(rng)) * std::log(d.a) / pk;
      OtherComponent o{k, d.B1, BoundaryMeasureTuple(DensityFn::constant(cases::vec({c})), AtomList()), d.beta};
      d.cand = automorphism_candidate(make_reinhardt("gapq", json{{"a", d.a}, {"p", d.p}, {"q", d.q}}), j, d.B2, {o});
    }
    out.push_back(std::move(d));
  }
  return out;
}

inline ExtremalCandidate bidisc_identity() {
  return automorphism_candidate(make_reinhardt("bidisc"), 0, DiscAutomorphism::mobius(1.0, 0.0));
}

// phi = hyperbola geodesic with densities through the two prescribed points.
inline ExtremalCandidate hyperbola_lift() {
  GeodesicCandidate geo = cases::positive_cases()[4].build();
  return exponential_candidate(make_reinhardt("hyperbola"), {0, 1}, {DiscAutomorphism::one(), DiscAutomorphism::one()},
                               geo);
}

// A geodesic of the log image of the unit ball lifted with one Mobius factor.
inline ExtremalCandidate ball_lift() {
  const ReinhardtDomain G = make_reinhardt("ball");
  HMap h = from_factors({{1.0, C(0.5, 0.0)}, {1.0, C(-0.2, 0.3)}});
  GeodesicCandidate geo = construct(h, G.log_image(), AtomList());
  return exponential_candidate(G, {0, 1}, {DiscAutomorphism::mobius(C(0, 1), C(0.1, -0.2)), DiscAutomorphism::one()},
                               geo);
}

inline ExtremalCandidate constant_candidate() {
  const ReinhardtDomain G = make_reinhardt("bidisc");
  HMap h(Eigen::VectorXcd::Zero(2), cases::vec({1, 1}));
  GeodesicCandidate geo(BoundaryMeasureTuple(DensityFn::constant(cases::vec({-0.5, -1.0})), AtomList()), h,
                        G.log_image());
  return exponential_candidate(G, {0, 1}, {DiscAutomorphism::one(), DiscAutomorphism::one()}, geo);
}

// Lifted candidates expected to pass every necessary condition.
inline std::vector<Named> lifted_candidates() {
  std::vector<Named> out;
  out.push_back({"gapq strip, identity sigma",
                 gapq_extremal(0.5, 1, 2, DiscAutomorphism::one(), 0.0, DiscAutomorphism::one(),
                               DiscAutomorphism::mobius(1.0, C(0.2, 0)))});
  out.push_back({"gapq strip, sigma d = 0.2",
                 gapq_extremal(0.3, 1.5, 0.7, DiscAutomorphism::mobius(1.0, C(0.2, 0)), 0.4,
                               DiscAutomorphism::mobius(C(0, 1), C(0, 0.3)), DiscAutomorphism::one())});
  out.push_back({"bidisc (id, 0)", bidisc_identity()});
  out.push_back({"hyperbola geodesic", hyperbola_lift()});
  out.push_back({"ball geodesic", ball_lift()});
  return out;
}

// max |f'(l) - (f(l + h) - f(l - h)) / 2h| / max(1, |f'(l)|) over random l.
inline double derivative_fd_error(const ExtremalCandidate& c, int points, std::uint64_t seed, double rmax = 0.8,
                                  double step = 1e-5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const C l = std::polar(rmax * std::sqrt(u(rng)), kTwoPi * u(rng));
    const Eigen::VectorXcd d = lift_derivative(c, l);
    const Eigen::VectorXcd fd = (lift(c, l + step) - lift(c, l - step)) / (2 * step);
    worst = std::max(worst, (d - fd).cwiseAbs().maxCoeff() / std::max(1.0, d.cwiseAbs().maxCoeff()));
  }
  return worst;
}

}  // namespace rcases
