#include <catch_amalgamated.hpp>

#include <random>

#include "cases.hpp"
#include "tubegeo/densities.hpp"
#include "tubegeo/disc.hpp"
#include "tubegeo/herglotz.hpp"

using namespace tubegeo;
using cases::vec;
using C = std::complex<double>;
using Catch::Matchers::WithinAbs;

namespace {

// Herglotz integral of a smooth density through its Fourier series:
// g = sum a_k cos k t + b_k sin k t gives a_0 + sum (a_k - i b_k) l^k.
// Coefficients come from an equispaced trapezoid sum, exact for trigonometric
// polynomials of degree below the grid size.
C series_oracle(const std::function<double(double)>& g, C l, int terms = 24, int grid = 256) {
  C out = 0;
  C lk = 1;
  for (int k = 0; k <= terms; ++k) {
    double ak = 0, bk = 0;
    for (int j = 0; j < grid; ++j) {
      const double t = kTwoPi * j / grid;
      ak += g(t) * std::cos(k * t);
      bk += g(t) * std::sin(k * t);
    }
    ak *= (k == 0 ? 1.0 : 2.0) / grid;
    bk *= 2.0 / grid;
    out += C(ak, -bk) * lk;
    lk *= l;
  }
  return out;
}

std::vector<C> interior_points(int count, double rmax, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<C> out;
  for (int i = 0; i < count; ++i) out.push_back(std::polar(rmax * std::sqrt(u(rng)), kTwoPi * u(rng)));
  return out;
}

struct RandomMeasure {
  Eigen::VectorXd c0, c1, s1;
  std::vector<Atom> atoms;
  BoundaryMeasureTuple mu;
};

// Trigonometric density plus up to three atoms, n = 2.  With positive set,
// the density is nonnegative and the atom weights are positive.
RandomMeasure random_measure(std::mt19937_64& rng, bool positive) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RandomMeasure m;
  m.c1 = vec({u(rng), u(rng)});
  m.s1 = vec({u(rng), u(rng)});
  m.c0 = vec({u(rng), u(rng)});
  if (positive) m.c0 = m.c1.cwiseAbs() + m.s1.cwiseAbs() + (m.c0.array().abs() + 0.05).matrix();
  const int k = static_cast<int>((u(rng) + 1.0) * 1.5) + (positive ? 1 : 0);
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd w = vec({u(rng), u(rng)});
    if (positive) w = w.cwiseAbs();
    m.atoms.push_back({CirclePoint(kPi * (u(rng) + 1.0)), w});
  }
  m.mu = BoundaryMeasureTuple(trig_density(m.c0, m.c1, m.s1), AtomList::merged(m.atoms));
  return m;
}

}  // namespace

TEST_CASE("constant density evaluates to the constant", "[herglotz]") {
  HolomorphicFromMeasure phi(BoundaryMeasureTuple(DensityFn::constant(vec({-1.5, 2.0})), AtomList()));
  for (C l : interior_points(100, 0.99, 1)) {
    const auto v = phi(l);
    CHECK(std::abs(v[0] - C(-1.5, 0)) < 1e-8);
    CHECK(std::abs(v[1] - C(2.0, 0)) < 1e-8);
  }
}

TEST_CASE("single atom gives the Cayley transform", "[herglotz]") {
  AtomList atoms = AtomList::merged({{CirclePoint(0.0), vec({kTwoPi})}});
  HolomorphicFromMeasure phi(BoundaryMeasureTuple(DensityFn::zero(1), atoms));
  for (C l : interior_points(100, 0.99, 2)) CHECK(std::abs(phi(l)[0] - (1.0 + l) / (1.0 - l)) < 1e-8);
}

TEST_CASE("cos density gives the identity", "[herglotz]") {
  HolomorphicFromMeasure phi(BoundaryMeasureTuple(trig_density(vec({0}), vec({1}), vec({0})), AtomList()));
  const auto g = [](double t) { return std::cos(t); };
  for (C l : interior_points(100, 0.9, 3)) {
    const C v = phi(l)[0];
    CHECK(std::abs(v - series_oracle(g, l)) < 1e-8);
    CHECK(std::abs(v - l) < 1e-8);
  }
}

TEST_CASE("imaginary part at the origin", "[herglotz]") {
  HolomorphicFromMeasure phi(BoundaryMeasureTuple(trig_density(vec({1, 0}), vec({0, 2}), vec({3, 0})), AtomList()),
                             vec({0.25, -4}));
  const auto v = phi(0.0);
  CHECK_THAT(v[0].imag(), WithinAbs(0.25, 1e-12));
  CHECK_THAT(v[1].imag(), WithinAbs(-4, 1e-12));
  CHECK_THROWS_AS(HolomorphicFromMeasure(phi.measure(), vec({1})), InvalidArgument);
}

TEST_CASE("random measures against the series oracle", "[herglotz]") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 10; ++i) {
    auto m = random_measure(rng, false);
    HolomorphicFromMeasure phi(m.mu);
    for (C l : interior_points(10, 0.9, 100 + static_cast<std::uint64_t>(i))) {
      const auto v = phi(l);
      for (int j = 0; j < 2; ++j) {
        C want = series_oracle([&](double t) { return m.c0[j] + m.c1[j] * std::cos(t) + m.s1[j] * std::sin(t); }, l, 2);
        for (const auto& a : m.atoms) {
          const C z = a.location.value();
          want += (z + l) / (z - l) * a.weight[j] / kTwoPi;
        }
        CHECK(std::abs(v[j] - want) < 1e-8);
      }
    }
  }
}

TEST_CASE("mean value and mass consistency on 50 random measures", "[herglotz]") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 50; ++i) {
    auto m = random_measure(rng, false);
    HolomorphicFromMeasure phi(m.mu);
    const Eigen::VectorXd at0 = phi(0.0).real();
    const Eigen::VectorXd mass = total_mass(m.mu);
    CHECK((at0 - mass).cwiseAbs().maxCoeff() < 1e-9);
    for (double r : {0.3, 0.9}) {
      const int N = 512;
      Eigen::VectorXd avg = Eigen::VectorXd::Zero(2);
      for (int k = 0; k < N; ++k) avg += phi(std::polar(r, kTwoPi * (k + 0.5) / N)).real();
      avg /= N;
      INFO("measure " << i << " r " << r);
      CHECK((avg - at0).cwiseAbs().maxCoeff() < 1e-7);
    }
  }
}

TEST_CASE("positive measures have nonnegative real part", "[herglotz]") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 50; ++i) {
    auto m = random_measure(rng, true);
    HolomorphicFromMeasure phi(m.mu);
    for (C l : interior_points(40, 0.999, 500 + static_cast<std::uint64_t>(i))) CHECK(phi(l).real().minCoeff() >= 0.0);
  }
}

TEST_CASE("radial limits", "[herglotz]") {
  HolomorphicFromMeasure cosine(BoundaryMeasureTuple(trig_density(vec({0}), vec({1}), vec({0})), AtomList()));
  const CirclePoint p(kPi / 3);
  CHECK_THAT(cosine.radial_real_limit(p)[0], WithinAbs(0.5, 1e-15));
  const auto conv = cosine.radial_convergence(p, {0.9, 0.99, 0.999, 1 - 1e-5});
  for (std::size_t k = 1; k < conv.size(); ++k) CHECK(conv[k] < conv[k - 1]);
  CHECK(conv.back() < 1e-4);

  AtomList atoms = AtomList::merged({{CirclePoint(1.0), vec({2.0})}, {CirclePoint(4.0), vec({-1.0})}});
  HolomorphicFromMeasure atomic(BoundaryMeasureTuple(DensityFn::zero(1), atoms));
  CHECK(atomic.radial_real_limit(CirclePoint(2.5))[0] == 0.0);
  CHECK(std::abs(atomic(0.999999 * std::polar(1.0, 2.5)).real()[0]) < 1e-4);
  CHECK_THROWS_AS(atomic.radial_real_limit(CirclePoint(1.0)), InvalidArgument);

  HolomorphicFromMeasure dp(BoundaryMeasureTuple(dprime_power_density(), AtomList()));
  const double r = std::sqrt(2.0);
  const Eigen::VectorXd g = dp.radial_real_limit(CirclePoint(kPi / 2));
  CHECK_THAT(g[0], WithinAbs(-std::cbrt(2.0) * std::pow(r, -2.0 / 3.0), 1e-14));
  CHECK_THAT(g[1], WithinAbs(-std::pow(2.0, -2.0 / 3.0) * std::pow(r, 4.0 / 3.0), 1e-14));
  CHECK(dp.radial_convergence(CirclePoint(kPi / 2), {1 - 1e-5}).front() < 1e-4);
  CHECK_THROWS_AS(dp.radial_real_limit(CirclePoint(kPi)), InvalidArgument);
}

TEST_CASE("evaluation guard near the circle", "[herglotz]") {
  HolomorphicFromMeasure phi(BoundaryMeasureTuple(DensityFn::constant(vec({1})), AtomList()));
  CHECK_NOTHROW(phi(1.0 - 2e-9));
  CHECK_THROWS_AS(phi(C(0, 1.0 - 1e-10)), DomainError);
  CHECK_THROWS_AS(phi.derivative(1.0), DomainError);
}

TEST_CASE("parallel evaluation is bitwise identical", "[herglotz]") {
  std::mt19937_64 rng(31);
  auto m = random_measure(rng, false);
  HolomorphicFromMeasure phi(m.mu);
  const auto pts = interior_points(64, 0.95, 9);
  const auto seq = phi.eval_many(pts, 1);
  const auto par = phi.eval_many(pts, 4);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK((seq[i].array() == par[i].array()).all());
}

TEST_CASE("Poincare distance", "[herglotz]") {
  CHECK(poincare_distance(0.0, 0.0) == 0.0);
  // artanh x = sum x^{2k+1}/(2k+1)
  double series = 0, x = 0.5;
  for (int k = 0; k < 60; ++k) series += std::pow(x, 2 * k + 1) / (2 * k + 1);
  CHECK_THAT(poincare_distance(0.0, 0.5), WithinAbs(series, 1e-12));
  CHECK_THAT(poincare_distance(0.0, 0.5), WithinAbs(0.5493061, 1e-7));
  const C s1(0.3, -0.2), s2(-0.6, 0.1);
  CHECK(poincare_distance(s1, s2) == poincare_distance(s2, s1));
  CHECK(poincare_distance(s1, s1) == 0.0);
  CHECK_THROWS_AS(poincare_distance(1.0, 0.0), DomainError);
}
