#include <catch_amalgamated.hpp>

#include <random>

#include "tubegeo/hclass.hpp"

using namespace tubegeo;
using Catch::Matchers::WithinAbs;
using C = std::complex<double>;

namespace {
HMap scalar(C a, double b) {
  Eigen::VectorXcd av(1);
  av << a;
  Eigen::VectorXd bv(1);
  bv << b;
  return HMap(av, bv);
}
}  // namespace

TEST_CASE("half-cone trace", "[hclass]") {
  Eigen::VectorXcd a(3);
  a << 0.5, C(0, 0.5), 0.0;
  Eigen::VectorXd b(3);
  b << 0, 0, -1;
  HMap h(a, b);
  for (int k = 0; k < 64; ++k) {
    const double t = kTwoPi * k / 64;
    CirclePoint p(t);
    Eigen::VectorXd e(3);
    e << std::cos(t), std::sin(t), -1;
    CHECK((h.trace(p) - e).norm() < 1e-14);
    // matches the polynomial form 1/2 (l^2 + 1, -i l^2 + i, -2 l)
    const C l = p.value();
    Eigen::VectorXcd poly(3);
    poly << 0.5 * (l * l + 1.0), 0.5 * (C(0, -1) * l * l + C(0, 1)), -l;
    CHECK((h(l) - poly).norm() < 1e-14);
  }
  CHECK(hspan_basis(h).rows() == 3);
}

TEST_CASE("factored components", "[hclass]") {
  HMap one = from_factors({{1.0, 0.0}});
  CHECK_THAT(one.trace(CirclePoint(0.7))[0], WithinAbs(1.0, 1e-15));
  HMap two = from_factors({{2.0, 1.0}});
  CHECK_THAT(two.trace(CirclePoint(kPi))[0], WithinAbs(8.0, 1e-14));
  HMap e = from_factors({{1.0, 1.0}});
  CHECK(e.a[0] == C(-1.0));
  CHECK(e.b[0] == 2.0);
  HMap z = from_factors({{0.0, C(0.3, 0.2)}});
  CHECK(z.component_zero(0));
  HMap i = from_factors({{1.0, C(0, 1)}});
  CHECK(i.a[0] == C(0, -1));
  CHECK_THAT(i.trace(CirclePoint(kPi / 2))[0], WithinAbs(0.0, 1e-15));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const double c = 3 * U(rng);
    const C d = std::polar(U(rng), kTwoPi * U(rng));
    HMap h = from_factors({{c, d}});
    for (int k = 0; k < 1024; ++k) {
      CirclePoint p(kTwoPi * k / 1024);
      CHECK(h.trace_residual(p) < 1e-12);
      CHECK_THAT(h.trace(p)[0], WithinAbs(c * std::norm(p.value() - d), 1e-12));
    }
    auto f = factorize(h.a[0], h.b[0]);
    REQUIRE(f);
    CHECK_THAT(f->c, WithinAbs(c, 1e-10));
    CHECK(std::abs(f->d - d) < 1e-8);
  }
}

TEST_CASE("circle roots", "[hclass]") {
  auto r = circle_roots(C(-1), 2.0);
  REQUIRE(r.size() == 1);
  CHECK_THAT(r[0], WithinAbs(0.0, 1e-15));
  CHECK(circle_roots(C(0), 1.0).empty());
  auto two = circle_roots(C(1), 0.0);
  REQUIRE(two.size() == 2);
  CHECK_THAT(two[0], WithinAbs(kPi / 2, 1e-14));
  CHECK_THAT(two[1], WithinAbs(3 * kPi / 2, 1e-14));
  // The trace vanishes to full relative precision near a double root.
  HMap h = from_factors({{1.0, -1.0}});
  const double root = circle_roots(h, 0)[0];
  CHECK_THAT(h.trace(CirclePoint::near(root, 1e-80))[0], WithinAbs(1e-160, 1e-175));
}

TEST_CASE("membership in H+", "[hclass]") {
  CHECK(is_hplus(from_factors({{1, 0.5}, {2, C(0, 1)}})));
  CHECK_FALSE(is_hplus(scalar(1.0, 0.0)));
  HMap neg = -from_factors({{1, 1.0}});
  CHECK_FALSE(is_hplus(neg));
  CHECK(is_hplus(-neg));
}

TEST_CASE("span basis of X_h", "[hclass]") {
  Eigen::VectorXcd a(3);
  a << 1, 0, 0;
  Eigen::VectorXd b(3);
  b << 0, 1, 0;
  CHECK(hspan_basis(HMap(a, b)).rows() == 2);
  Eigen::VectorXcd a0 = Eigen::VectorXcd::Zero(2);
  Eigen::VectorXd e1(2);
  e1 << 1, 0;
  Eigen::MatrixXd V = hspan_basis(HMap(a0, e1));
  REQUIRE(V.rows() == 1);
  CHECK_THAT(std::abs(V(0, 0)), WithinAbs(1.0, 1e-15));
  HMap dep = from_factors({{1, 1.0}, {3, 1.0}});
  CHECK(component_rank(dep) == 1);
  CHECK(component_rank(from_factors({{1, 1.0}, {1, 0.2}})) == 2);
}

TEST_CASE("json form", "[hclass]") {
  json j = json::parse(R"({"factors": [{"c": 1, "d": [0, 1]}, {"c": 2}]})");
  HMap h = hmap_from_json(j);
  CHECK(h.a[0] == C(0, -1));
  CHECK(h.b[1] == 2.0);
  HMap back = hmap_from_json(hmap_to_json(h));
  CHECK(back.a == h.a);
  CHECK(back.b == h.b);
  CHECK_THROWS_AS(hmap_from_json(json::parse(R"({"a": [[1,0]], "b": [1, 2]})")), InvalidArgument);
}
