#include <catch_amalgamated.hpp>

#include "reinhardt_cases.hpp"

using namespace tubegeo;
using cases::vec;
using C = std::complex<double>;
using Catch::Matchers::WithinAbs;

TEST_CASE("log images of the built-ins", "[reinhardt]") {
  const auto G = make_reinhardt("gapq", json{{"a", 0.5}, {"p", 1.0}, {"q", 2.0}});
  const auto& L = G.log_image();
  CHECK(L.name() == "gapq-log");
  CHECK(L.contains(vec({-0.5, -0.2})));    // -0.5 - 0.4 > log 1/2
  CHECK_FALSE(L.contains(vec({-0.2, -0.2})));
  CHECK(L.family() == DomainFamily::Dn);

  const auto P = make_reinhardt("bidisc");
  CHECK(P.log_image().contains(vec({-1e-3, -5})));
  CHECK_FALSE(P.log_image().contains(vec({1e-3, -5})));

  const auto Bl = make_reinhardt("ball");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 0.2);
  for (int i = 0; i < 500; ++i) {
    Eigen::VectorXd x = vec({u(rng), u(rng)});
    CHECK(Bl.log_image().contains(x) == (std::exp(2 * x[0]) + std::exp(2 * x[1]) < 1));
    Eigen::VectorXd r = x.array().exp();
    CHECK(Bl.contains_moduli(r) == Bl.log_image().contains(x));
  }

  for (auto name : {"bidisc", "ball", "hyperbola"}) {
    INFO(name);
    CHECK(spot_check_complete(make_reinhardt(name)));
    CHECK(make_reinhardt(name).log_image().family() == DomainFamily::Dn);
  }
  CHECK(spot_check_complete(G));
  CHECK_THROWS_AS(make_reinhardt("annulus"), InvalidArgument);
  CHECK(G.projection({1}).log_image().dim() == 1);
}

TEST_CASE("disc automorphisms are unimodular on the circle", "[reinhardt]") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    auto B = rcases::random_aut(rng, 0.95);
    for (int k = 0; k < 256; ++k) {
      CHECK_THAT(std::abs(B(std::polar(1.0, kTwoPi * k / 256))), WithinAbs(1.0, 1e-12));
      CHECK(std::abs(B(std::polar(0.99 * (k + 0.5) / 256, 2.1 * k))) < 1.0);
    }
  }
}

TEST_CASE("lift of a constant phi is constant", "[reinhardt]") {
  auto c = rcases::constant_candidate();
  for (C l : {C(0, 0), C(0.3, -0.5), C(-0.9, 0)}) {
    auto f = lift(c, l);
    CHECK_THAT(std::abs(f[0] - std::exp(-0.5)), WithinAbs(0, 1e-13));
    CHECK_THAT(std::abs(f[1] - std::exp(-1.0)), WithinAbs(0, 1e-13));
  }
  CHECK(is_degenerate(c));
  auto lv = lempert_value(c, 0.0, 0.5);
  CHECK((lv.z - lv.w).norm() < 1e-13);
  CHECK(lv.bound > 0);
  auto v = assess(c);
  CHECK_FALSE(v.necessary_conditions);
  auto kv = kobayashi_value(c, 0.0);
  CHECK(kv.X.norm() < 1e-13);
}

TEST_CASE("gapq candidate against the closed form", "[reinhardt]") {
  const double a = 0.5, p = 1, q = 2, beta = 0.7;
  auto c = gapq_extremal(a, p, q, DiscAutomorphism::one(), beta, DiscAutomorphism::one(),
                         DiscAutomorphism::mobius(1.0, 0.2));
  auto f0 = lift_unchecked(gapq_extremal(a, p, q, DiscAutomorphism::one(), beta, DiscAutomorphism::one(),
                                         DiscAutomorphism::one()),
                           0.0);
  CHECK_THAT(std::abs(f0[0] - std::pow(a, 1 / (2 * p))), WithinAbs(0, 1e-12));
  CHECK_THAT(std::abs(f0[1] - std::pow(a, 1 / (2 * q)) * std::polar(1.0, beta)), WithinAbs(0, 1e-12));

  const auto sig = DiscAutomorphism::mobius(C(0, 1), C(0.2, -0.1));
  auto c2 = gapq_extremal(0.3, 1.5, 0.7, sig, -0.4, DiscAutomorphism::one(), DiscAutomorphism::mobius(1.0, 0.2));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 60; ++i) {
    const C l = std::polar(0.9 * std::sqrt(u(rng)), kTwoPi * u(rng));
    const Eigen::VectorXcd want = gapq_phi_closed_form(0.3, 1.5, 0.7, sig, -0.4, l);
    CHECK((c2.phi.eval(l) - want).cwiseAbs().maxCoeff() < 1e-8);
  }
  CHECK(c.flags.empty());
  auto trivial = gapq_extremal(a, p, q, DiscAutomorphism::one(), 0, DiscAutomorphism::one(), DiscAutomorphism::one());
  CHECK(trivial.flags.size() == 1);
  CHECK_THROWS_AS(gapq_extremal(1.5, p, q, DiscAutomorphism::one(), 0, DiscAutomorphism::one(),
                                DiscAutomorphism::one()),
                  InvalidArgument);
}

TEST_CASE("p = q = 1, a = 1/2 stays on the line", "[reinhardt]") {
  auto c = gapq_extremal(0.5, 1, 1, DiscAutomorphism::one(), 0.0, DiscAutomorphism::one(),
                         DiscAutomorphism::mobius(1.0, 0.3));
  for (int k = 0; k < 256; ++k) {
    const C l = std::polar(0.97 * (k % 16 + 0.5) / 16, kTwoPi * (k / 16 + 0.3) / 16);
    const Eigen::VectorXcd ph = c.phi.eval(l);
    CHECK_THAT(ph[0].real() + ph[1].real(), WithinAbs(std::log(0.5), 1e-10));
  }
}

TEST_CASE("gapq trichotomy on random draws", "[reinhardt]") {
  for (const auto& d : rcases::gapq_draws(50)) {
    auto t = gapq_trichotomy(d.cand);
    INFO("form " << d.form << " residuals " << t.residual[0] << " " << t.residual[1] << " " << t.residual[2]);
    CHECK(t.count() == 1);
    if (d.form == 0) CHECK(t.on_line);
    if (d.form == 1) CHECK(t.re1_zero);
    if (d.form == 2) CHECK(t.re2_zero);
  }
}

TEST_CASE("bidisc Lempert and Kobayashi oracles", "[reinhardt]") {
  auto c = rcases::bidisc_identity();
  for (double r : {0.1, 0.5, 0.9, 0.999}) {
    auto lv = lempert_value(c, 0.0, r);
    // Lempert function of the bidisc: max of the coordinate distances.
    const double oracle = std::max(std::atanh(std::abs(lv.w[0] - lv.z[0])), std::atanh(std::abs(lv.w[1])));
    CHECK_THAT(lv.bound, WithinAbs(std::atanh(r), 1e-12));
    CHECK_THAT(lv.bound, WithinAbs(oracle, 1e-9));
  }
  auto kv = kobayashi_value(c, 0.0);
  CHECK_THAT(std::abs(kv.X[0] - 1.0), WithinAbs(0, 1e-12));
  CHECK_THAT(std::abs(kv.X[1]), WithinAbs(0, 1e-12));
  CHECK_THAT(kv.bound, WithinAbs(1.0, 1e-12));
  // kappa of the bidisc at 0 is max_j |X_j|.
  CHECK_THAT(kv.bound, WithinAbs(std::max(std::abs(kv.X[0]), std::abs(kv.X[1])), 1e-9));
  CHECK_THROWS_AS(lempert_value(c, 0.2, 0.2), InvalidArgument);
  CHECK_THROWS_AS(lift(c, 1.0), DomainError);
}

TEST_CASE("lift derivative matches finite differences", "[reinhardt]") {
  int seed = 1;
  for (const auto& n : rcases::lifted_candidates()) {
    INFO(n.name);
    CHECK(rcases::derivative_fd_error(n.cand, 50, static_cast<std::uint64_t>(seed++)) < 1e-6);
  }
  for (const auto& d : rcases::gapq_draws(6, 99)) CHECK(rcases::derivative_fd_error(d.cand, 10, 4) < 1e-6);
}

TEST_CASE("lifted candidates touch the boundary and pass the necessary conditions", "[reinhardt]") {
  for (const auto& n : rcases::lifted_candidates()) {
    INFO(n.name);
    auto rep = boundary_contact(n.cand);
    INFO("residual " << rep.residual << " at " << rep.worst_angle);
    CHECK(rep.pass);
    CHECK(rep.checked > 900);
    VerifyOptions fast;
    fast.grid = 512;
    fast.z_samples = 30;
    auto v = assess(n.cand, fast);
    for (const auto& f : v.flags) INFO("flag: " << f);
    CHECK(v.necessary_conditions);
    // On G_{a,p,q} the strip form keeps p Re phi1 + q Re phi2 = log a, so phi
    // runs inside the flat boundary piece and is not a geodesic of the tube.
    if (v.tube && n.cand.G.name() == "gapq")
      CHECK(v.tube->failed_primary() == std::vector<std::string>{"iv"});
    else if (v.tube)
      CHECK(v.tube->passed());
    for (double r : {0.0, 0.5, 0.95}) CHECK(n.cand.G.contains(lift(n.cand, std::polar(r, 1.3))));
  }
  for (const auto& d : rcases::gapq_draws(50)) CHECK(boundary_contact(d.cand).pass);
}

TEST_CASE("classifier branches", "[reinhardt]") {
  auto g = classify(rcases::lifted_candidates()[0].cand);
  CHECK(g.branch == Branch::exponential_form);
  CHECK(g.strict_refused);
  CHECK(classify(rcases::ball_lift()).branch == Branch::strictly_convex_form);
  CHECK(classify(rcases::hyperbola_lift()).branch == Branch::strictly_convex_form);
  CHECK(classify(rcases::bidisc_identity()).branch == Branch::automorphism_coordinate);
  // A single exp coordinate next to a vanishing one has no form in C^2.
  const auto P = make_reinhardt("bidisc");
  HMap h(Eigen::VectorXcd::Zero(1), vec({1}));
  GeodesicCandidate geo(BoundaryMeasureTuple(DensityFn::zero(1), AtomList()), h, P.projection({0}).log_image());
  auto lone = exponential_candidate(P, {0}, {DiscAutomorphism::mobius(1.0, 0.0)}, geo);
  CHECK(classify(lone).branch == Branch::unclassified);
}

TEST_CASE("lift leaving the domain is reported", "[reinhardt]") {
  const auto G = make_reinhardt("gapq", json{{"a", 0.5}, {"p", 1.0}, {"q", 1.0}});
  OtherComponent o{1, DiscAutomorphism::one(), BoundaryMeasureTuple(DensityFn::constant(vec({-0.1})), AtomList()),
                   0.0};
  auto c = automorphism_candidate(G, 0, DiscAutomorphism::mobius(1.0, 0.0), {o});
  CHECK_NOTHROW(lift(c, 0.1));
  CHECK_THROWS_AS(lift(c, 0.99), LiftOutsideDomain);
  CHECK_THROWS_AS(automorphism_candidate(G, 0, DiscAutomorphism::one()), InvalidArgument);
  CHECK_THROWS_AS(gapq_trichotomy(rcases::bidisc_identity()), InvalidArgument);
}
