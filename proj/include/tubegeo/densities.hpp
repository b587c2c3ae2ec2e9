#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "disc.hpp"
#include "hclass.hpp"
#include "measures.hpp"
#include "tube_geometry.hpp"

namespace tubegeo {

inline json selection_to_json(const FaceSelection& s) {
  switch (s.mode) {
    case FaceSelection::Mode::point_only: return json{{"mode", "point"}};
    case FaceSelection::Mode::ray_offset: return json{{"mode", "ray-offset"}, {"s", s.s}};
    case FaceSelection::Mode::segment_param: return json{{"mode", "segment"}, {"t", s.t}};
  }
  return json{{"mode", "point"}};
}

inline FaceSelection selection_from_json(const json& j) {
  FaceSelection s;
  if (j.is_null()) return s;
  const std::string mode = j.value("mode", std::string("point"));
  if (mode == "point") {
    s.mode = FaceSelection::Mode::point_only;
  } else if (mode == "ray-offset") {
    s.mode = FaceSelection::Mode::ray_offset;
    s.s = j.value("s", 0.0);
    if (s.s < 0) throw InvalidArgument("selection: ray offset must be >= 0");
  } else if (mode == "segment") {
    s.mode = FaceSelection::Mode::segment_param;
    s.t = j.value("t", 0.5);
    if (s.t < 0 || s.t > 1) throw InvalidArgument("selection: segment parameter must lie in [0, 1]");
  } else {
    throw InvalidArgument("selection: unknown mode '" + mode + "'");
  }
  return s;
}

// Faces only depend on the direction; rescaling keeps tiny traces near a
// root of h away from underflow.
inline Eigen::VectorXd unit_scaled(Eigen::VectorXd v) {
  const double m = v.cwiseAbs().maxCoeff();
  if (m > 0) v /= m;
  return v;
}

inline Eigen::VectorXd nan_vector(int n) {
  return Eigen::VectorXd::Constant(n, std::numeric_limits<double>::quiet_NaN());
}

// g(lambda) = the selected point of P_D(trace h(lambda)); NaN where the face
// is empty or has no selected point.
inline DensityFn face_selection_density(const TubeDomain& D, const HMap& h, const FaceSelection& sel = {}) {
  if (D.dim() != h.dim()) throw InvalidArgument("face selection: domain and h dimensions differ");
  json params{{"domain", D.descriptor()}, {"h", hmap_to_json(h)}, {"selection", selection_to_json(sel)}};
  const int n = h.dim();
  return DensityFn(
      n, "face-selection", params,
      [D, h, sel, n](const CirclePoint& p) {
        auto pt = D.face(unit_scaled(h.trace(p))).select(sel);
        return pt ? *pt : nan_vector(n);
      },
      all_circle_roots(h));
}

// trace/|trace| - (1, 1), the quarter-circle face formula.
inline DensityFn quarter_circle_normal_density(const HMap& h) {
  if (h.dim() != 2) throw InvalidArgument("quarter-circle density: n must be 2");
  return DensityFn(
      2, "quarter-circle-normal", json{{"h", hmap_to_json(h)}},
      [h](const CirclePoint& p) {
        Eigen::VectorXd v = unit_scaled(h.trace(p));
        return (v / v.norm() - Eigen::Vector2d(1, 1)).eval();
      },
      all_circle_roots(h));
}

// (c |l - l2| / |l - l1|, (1/c) |l - l1| / |l - l2|) with l1, l2 in the disc.
inline DensityFn hyperbola_ratio_density(double c, std::complex<double> l1, std::complex<double> l2) {
  if (!(std::abs(l1) < 1) || !(std::abs(l2) < 1)) throw InvalidArgument("hyperbola density: roots must lie in the disc");
  if (c == 0) throw InvalidArgument("hyperbola density: c must be nonzero");
  json params{{"c", c}, {"lambda1", jsonio::complex_to_json(l1)}, {"lambda2", jsonio::complex_to_json(l2)}};
  return DensityFn(2, "hyperbola-ratio", params, [c, l1, l2](const CirclePoint& p) {
    const auto z = p.value();
    const double r = std::abs(z - l2) / std::abs(z - l1);
    Eigen::VectorXd g(2);
    g << c * r, 1.0 / (c * r);
    return g;
  });
}

// (-2^{1/3} |l+1|^{-2/3}, -2^{-2/3} |l+1|^{4/3}), unbounded at l = -1.
inline DensityFn dprime_power_density() {
  return DensityFn(
      2, "dprime-power", json::object(),
      [](const CirclePoint& p) {
        const double r = p.chord_to(kPi);
        Eigen::VectorXd g(2);
        g << -std::cbrt(2.0) * std::pow(r, -2.0 / 3.0), -std::pow(2.0, -2.0 / 3.0) * std::pow(r, 4.0 / 3.0);
        return g;
      },
      {kPi});
}

// (-t1/(2 t2), t1^2/(4 t2^2)) on {t1 > 0}, zero elsewhere, t = trace h.
inline DensityFn half_parabola_ratio_density(const HMap& h) {
  if (h.dim() != 2) throw InvalidArgument("half-parabola density: n must be 2");
  return DensityFn(
      2, "half-parabola-ratio", json{{"h", hmap_to_json(h)}},
      [h](const CirclePoint& p) {
        const double t1 = h.trace_component(0, p), t2 = h.trace_component(1, p);
        Eigen::VectorXd g = Eigen::VectorXd::Zero(2);
        if (t1 > 0) {
          const double r = t1 / t2;
          g << -r / 2, r * r / 4;
        }
        return g;
      },
      all_circle_roots(h));
}

// Strip map m(l) = 1/2 + Log((1+l)/(1-l)) / (pi i) onto {0 < Re < 1}.
inline std::complex<double> strip_map(std::complex<double> l) {
  using C = std::complex<double>;
  return 0.5 + std::log((1.0 + l) / (1.0 - l)) / (C(0, 1) * kPi);
}
inline std::complex<double> strip_map_derivative(std::complex<double> l) {
  using C = std::complex<double>;
  return 2.0 / ((1.0 - l * l) * C(0, 1) * kPi);
}

// Boundary values of Re(m o sigma): 1 on the arc from sigma^{-1}(1) to
// sigma^{-1}(-1) counterclockwise, 0 on the other arc.
inline double strip_boundary_real(const DiscAutomorphism& sigma, const CirclePoint& p) {
  const double s1 = sigma.is_one() ? 0.0 : normalize_angle(std::arg(sigma.inverse(1.0)));
  const double s2 = sigma.is_one() ? kPi : normalize_angle(std::arg(sigma.inverse(-1.0)));
  const double d1 = p.offset_from(s1), d2 = p.offset_from(s2);
  if (d1 == 0.0 || d2 == 0.0) return 0.5;
  if (std::abs(d1) <= std::abs(d2)) return d1 > 0 ? 1.0 : 0.0;
  return d2 < 0 ? 1.0 : 0.0;
}

inline std::vector<double> strip_jumps(const DiscAutomorphism& sigma) {
  if (sigma.is_one()) return {0.0, kPi};
  return {normalize_angle(std::arg(sigma.inverse(1.0))), normalize_angle(std::arg(sigma.inverse(-1.0)))};
}

// g = (Re psi log(a)/p, (1 - Re psi) log(a)/q) with psi = m o sigma.
inline DensityFn gapq_strip_density(double a, double p, double q, const DiscAutomorphism& sigma) {
  if (!(a > 0 && a < 1) || !(p > 0) || !(q > 0)) throw InvalidArgument("gapq density: need 0 < a < 1, p, q > 0");
  const double l = std::log(a);
  json params{{"a", a}, {"p", p}, {"q", q}, {"sigma", sigma.to_json()}};
  return DensityFn(
      2, "gapq-strip", params,
      [=](const CirclePoint& pt) {
        const double r = strip_boundary_real(sigma, pt);
        Eigen::VectorXd g(2);
        g << r * l / p, (1 - r) * l / q;
        return g;
      },
      strip_jumps(sigma));
}

// base(l) - delta * trace/|trace|: pushes g off the face, toward the interior.
inline DensityFn normal_offset_density(const DensityFn& base, const HMap& h, double delta) {
  json params{{"base", base.descriptor()}, {"h", hmap_to_json(h)}, {"delta", delta}};
  std::vector<double> sing = base.singular_points();
  for (double r : all_circle_roots(h)) sing.push_back(r);
  return DensityFn(
      base.dim(), "normal-offset", params,
      [base, h, delta](const CirclePoint& p) {
        Eigen::VectorXd v = unit_scaled(h.trace(p));
        const double nv = v.norm();
        Eigen::VectorXd g = base(p);
        if (nv > 0) g -= delta * v / nv;
        return g;
      },
      sing);
}

// c0 + c1 cos(theta) + s1 sin(theta)
inline DensityFn trig_density(const Eigen::VectorXd& c0, const Eigen::VectorXd& c1, const Eigen::VectorXd& s1) {
  if (c0.size() != c1.size() || c0.size() != s1.size()) throw InvalidArgument("trig density: length mismatch");
  json params{{"const", jsonio::vector_to_json(c0)}, {"cos", jsonio::vector_to_json(c1)}, {"sin", jsonio::vector_to_json(s1)}};
  return DensityFn(static_cast<int>(c0.size()), "trig", params, [c0, c1, s1](const CirclePoint& p) {
    const double t = p.angle();
    return (c0 + std::cos(t) * c1 + std::sin(t) * s1).eval();
  });
}

// Rebuilds a density from its descriptor {"kind", "params", "singular_points"}.
// (g_1, ..., g_m) from one-dimensional densities.
inline DensityFn density_stack(const std::vector<DensityFn>& parts) {
  if (parts.empty()) throw InvalidArgument("density stack: no components");
  std::vector<double> sing;
  json comps = json::array();
  for (const auto& g : parts) {
    if (g.dim() != 1) throw InvalidArgument("density stack: components must be one-dimensional");
    sing.insert(sing.end(), g.singular_points().begin(), g.singular_points().end());
    comps.push_back(g.descriptor());
  }
  const int m = static_cast<int>(parts.size());
  return DensityFn(
      m, "stack", json{{"components", comps}},
      [parts, m](const CirclePoint& p) {
        Eigen::VectorXd out(m);
        for (int i = 0; i < m; ++i) out[i] = parts[static_cast<std::size_t>(i)](p)[0];
        return out;
      },
      sing);
}

inline DensityFn make_density(const json& desc, int n) {
  if (!desc.is_object() || !desc.contains("kind") || !desc.at("kind").is_string())
    throw InvalidArgument("density: expected {\"kind\": ..., \"params\": {...}}");
  const std::string kind = desc.at("kind").get<std::string>();
  const json params = desc.contains("params") ? desc.at("params") : json::object();
  const std::string where = "density(" + kind + ")";
  auto vec = [&](const char* k) { return jsonio::vector(jsonio::field(params, k, where), where + "." + k); };
  auto num = [&](const char* k) { return jsonio::number(jsonio::field(params, k, where), where + "." + k); };
  DensityFn g;
  if (kind == "zero") {
    g = DensityFn::zero(n);
  } else if (kind == "constant") {
    g = DensityFn::constant(vec("value"));
  } else if (kind == "trig") {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    g = trig_density(params.contains("const") ? vec("const") : z, params.contains("cos") ? vec("cos") : z,
                     params.contains("sin") ? vec("sin") : z);
  } else if (kind == "face-selection") {
    g = face_selection_density(make_domain(jsonio::field(params, "domain", where)),
                               hmap_from_json(jsonio::field(params, "h", where), where + ".h"),
                               selection_from_json(params.contains("selection") ? params.at("selection") : json()));
  } else if (kind == "quarter-circle-normal") {
    g = quarter_circle_normal_density(hmap_from_json(jsonio::field(params, "h", where), where + ".h"));
  } else if (kind == "hyperbola-ratio") {
    g = hyperbola_ratio_density(num("c"), jsonio::complex(jsonio::field(params, "lambda1", where), where),
                                jsonio::complex(jsonio::field(params, "lambda2", where), where));
  } else if (kind == "dprime-power") {
    g = dprime_power_density();
  } else if (kind == "half-parabola-ratio") {
    g = half_parabola_ratio_density(hmap_from_json(jsonio::field(params, "h", where), where + ".h"));
  } else if (kind == "gapq-strip") {
    g = gapq_strip_density(num("a"), num("p"), num("q"),
                           params.contains("sigma") ? DiscAutomorphism::from_json(params.at("sigma"), where + ".sigma")
                                                    : DiscAutomorphism::one());
  } else if (kind == "normal-offset") {
    DensityFn base = make_density(jsonio::field(params, "base", where), n);
    g = normal_offset_density(base, hmap_from_json(jsonio::field(params, "h", where), where + ".h"), num("delta"));
  } else if (kind == "sum") {
    const json& terms = jsonio::field(params, "terms", where);
    if (!terms.is_array() || terms.empty()) throw InvalidArgument(where + ".terms: expected a non-empty array");
    g = make_density(terms[0], n);
    for (std::size_t i = 1; i < terms.size(); ++i) g = density_sum(g, make_density(terms[i], n));
  } else if (kind == "stack") {
    const json& comps = jsonio::field(params, "components", where);
    if (!comps.is_array() || comps.empty()) throw InvalidArgument(where + ".components: expected a non-empty array");
    std::vector<DensityFn> parts;
    for (const auto& c : comps) parts.push_back(make_density(c, 1));
    g = density_stack(parts);
  } else if (kind == "linear-map") {
    Eigen::MatrixXd V = jsonio::matrix(jsonio::field(params, "matrix", where), where + ".matrix");
    g = density_mapped(make_density(jsonio::field(params, "base", where), static_cast<int>(V.cols())), V);
  } else {
    throw InvalidArgument("density: unknown kind '" + kind + "'");
  }
  if (g.dim() != n)
    throw InvalidArgument(where + ": density has dimension " + std::to_string(g.dim()) + ", expected " + std::to_string(n));
  if (desc.contains("singular_points")) {
    const json& sp = desc.at("singular_points");
    if (!sp.is_array()) throw InvalidArgument(where + ".singular_points: expected an array");
    for (const auto& s : sp) g.add_singular_point(jsonio::number(s, where + ".singular_points"));
  }
  return g;
}

}  // namespace tubegeo
