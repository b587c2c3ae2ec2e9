#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "circle.hpp"
#include "errors.hpp"
#include "json_util.hpp"

namespace tubegeo {

// h(lambda) = conj(a) lambda^2 + b lambda + a, componentwise, b real.
// On the circle conj(lambda) h(lambda) = b + 2 Re(conj(a) lambda) is real.
struct HMap {
  Eigen::VectorXcd a;
  Eigen::VectorXd b;

  HMap() = default;
  HMap(Eigen::VectorXcd a_, Eigen::VectorXd b_) : a(std::move(a_)), b(std::move(b_)) {
    if (a.size() != b.size()) throw InvalidArgument("h: a and b have different lengths");
  }
  static HMap zero(int n) { return HMap(Eigen::VectorXcd::Zero(n), Eigen::VectorXd::Zero(n)); }

  int dim() const { return static_cast<int>(b.size()); }

  std::complex<double> component(int j, std::complex<double> lam) const {
    return std::conj(a[j]) * lam * lam + b[j] * lam + a[j];
  }
  Eigen::VectorXcd operator()(std::complex<double> lam) const {
    Eigen::VectorXcd out(dim());
    for (int j = 0; j < dim(); ++j) out[j] = component(j, lam);
    return out;
  }

  bool component_zero(int j) const { return a[j] == 0.0 && b[j] == 0.0; }
  bool is_zero() const {
    for (int j = 0; j < dim(); ++j)
      if (!component_zero(j)) return false;
    return true;
  }

  // Real part of conj(lambda) h_j(lambda).
  double trace_component(int j, const CirclePoint& p) const;
  Eigen::VectorXd trace(const CirclePoint& p) const {
    Eigen::VectorXd out(dim());
    for (int j = 0; j < dim(); ++j) out[j] = trace_component(j, p);
    return out;
  }
  // |Im(conj(lambda) h(lambda))|, zero up to rounding.
  double trace_residual(const CirclePoint& p) const {
    const auto lam = p.value();
    double r = 0.0;
    for (int j = 0; j < dim(); ++j) r = std::max(r, std::abs((std::conj(lam) * component(j, lam)).imag()));
    return r;
  }

  HMap operator-() const { return HMap(-a, -b); }
  HMap operator+(const HMap& o) const { return HMap(a + o.a, b + o.b); }
  HMap operator*(double s) const { return HMap(s * a, s * b); }
  // Real-linear image h -> V h.
  HMap mapped(const Eigen::MatrixXd& V) const {
    Eigen::VectorXcd na = V.cast<std::complex<double>>() * a;
    return HMap(na, V * b);
  }
};

namespace detail {
inline constexpr double kRootSnap = 1e-10;

// Which circle double root a component has, if b = +-2|a|.
inline int double_root_sign(std::complex<double> a, double b) {
  const double ma = std::abs(a);
  if (ma == 0.0) return 0;
  const double scale = std::abs(b) + ma;
  if (std::abs(b - 2 * ma) <= kRootSnap * scale) return +1;
  if (std::abs(b + 2 * ma) <= kRootSnap * scale) return -1;
  return 0;
}
}  // namespace detail

inline double HMap::trace_component(int j, const CirclePoint& p) const {
  const std::complex<double> aj = a[j];
  const double bj = b[j];
  const double ma = std::abs(aj);
  if (ma == 0.0) return bj;
  const double phi = std::arg(aj);
  // A snapped double root is exact, so the trace vanishes there to full
  // relative precision instead of sitting at b - 2|a| = +-ulp.
  switch (detail::double_root_sign(aj, bj)) {
    case +1: {
      const double d = p.offset_from(normalize_angle(phi + kPi));
      const double s = std::sin(0.5 * d);
      return 4 * ma * s * s;
    }
    case -1: {
      const double d = p.offset_from(normalize_angle(phi));
      const double s = std::sin(0.5 * d);
      return -4 * ma * s * s;
    }
    default:
      return bj + 2 * ma * std::cos(p.offset_from(phi));
  }
}

// Angles where a component's trace vanishes on the circle.
inline std::vector<double> circle_roots(std::complex<double> a, double b) {
  const double ma = std::abs(a);
  if (ma == 0.0) return {};
  const double phi = std::arg(a);
  switch (detail::double_root_sign(a, b)) {
    case +1:
      return {normalize_angle(phi + kPi)};
    case -1:
      return {normalize_angle(phi)};
    default:
      break;
  }
  const double c = -b / (2 * ma);
  if (std::abs(c) > 1.0) return {};
  const double x = std::acos(c);
  std::vector<double> r{normalize_angle(phi + x), normalize_angle(phi - x)};
  if (r[1] < r[0]) std::swap(r[0], r[1]);
  return r;
}

inline std::vector<double> circle_roots(const HMap& h, int j) { return circle_roots(h.a[j], h.b[j]); }

// All circle roots of nonzero components, merged.
inline std::vector<double> all_circle_roots(const HMap& h) {
  std::vector<double> out;
  for (int j = 0; j < h.dim(); ++j)
    for (double r : circle_roots(h, j)) {
      bool seen = false;
      for (double s : out) seen = seen || std::abs(wrap_difference(r - s)) <= 1e-14;
      if (!seen) out.push_back(r);
    }
  return out;
}

inline bool is_hplus(std::complex<double> a, double b) {
  return b - 2 * std::abs(a) >= -1e-12 * std::max(1.0, std::abs(b));
}

inline bool is_hplus(const HMap& h, int grid = 1024) {
  for (int j = 0; j < h.dim(); ++j)
    if (!is_hplus(h.a[j], h.b[j])) return false;
  for (int k = 0; k < grid; ++k) {
    const CirclePoint p(kTwoPi * k / grid);
    for (int j = 0; j < h.dim(); ++j)
      if (h.trace_component(j, p) < -1e-12 * std::max(1.0, std::abs(h.b[j]))) return false;
  }
  return true;
}

// h = c (lambda - d)(1 - conj(d) lambda) with c >= 0, |d| <= 1.
struct HFactor {
  double c = 0.0;
  std::complex<double> d = 0.0;
};

inline void hfactor_to_ab(const HFactor& f, std::complex<double>& a, double& b) {
  a = -f.c * f.d;
  b = f.c * (1.0 + std::norm(f.d));
}

inline HMap from_factors(const std::vector<HFactor>& fs) {
  HMap h = HMap::zero(static_cast<int>(fs.size()));
  for (std::size_t j = 0; j < fs.size(); ++j) {
    std::complex<double> a;
    double b;
    hfactor_to_ab(fs[j], a, b);
    h.a[static_cast<Eigen::Index>(j)] = a;
    h.b[static_cast<Eigen::Index>(j)] = b;
  }
  return h;
}

// Inverse of from_factors for one H+ component; nullopt outside H+.
inline std::optional<HFactor> factorize(std::complex<double> a, double b) {
  if (!is_hplus(a, b)) return std::nullopt;
  const double ma = std::abs(a);
  if (ma == 0.0) return HFactor{b, 0.0};
  const double disc = std::sqrt(std::max(0.0, b * b - 4 * ma * ma));
  const double c = 0.5 * (b + disc);
  std::complex<double> d = -a / c;
  if (std::abs(std::abs(d) - 1.0) <= detail::kRootSnap) d /= std::abs(d);
  return HFactor{c, d};
}

// Orthonormal basis (rows) of the span of the given vectors.
inline Eigen::MatrixXd span_basis(const std::vector<Eigen::VectorXd>& vs, double tol = 1e-10) {
  std::vector<Eigen::VectorXd> basis;
  std::vector<Eigen::VectorXd> work = vs;
  double scale = 0.0;
  for (const auto& v : vs) scale = std::max(scale, v.norm());
  if (scale == 0.0) return Eigen::MatrixXd(0, vs.empty() ? 0 : vs.front().size());
  // Pivoted modified Gram-Schmidt: take the largest remaining residual each step.
  while (true) {
    int best = -1;
    double bn = tol * scale;
    for (std::size_t i = 0; i < work.size(); ++i) {
      const double n = work[i].norm();
      if (n > bn) {
        bn = n;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) break;
    Eigen::VectorXd q = work[static_cast<std::size_t>(best)] / bn;
    for (auto& w : work) w -= q.dot(w) * q;
    work[static_cast<std::size_t>(best)].setZero();
    basis.push_back(q);
  }
  Eigen::MatrixXd V(static_cast<Eigen::Index>(basis.size()), vs.front().size());
  for (std::size_t i = 0; i < basis.size(); ++i) V.row(static_cast<Eigen::Index>(i)) = basis[i].transpose();
  return V;
}

// Basis of X_h = span{Re a, Im a, b}.
inline Eigen::MatrixXd hspan_basis(const HMap& h, double tol = 1e-10) {
  return span_basis({h.a.real(), h.a.imag(), h.b}, tol);
}

// Rank of the matrix of coefficient rows (Re a_j, Im a_j, b_j).
inline int component_rank(const HMap& h, double tol = 1e-10) {
  std::vector<Eigen::VectorXd> rows;
  for (int j = 0; j < h.dim(); ++j) {
    Eigen::VectorXd r(3);
    r << h.a[j].real(), h.a[j].imag(), h.b[j];
    rows.push_back(r);
  }
  if (rows.empty()) return 0;
  return static_cast<int>(span_basis(rows, tol).rows());
}

inline json hmap_to_json(const HMap& h) {
  json out;
  out["a"] = jsonio::cvector_to_json(h.a);
  out["b"] = jsonio::vector_to_json(h.b);
  return out;
}

inline HMap hmap_from_json(const json& j, const std::string& where = "h") {
  if (j.is_object() && j.contains("factors")) {
    std::vector<HFactor> fs;
    const json& arr = j.at("factors");
    if (!arr.is_array()) throw InvalidArgument(where + ".factors: expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string w = where + ".factors[" + std::to_string(i) + "]";
      HFactor f;
      f.c = jsonio::number(jsonio::field(arr[i], "c", w), w + ".c");
      f.d = arr[i].contains("d") ? jsonio::complex(arr[i].at("d"), w + ".d") : 0.0;
      if (f.c < 0 || std::abs(f.d) > 1.0 + 1e-12)
        throw InvalidArgument(w + ": factor needs c >= 0 and |d| <= 1");
      fs.push_back(f);
    }
    HMap h = from_factors(fs);
    if (j.contains("sign")) {
      // Optional per-component sign, to describe -H+ components.
      Eigen::VectorXd s = jsonio::vector(j.at("sign"), where + ".sign");
      if (s.size() != h.dim()) throw InvalidArgument(where + ".sign: wrong length");
      for (int k = 0; k < h.dim(); ++k) {
        h.a[k] *= s[k];
        h.b[k] *= s[k];
      }
    }
    return h;
  }
  Eigen::VectorXcd a = jsonio::cvector(jsonio::field(j, "a", where), where + ".a");
  Eigen::VectorXd b = jsonio::vector(jsonio::field(j, "b", where), where + ".b");
  if (a.size() != b.size()) throw InvalidArgument(where + ": a and b have different lengths");
  return HMap(a, b);
}

}  // namespace tubegeo
