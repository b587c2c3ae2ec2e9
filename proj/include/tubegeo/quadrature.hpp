#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <type_traits>
#include <vector>

#include "circle.hpp"
#include "errors.hpp"

namespace tubegeo {

struct QuadratureOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  int max_intervals = 6000;
  int max_split_depth = 48;
  // Smallest offset from a singular point at which the integrand is sampled.
  double min_offset = 1e-120;
};

namespace detail {

template <class T>
double qnorm(const T& v) {
  if constexpr (std::is_arithmetic_v<T>) {
    return std::abs(v);
  } else if constexpr (requires { v.real(); v.imag(); } && !requires { v.size(); }) {
    return std::abs(v);
  } else {
    if (v.size() == 0) return 0.0;
    return v.cwiseAbs().maxCoeff();
  }
}

template <class T>
bool qfinite(const T& v) {
  if constexpr (std::is_arithmetic_v<T>) {
    return std::isfinite(v);
  } else if constexpr (requires { v.real(); v.imag(); } && !requires { v.size(); }) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  } else {
    return v.allFinite();
  }
}

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Segment {
  double a, b;
  T value;
  double err;
  double absval;
};

template <class T, class G>
Segment<T> gk15(G& g, double a, double b, const T& zero) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T kron = zero;
  T gauss = zero;
  double absval = 0.0;
  auto add = [&](double x, int i) {
    T fx = g(x);
    if (!qfinite(fx)) {
      std::ostringstream os;
      os << "non-finite integrand at parameter " << x;
      throw QuadratureError(os.str());
    }
    kron += kWgk[i] * fx;
    absval += kWgk[i] * qnorm(fx);
    if (i % 2 == 1) gauss += kWg[i / 2] * fx;
  };
  add(c, 7);
  for (int i = 0; i < 7; ++i) {
    add(c - h * kXgk[i], i);
    add(c + h * kXgk[i], i);
  }
  kron *= h;
  gauss *= h;
  absval *= std::abs(h);
  T diff = kron - gauss;
  return Segment<T>{a, b, kron, qnorm(diff), absval};
}

}  // namespace detail

template <class T>
struct QuadResult {
  T value;
  double error = 0.0;
  double absval = 0.0;
};

// Globally adaptive Gauss-Kronrod (7/15) on [a, b].
template <class T, class G>
QuadResult<T> integrate_gk(G&& g, double a, double b, const T& zero,
                           const QuadratureOptions& opt = {}) {
  using Seg = detail::Segment<T>;
  if (!(b > a)) return QuadResult<T>{zero, 0.0, 0.0};
  auto cmp = [](const Seg& x, const Seg& y) { return x.err < y.err; };
  std::priority_queue<Seg, std::vector<Seg>, decltype(cmp)> heap(cmp);
  std::vector<Seg> done;
  Seg first = detail::gk15(g, a, b, zero);
  double err = first.err, absval = first.absval;
  heap.push(std::move(first));
  int count = 1;
  while (err > std::max(opt.abs_tol, opt.rel_tol * absval)) {
    Seg s = heap.top();
    heap.pop();
    const double m = 0.5 * (s.a + s.b);
    if (!(m > s.a && m < s.b) || s.b - s.a < 1e-15 * std::max(1.0, std::abs(s.a))) {
      // Cannot refine further; keep it and give up if this is the worst one.
      if (heap.empty() || s.err >= heap.top().err) {
        std::ostringstream os;
        os << "quadrature stalled on [" << s.a << ", " << s.b << "], error " << err;
        throw QuadratureError(os.str());
      }
      done.push_back(std::move(s));
      continue;
    }
    Seg l = detail::gk15(g, s.a, m, zero);
    Seg r = detail::gk15(g, m, s.b, zero);
    err += l.err + r.err - s.err;
    absval += l.absval + r.absval - s.absval;
    heap.push(std::move(l));
    heap.push(std::move(r));
    if (++count > opt.max_intervals) {
      std::ostringstream os;
      os << "quadrature exceeded " << opt.max_intervals << " subintervals, error " << err;
      throw QuadratureError(os.str());
    }
    if (count % 64 == 0) {
      // Refresh running sums to stop drift.
      err = 0.0;
      absval = 0.0;
      auto copy = heap;
      while (!copy.empty()) {
        err += copy.top().err;
        absval += copy.top().absval;
        copy.pop();
      }
      for (const auto& d : done) {
        err += d.err;
        absval += d.absval;
      }
    }
  }
  QuadResult<T> out{zero, 0.0, 0.0};
  while (!heap.empty()) {
    out.value += heap.top().value;
    out.error += heap.top().err;
    out.absval += heap.top().absval;
    heap.pop();
  }
  for (const auto& d : done) {
    out.value += d.value;
    out.error += d.err;
    out.absval += d.absval;
  }
  return out;
}

namespace detail {

// One-sided tanh-sinh on (0, L), where u = 0 may be singular.  Returns false
// if the level sums did not settle.
template <class T, class G>
bool tanh_sinh(G& g, double L, const T& zero, const QuadratureOptions& opt,
               QuadResult<T>& out) {
  const double lmin = std::max(opt.min_offset, 1e-300);
  // Truncate where the node is closer to 0 than the minimum offset.
  const double smax = 0.5 * std::log(L / lmin);
  const double tmax = std::asinh(2.0 * smax / kPi);
  auto term = [&](double t, T& acc, double& absacc) {
    const double s = 0.5 * kPi * std::sinh(t);
    const double e = std::exp(-2.0 * std::abs(s));
    const double u = t >= 0 ? L / (1.0 + e) : L * e / (1.0 + e);
    const double w = 0.5 * L * (4.0 * e / ((1.0 + e) * (1.0 + e))) * 0.5 * kPi * std::cosh(t);
    if (!(u > 0.0) || !(u < L) || w == 0.0) return;
    T v = g(u);
    if (!qfinite(v)) {
      std::ostringstream os;
      os << "non-finite integrand at offset " << u;
      throw QuadratureError(os.str());
    }
    acc += w * v;
    absacc += w * qnorm(v);
  };
  double h = 1.0;
  T sum = zero;
  double abssum = 0.0;
  term(0.0, sum, abssum);
  for (int j = 1; j * h <= tmax; ++j) {
    term(j * h, sum, abssum);
    term(-j * h, sum, abssum);
  }
  T prev = h * sum;
  for (int level = 1; level <= 8; ++level) {
    h *= 0.5;
    for (int j = 1; j * h <= tmax; j += 2) {
      term(j * h, sum, abssum);
      term(-j * h, sum, abssum);
    }
    T cur = h * sum;
    const double diff = qnorm(T(cur - prev));
    const double absval = h * abssum;
    if (level >= 3 && diff <= std::max(opt.abs_tol, opt.rel_tol * absval)) {
      out.value = cur;
      out.error = diff;
      out.absval = absval;
      return true;
    }
    prev = cur;
  }
  return false;
}

// Integral over offsets (0, L) from a singular point; splits toward the
// singular end when tanh-sinh does not settle.
template <class T, class G>
QuadResult<T> singular_end(G& g, double L, const T& zero, const QuadratureOptions& opt,
                           int depth) {
  QuadResult<T> r{zero, 0.0, 0.0};
  if (tanh_sinh(g, L, zero, opt, r)) return r;
  if (depth >= opt.max_split_depth) {
    std::ostringstream os;
    os << "tanh-sinh did not converge near a singular point (arc length " << L << ")";
    throw QuadratureError(os.str());
  }
  const double cut = L / 16.0;
  QuadResult<T> inner = singular_end(g, cut, zero, opt, depth + 1);
  QuadResult<T> outer = integrate_gk(g, cut, L, zero, opt);
  return QuadResult<T>{T(inner.value + outer.value), inner.error + outer.error,
                       inner.absval + outer.absval};
}

}  // namespace detail

// Integral over theta in [0, 2pi) of f(e^{i theta}).  `singular` lists angles
// where f may be unbounded or discontinuous; `breaks` lists additional cut
// points such as kernel peaks.  f receives CirclePoints anchored at the
// nearest cut, so offsets from singular angles are exact.
template <class T, class F>
QuadResult<T> integrate_circle(F&& f, const std::vector<double>& singular,
                               const std::vector<double>& breaks, const T& zero,
                               const QuadratureOptions& opt = {}) {
  struct Cut {
    double angle;
    bool singular;
  };
  std::vector<Cut> cuts;
  for (double s : singular) cuts.push_back({normalize_angle(s), true});
  for (double b : breaks) cuts.push_back({normalize_angle(b), false});
  if (cuts.empty()) cuts.push_back({0.0, false});
  std::sort(cuts.begin(), cuts.end(), [](const Cut& x, const Cut& y) {
    if (x.angle != y.angle) return x.angle < y.angle;
    return x.singular > y.singular;
  });
  std::vector<Cut> merged;
  for (const Cut& c : cuts) {
    if (!merged.empty() && c.angle - merged.back().angle <= 1e-14) {
      if (c.singular && !merged.back().singular) merged.back() = c;
      continue;
    }
    merged.push_back(c);
  }
  if (merged.size() > 1 && merged.front().angle + kTwoPi - merged.back().angle <= 1e-14) {
    if (merged.back().singular && !merged.front().singular) merged.front() = merged.back();
    merged.pop_back();
  }

  QuadResult<T> total{zero, 0.0, 0.0};
  auto accumulate = [&](const QuadResult<T>& r) {
    total.value += r.value;
    total.error += r.error;
    total.absval += r.absval;
  };
  const std::size_t m = merged.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Cut& left = merged[i];
    const Cut& right = merged[(i + 1) % m];
    double L = right.angle - left.angle;
    if (i + 1 == m) L += kTwoPi;
    if (!(L > 0)) continue;
    auto from_left = [&](double u) { return f(CirclePoint::near(left.angle, u)); };
    auto from_right = [&](double u) { return f(CirclePoint::near(right.angle, -u)); };
    double lo = 0.0, hi = L;
    const double share = (left.singular && right.singular) ? 0.5 : 1.0;
    const double width = std::min(share * L, 0.25);
    if (left.singular) {
      accumulate(detail::singular_end(from_left, width, zero, opt, 0));
      lo = width;
    }
    if (right.singular) {
      accumulate(detail::singular_end(from_right, width, zero, opt, 0));
      hi = L - width;
    }
    // Each half is parameterized from its nearer cut.
    if (hi > lo) {
      const double mid = 0.5 * (lo + hi);
      accumulate(integrate_gk(from_left, lo, mid, zero, opt));
      accumulate(integrate_gk(from_right, L - hi, L - mid, zero, opt));
    }
  }
  return total;
}

}  // namespace tubegeo
