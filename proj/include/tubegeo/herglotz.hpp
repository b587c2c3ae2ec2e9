#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "measures.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

namespace tubegeo {

inline constexpr double kDiscGuard = 1e-9;

// phi(l) = (1/2pi) int (z + l)/(z - l) dmu(z) + i im0
class HolomorphicFromMeasure {
 public:
  using C = std::complex<double>;

  HolomorphicFromMeasure() = default;
  HolomorphicFromMeasure(BoundaryMeasureTuple mu, Eigen::VectorXd im0, QuadratureOptions q = {})
      : mu_(std::move(mu)), im0_(std::move(im0)), quad_(q) {
    if (im0_.size() == 0) im0_ = Eigen::VectorXd::Zero(mu_.dim());
    if (im0_.size() != mu_.dim()) throw InvalidArgument("holomorphic map: im0 has the wrong length");
  }
  explicit HolomorphicFromMeasure(BoundaryMeasureTuple mu)
      : HolomorphicFromMeasure(mu, Eigen::VectorXd::Zero(mu.dim())) {}

  const BoundaryMeasureTuple& measure() const { return mu_; }
  const Eigen::VectorXd& im0() const { return im0_; }
  int dim() const { return mu_.dim(); }

  Eigen::VectorXcd operator()(C lam) const { return eval(lam); }

  Eigen::VectorXcd eval(C lam) const {
    guard(lam);
    Eigen::VectorXcd out = kernel_integral(lam, [rho = std::abs(lam)](C w, C d, C) { return (w + rho) / d; });
    out += C(0, 1) * im0_.cast<C>();
    return out;
  }

  // phi'(l) = (1/2pi) int 2z/(z - l)^2 dmu(z)
  Eigen::VectorXcd derivative(C lam) const {
    guard(lam);
    return kernel_integral(lam, [](C w, C d, C rot) { return 2.0 * w * std::conj(rot) / (d * d); });
  }

  Eigen::VectorXd radial_real_limit(const CirclePoint& p) const {
    for (const auto& a : mu_.atoms)
      if (a.location.coincides(p))
        throw InvalidArgument("radial limit: the point is an atom of the measure");
    if (mu_.ac.near_singular(p.angle(), 1e-12))
      throw InvalidArgument("radial limit: the point is a declared singular point of the density");
    return mu_.ac(p);
  }

  // |Re phi(r p) - g(p)|_inf for each radius.
  std::vector<double> radial_convergence(const CirclePoint& p, const std::vector<double>& radii) const {
    const Eigen::VectorXd g = radial_real_limit(p);
    std::vector<double> out;
    for (double r : radii) out.push_back((eval(r * p.value()).real() - g).cwiseAbs().maxCoeff());
    return out;
  }

  std::vector<Eigen::VectorXcd> eval_many(const std::vector<C>& pts, int threads = 1) const {
    std::vector<Eigen::VectorXcd> out(pts.size());
    parallel_for(static_cast<int>(pts.size()), threads,
                 [&](int i) { out[static_cast<std::size_t>(i)] = eval(pts[static_cast<std::size_t>(i)]); });
    return out;
  }

 private:
  static void guard(C lam) {
    if (!(std::abs(lam) <= 1.0 - kDiscGuard))
      throw DomainError("evaluation point too close to the unit circle (|lambda| must be <= 1 - 1e-9)");
  }

  // With l = rho e^{ia} and z = e^{i(a+u)}, the kernels only need w = e^{iu}
  // and d = e^{iu} - rho = 2i sin(u/2) e^{iu/2} + (1 - rho), which keeps full
  // relative precision next to the peak at u = 0.
  template <class K>
  Eigen::VectorXcd kernel_integral(C lam, K&& kernel) const {
    const int n = mu_.dim();
    const double rho = std::abs(lam);
    const double alpha = rho > 0.0 ? normalize_angle(std::arg(lam)) : 0.0;
    const C rot = std::polar(1.0, alpha);
    auto at = [&](const CirclePoint& p) {
      const double u = p.offset_from(alpha);
      const C w = std::polar(1.0, u);
      const C d = C(0, 2.0 * std::sin(0.5 * u)) * std::polar(1.0, 0.5 * u) + (1.0 - rho);
      return kernel(w, d, rot);
    };
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
    std::vector<double> breaks;
    if (rho > 0.0) breaks.push_back(alpha);
    if (mu_.ac.kind() != "zero") {
      auto r = integrate_circle(
          [&](const CirclePoint& p) -> Eigen::VectorXcd {
            const Eigen::VectorXd gv = mu_.ac(p);
            return (at(p) * gv.template cast<C>()).eval();
          },
          mu_.ac.singular_points(), breaks, Eigen::VectorXcd::Zero(n).eval(), quad_);
      out += r.value / kTwoPi;
    }
    for (const auto& a : mu_.atoms) out += at(a.location) / kTwoPi * a.weight.cast<C>();
    return out;
  }

  BoundaryMeasureTuple mu_;
  Eigen::VectorXd im0_;
  QuadratureOptions quad_;
};

}  // namespace tubegeo
