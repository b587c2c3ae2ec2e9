#pragma once

#include <cmath>
#include <complex>

#include "errors.hpp"
#include "json_util.hpp"

namespace tubegeo {

// Either B = 1, or B(lambda) = eta (lambda - d) / (1 - conj(d) lambda) with
// |eta| = 1 and |d| < 1.
class DiscAutomorphism {
 public:
  using C = std::complex<double>;

  DiscAutomorphism() = default;
  static DiscAutomorphism one() { return {}; }
  static DiscAutomorphism mobius(C eta, C d) {
    if (std::abs(std::abs(eta) - 1.0) > 1e-12) throw InvalidArgument("automorphism: |eta| must be 1");
    if (!(std::abs(d) < 1.0)) throw InvalidArgument("automorphism: |d| must be < 1");
    DiscAutomorphism b;
    b.trivial_ = false;
    b.eta_ = eta / std::abs(eta);
    b.d_ = d;
    return b;
  }

  bool is_one() const { return trivial_; }
  C eta() const { return eta_; }
  C d() const { return d_; }

  C operator()(C lam) const {
    if (trivial_) return 1.0;
    return eta_ * (lam - d_) / (1.0 - std::conj(d_) * lam);
  }
  C derivative(C lam) const {
    if (trivial_) return 0.0;
    const C den = 1.0 - std::conj(d_) * lam;
    return eta_ * (1.0 - std::norm(d_)) / (den * den);
  }
  // Solves B(lambda) = w; the identity map must not be trivial.
  C inverse(C w) const {
    if (trivial_) throw InvalidArgument("automorphism: the constant 1 has no inverse");
    const C u = w / eta_;
    return (u + d_) / (1.0 + std::conj(d_) * u);
  }

  json to_json() const {
    if (trivial_) return json("one");
    return json{{"eta", jsonio::complex_to_json(eta_)}, {"d", jsonio::complex_to_json(d_)}};
  }
  static DiscAutomorphism from_json(const json& j, const std::string& where) {
    if (j.is_string() && (j.get<std::string>() == "one" || j.get<std::string>() == "1")) return one();
    if (j.is_number() && j.get<double>() == 1.0) return one();
    if (!j.is_object()) throw InvalidArgument(where + ": expected \"one\" or {\"eta\", \"d\"}");
    const C eta = j.contains("eta") ? jsonio::complex(j.at("eta"), where + ".eta") : C(1.0);
    const C d = j.contains("d") ? jsonio::complex(j.at("d"), where + ".d") : C(0.0);
    return mobius(eta, d);
  }

 private:
  bool trivial_ = true;
  C eta_ = 1.0;
  C d_ = 0.0;
};

inline double poincare_distance(std::complex<double> s1, std::complex<double> s2) {
  if (!(std::abs(s1) < 1.0) || !(std::abs(s2) < 1.0))
    throw DomainError("poincare distance: arguments must lie in the open unit disc");
  const double r = std::abs(s1 - s2) / std::abs(1.0 - std::conj(s2) * s1);
  return std::atanh(r);
}

}  // namespace tubegeo
