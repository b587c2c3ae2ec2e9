#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "errors.hpp"

namespace tubegeo {

using json = nlohmann::json;

namespace jsonio {

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw InvalidArgument(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline double number(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "Infinity") return std::numeric_limits<double>::infinity();
    if (s == "-inf" || s == "-Infinity") return -std::numeric_limits<double>::infinity();
  }
  throw InvalidArgument(where + ": expected a number");
}

inline json number_to_json(double x) {
  if (std::isinf(x)) return x > 0 ? json("inf") : json("-inf");
  if (std::isnan(x)) return json(nullptr);
  return json(x);
}

inline std::complex<double> complex(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object() && j.contains("re"))
    return {number(j.at("re"), where), j.contains("im") ? number(j.at("im"), where) : 0.0};
  throw InvalidArgument(where + ": expected a complex number [re, im]");
}

inline json complex_to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

inline Eigen::VectorXd vector(const json& j, const std::string& where) {
  if (!j.is_array()) throw InvalidArgument(where + ": expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = number(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

inline json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_to_json(v[i]));
  return out;
}

inline Eigen::VectorXcd cvector(const json& j, const std::string& where) {
  if (!j.is_array()) throw InvalidArgument(where + ": expected an array of complex numbers");
  Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = complex(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

inline json cvector_to_json(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v[i]));
  return out;
}

inline Eigen::MatrixXd matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw InvalidArgument(where + ": expected a matrix as an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    Eigen::VectorXd row = vector(j[static_cast<std::size_t>(r)], where);
    if (row.size() != cols) throw InvalidArgument(where + ": ragged matrix");
    m.row(r) = row.transpose();
  }
  return m;
}

inline json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_to_json(m.row(r).transpose()));
  return out;
}

}  // namespace jsonio
}  // namespace tubegeo
