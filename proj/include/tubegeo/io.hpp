#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "densities.hpp"
#include "errors.hpp"
#include "geodesics.hpp"
#include "json_util.hpp"
#include "measures.hpp"
#include "reinhardt.hpp"

namespace tubegeo {

// Parse with diagnostics in line:column form.
inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t pos = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    const auto cut = what.find("parse error");
    if (cut != std::string::npos) what = what.substr(cut);
    throw InvalidArgument(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" +
                          what + ")");
  }
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

// A file path, or inline JSON when the argument starts with { or [.
inline json load_json_arg(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return parse_json_text(arg, "<inline>");
  return load_json_file(arg);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument(path + ": cannot write file");
  out << text;
}

inline json atoms_to_json(const AtomList& atoms) {
  json out = json::array();
  for (const auto& a : atoms)
    out.push_back(json{{"angle", a.location.angle()}, {"weight", jsonio::vector_to_json(a.weight)}});
  return out;
}

inline AtomList atoms_from_json(const json& j, int n, const std::string& where = "atoms") {
  if (!j.is_array()) throw InvalidArgument(where + ": expected an array of {\"angle\", \"weight\"}");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    const double angle = jsonio::number(jsonio::field(j[i], "angle", w), w + ".angle");
    Eigen::VectorXd weight = jsonio::vector(jsonio::field(j[i], "weight", w), w + ".weight");
    if (weight.size() != n)
      throw InvalidArgument(w + ".weight: expected " + std::to_string(n) + " entries, got " +
                            std::to_string(weight.size()));
    atoms.push_back({CirclePoint(angle), weight});
  }
  return AtomList::merged(std::move(atoms));
}

inline json measure_to_json(const BoundaryMeasureTuple& mu) {
  return json{{"n", mu.dim()}, {"ac", mu.ac.descriptor()}, {"atoms", atoms_to_json(mu.atoms)}};
}

inline BoundaryMeasureTuple measure_from_json(const json& j, const std::string& where = "measure") {
  if (!j.is_object()) throw InvalidArgument(where + ": expected an object");
  const double nn = jsonio::number(jsonio::field(j, "n", where), where + ".n");
  if (!(nn >= 1) || nn != std::floor(nn)) throw InvalidArgument(where + ".n: expected a positive integer");
  const int n = static_cast<int>(nn);
  DensityFn g = j.contains("ac") ? make_density(j.at("ac"), n) : DensityFn::zero(n);
  AtomList atoms = j.contains("atoms") ? atoms_from_json(j.at("atoms"), n, where + ".atoms") : AtomList();
  return BoundaryMeasureTuple(g, atoms);
}

inline json decomposition_to_json(const SphericalDecomposition& d) {
  json nu = json::array();
  for (const auto& a : d.nu)
    nu.push_back(json{{"angle", a.location.angle()}, {"weight", a.weight}, {"rho", jsonio::vector_to_json(a.rho)}});
  return json{{"g", d.g.descriptor()}, {"nu", nu}};
}

inline json candidate_to_json(const GeodesicCandidate& c) {
  return json{{"type", "geodesic"},
              {"domain", c.domain.descriptor()},
              {"h", hmap_to_json(c.h)},
              {"mu", measure_to_json(c.mu)},
              {"im0", jsonio::vector_to_json(c.im0)}};
}

inline GeodesicCandidate candidate_from_json(const json& j, const std::string& where = "candidate") {
  if (!j.is_object()) throw InvalidArgument(where + ": expected an object");
  if (j.contains("type") && j.at("type") != "geodesic")
    throw InvalidArgument(where + ": expected a geodesic candidate, got type " + j.at("type").dump());
  TubeDomain D = make_domain(jsonio::field(j, "domain", where));
  HMap h = hmap_from_json(jsonio::field(j, "h", where), where + ".h");
  BoundaryMeasureTuple mu = measure_from_json(jsonio::field(j, "mu", where), where + ".mu");
  Eigen::VectorXd im0 = j.contains("im0") ? jsonio::vector(j.at("im0"), where + ".im0") : Eigen::VectorXd();
  return GeodesicCandidate(mu, h, D, im0);
}

inline json condition_to_json(const ConditionRecord& c) {
  return json{{"id", c.id},
              {"status", to_string(c.status)},
              {"residual", jsonio::number_to_json(c.residual)},
              {"witness", c.witness},
              {"note", c.note}};
}

inline json report_to_json(const VerificationReport& r) {
  json conds = json::array();
  for (const auto& c : r.conditions) conds.push_back(condition_to_json(c));
  json failed = json::array();
  for (const auto& f : r.failed_primary()) failed.push_back(f);
  return json{{"conditions", conds},
              {"overall", to_string(r.overall)},
              {"mass", jsonio::vector_to_json(r.mass)},
              {"failed", failed}};
}

inline json options_to_json(const VerifyOptions& o) {
  return json{{"grid", o.grid},
              {"z_samples", o.z_samples},
              {"tol_face", o.tol_face},
              {"tol_sign", o.tol_sign},
              {"seed", o.seed},
              {"threads", o.threads},
              {"singular_gap", o.singular_gap},
              {"mass_margin", o.mass_margin},
              {"quad_rel_tol", o.quad.rel_tol},
              {"quad_abs_tol", o.quad.abs_tol}};
}

inline json extremal_to_json(const ExtremalCandidate& c) {
  json kinds = json::array(), B = json::array();
  for (auto k : c.kinds) kinds.push_back(to_string(k));
  for (const auto& b : c.B) B.push_back(b.to_json());
  json out{{"type", "extremal"}, {"G", c.G.descriptor()}, {"kinds", kinds}, {"B", B}};
  if (c.exp_count() > 0)
    out["phi"] = json{{"mu", measure_to_json(c.phi.measure())}, {"im0", jsonio::vector_to_json(c.phi.im0())}};
  if (c.h) out["h"] = hmap_to_json(*c.h);
  out["flags"] = c.flags;
  return out;
}

inline ExtremalCandidate extremal_from_json(const json& j, const QuadratureOptions& quad = {},
                                            const std::string& where = "candidate") {
  if (!j.is_object()) throw InvalidArgument(where + ": expected an object");
  if (j.contains("type") && j.at("type") != "extremal")
    throw InvalidArgument(where + ": expected an extremal candidate, got type " + j.at("type").dump());
  ExtremalCandidate c;
  c.G = reinhardt_from_json(jsonio::field(j, "G", where));
  const json& kinds = jsonio::field(j, "kinds", where);
  const json& B = jsonio::field(j, "B", where);
  if (!kinds.is_array() || !B.is_array()) throw InvalidArgument(where + ": kinds and B must be arrays");
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    const std::string k = kinds[i].is_string() ? kinds[i].get<std::string>() : "";
    if (k == "zero") c.kinds.push_back(CoordKind::zero);
    else if (k == "exp") c.kinds.push_back(CoordKind::exp);
    else if (k == "aut") c.kinds.push_back(CoordKind::aut);
    else throw InvalidArgument(where + ".kinds[" + std::to_string(i) + "]: expected zero, exp or aut");
  }
  for (std::size_t i = 0; i < B.size(); ++i)
    c.B.push_back(DiscAutomorphism::from_json(B[i], where + ".B[" + std::to_string(i) + "]"));
  if (j.contains("phi")) {
    const json& ph = j.at("phi");
    BoundaryMeasureTuple mu = measure_from_json(jsonio::field(ph, "mu", where + ".phi"), where + ".phi.mu");
    Eigen::VectorXd im0 = ph.contains("im0") ? jsonio::vector(ph.at("im0"), where + ".phi.im0") : Eigen::VectorXd();
    c.phi = HolomorphicFromMeasure(mu, im0, quad);
  }
  if (j.contains("h")) c.h = hmap_from_json(j.at("h"), where + ".h");
  if (j.contains("flags") && j.at("flags").is_array())
    for (const auto& f : j.at("flags")) c.flags.push_back(f.get<std::string>());
  for (std::size_t i = 0; i < c.kinds.size(); ++i)
    if (c.kinds[i] == CoordKind::aut && c.B[i].is_one())
      throw InvalidArgument(where + ": aut coordinates need an automorphism, not 1");
  reinhardt_detail::validate(c);
  if (c.h) (void)c.geodesic();
  return c;
}

inline json verdict_to_json(const Verdict& v) {
  json out{{"branch", to_string(v.cls.branch)},
           {"strict_branch_refused", v.cls.strict_refused},
           {"degenerate", v.degenerate},
           {"boundary_contact",
            {{"residual", v.contact.residual}, {"checked", v.contact.checked}, {"pass", v.contact.pass}}},
           {"necessary_conditions_passed", v.necessary_conditions},
           {"flags", v.flags}};
  if (!v.cls.note.empty()) out["note"] = v.cls.note;
  if (v.tube) out["tube_geodesic"] = report_to_json(*v.tube);
  return out;
}

}  // namespace tubegeo
