#pragma once

#include <algorithm>
#include <complex>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "geodesics.hpp"
#include "io.hpp"
#include "reinhardt.hpp"

namespace tubegeo {

struct RunConfig {
  int grid = 1024;
  int z_samples = 100;
  double tol_face = 1e-7;
  double tol_sign = 1e-9;
  std::uint64_t seed = 12345;
  int threads = std::max(1u, std::thread::hardware_concurrency());
  std::string out;
  std::string csv;
  std::string report;

  VerifyOptions verify_options() const {
    VerifyOptions o;
    o.grid = grid;
    o.z_samples = z_samples;
    o.tol_face = tol_face;
    o.tol_sign = tol_sign;
    o.seed = seed;
    o.threads = threads;
    return o;
  }
  json to_json() const {
    json j = options_to_json(verify_options());
    j["out"] = out;
    j["csv"] = csv;
    j["report"] = report;
    return j;
  }
};

namespace cli_detail {

// "0.3+0.1i", "-2i", "i", "0.5", "[0.3, 0.1]".
inline std::complex<double> parse_complex(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
          s.end());
  if (s.empty()) throw InvalidArgument("complex number: empty string");
  if (s.front() == '[') return jsonio::complex(parse_json_text(s, "<complex>"), "complex");
  auto num = [&](const std::string& t, bool imag) -> double {
    if (imag && (t.empty() || t == "+")) return 1.0;
    if (imag && t == "-") return -1.0;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size() || t.empty()) throw InvalidArgument("complex number: cannot parse '" + s + "'");
    return v;
  };
  if (s.back() != 'i' && s.back() != 'j') return {num(s, false), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not part of an exponent.
  std::size_t cut = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;)
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      cut = k;
      break;
    }
  if (cut == std::string::npos) return {0.0, num(body, true)};
  return {num(body.substr(0, cut), false), num(body.substr(cut), true)};
}

// "one", "identity", or comma-separated d=<complex>, eta=<complex>, angle=<real>.
inline DiscAutomorphism parse_automorphism(const std::string& s, bool allow_one = true) {
  if (s == "one" || s == "1" || s == "identity" || s.empty()) {
    if (!allow_one) throw InvalidArgument("automorphism: a Mobius map is required here");
    return DiscAutomorphism::one();
  }
  std::complex<double> d = 0.0, eta = 1.0;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidArgument("automorphism: expected key=value in '" + item + "'");
    const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    if (key == "d") d = parse_complex(val);
    else if (key == "eta") eta = parse_complex(val);
    else if (key == "angle") eta = std::polar(1.0, parse_complex(val).real());
    else throw InvalidArgument("automorphism: unknown key '" + key + "'");
  }
  return DiscAutomorphism::mobius(eta, d);
}

inline void emit(const json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) out << text;
  else write_text_file(path, text);
}

inline void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--grid", cfg.grid, "circle grid size")->check(CLI::PositiveNumber);
  sub->add_option("--z-samples", cfg.z_samples, "sampled base points for the direct check")->check(CLI::NonNegativeNumber);
  sub->add_option("--tol-face", cfg.tol_face, "face distance tolerance");
  sub->add_option("--tol-sign", cfg.tol_sign, "sign tolerance");
  sub->add_option("--seed", cfg.seed, "random seed");
  sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--out", cfg.out, "output file (default: stdout)");
  sub->add_option("--csv", cfg.csv, "CSV output file");
  sub->add_option("--report", cfg.report, "report file (default: --out, then stdout)");
}

inline std::string report_path(const RunConfig& cfg) { return cfg.report.empty() ? cfg.out : cfg.report; }

struct Grid {
  int angles = 0, radii = 0;
};

// polar:AxR, A angles by R radii at r = (k + 1/2) / R.
inline Grid parse_lambda_grid(const std::string& s) {
  const std::string pre = "polar:";
  if (s.rfind(pre, 0) != 0) throw InvalidArgument("--lambda-grid: expected polar:AxR");
  const std::string body = s.substr(pre.size());
  const auto x = body.find('x');
  if (x == std::string::npos) throw InvalidArgument("--lambda-grid: expected polar:AxR");
  Grid g;
  try {
    g.angles = std::stoi(body.substr(0, x));
    g.radii = std::stoi(body.substr(x + 1));
  } catch (const std::exception&) {
    throw InvalidArgument("--lambda-grid: expected integers in polar:AxR");
  }
  if (g.angles < 1 || g.radii < 1) throw InvalidArgument("--lambda-grid: sizes must be positive");
  return g;
}

inline std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace cli_detail

// Exit codes: 0 success, 1 verification failure, 2 input error.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using namespace cli_detail;
  CLI::App app{"Complex geodesics of convex tube domains and Reinhardt lifts", "tubegeo"};
  // --h names the h map, so help is long-form only.
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  RunConfig cfg;

  std::string input, domain_arg, h_arg, atoms_arg, atom_arg, selection_arg, im0_arg, lambda_grid = "polar:64x32";
  bool reduce_verify = false;

  auto* dec = app.add_subcommand("decompose", "spherical decomposition of a measure");
  dec->add_option("measure", input, "measure JSON")->required();
  auto* con = app.add_subcommand("construct", "candidate from faces of P_D(trace h) and given atoms");
  auto* cdn = app.add_subcommand("construct-dn", "candidate for a base in the family D_n");
  auto* chp = app.add_subcommand("construct-halfplane", "candidate for a two-dimensional base with half-plane W_D");
  for (auto* s : {con, cdn, chp}) {
    s->add_option("--domain", domain_arg, "domain JSON")->required();
    s->add_option("--h", h_arg, "h JSON")->required();
    s->add_option("--selection", selection_arg, "face point selection JSON");
    s->add_option("--im0", im0_arg, "Im phi(0) as a JSON array");
  }
  con->add_option("--atoms", atoms_arg, "atoms JSON: [{\"angle\", \"weight\"}]");
  cdn->add_option("--atoms", atoms_arg, "per-coordinate atoms JSON: [null | {\"angle\", \"alpha\"}]");
  chp->add_option("--atom", atom_arg, "atom JSON {\"angle\", \"alpha\"}");
  auto* ver = app.add_subcommand("verify", "check the geodesic conditions");
  ver->add_option("candidate", input, "candidate JSON")->required();
  auto* evl = app.add_subcommand("eval", "evaluate phi on a polar grid");
  evl->add_option("candidate", input, "candidate JSON")->required();
  evl->add_option("--lambda-grid", lambda_grid, "polar:AxR");
  auto* red = app.add_subcommand("reduce", "reduce to the span of the coefficients of h");
  red->add_option("candidate", input, "candidate JSON")->required();
  red->add_flag("--verify", reduce_verify, "verify both candidates");

  auto* rein = app.add_subcommand("reinhardt", "extremal candidates in Reinhardt domains");
  rein->require_subcommand(1);
  std::string sigma = "0", sigma1 = "0", sigma2 = "0.5", psi_auto = "identity", b1 = "one", b2 = "one";
  double ga = 0.5, gp = 1, gq = 1, beta = 0;
  auto* rl = rein->add_subcommand("lift", "f(sigma)");
  auto* rlem = rein->add_subcommand("lempert", "Lempert upper bound from a candidate");
  auto* rkob = rein->add_subcommand("kobayashi", "Kobayashi-Royden upper bound from a candidate");
  auto* rg = rein->add_subcommand("gapq", "build a G_{a,p,q} candidate");
  for (auto* s : {rl, rlem, rkob}) s->add_option("candidate", input, "extremal candidate JSON")->required();
  rl->add_option("--sigma", sigma, "point of the disc, e.g. 0.3+0.1i");
  rkob->add_option("--sigma", sigma, "point of the disc");
  rlem->add_option("--sigma1", sigma1, "first point");
  rlem->add_option("--sigma2", sigma2, "second point");
  rg->add_option("--a", ga, "a in (0, 1)")->required();
  rg->add_option("--p", gp, "p > 0")->required();
  rg->add_option("--q", gq, "q > 0")->required();
  rg->add_option("--psi-auto", psi_auto, "automorphism inside psi: identity or d=..,eta=..");
  rg->add_option("--beta", beta, "imaginary shift of the second component");
  rg->add_option("--b1", b1, "B1: one or d=..,eta=..");
  rg->add_option("--b2", b2, "B2: one or d=..,eta=..");

  for (auto* s : {dec, con, cdn, chp, ver, evl, red, rl, rlem, rkob, rg}) add_common(s, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    const VerifyOptions vopt = cfg.verify_options();
    auto opt_json = [](const std::string& s) { return s.empty() ? json() : load_json_arg(s); };

    if (dec->parsed()) {
      json j = decomposition_to_json(spherical_decompose(measure_from_json(load_json_arg(input))));
      j["config"] = cfg.to_json();
      emit(j, cfg.out, out);
      return 0;
    }
    if (con->parsed() || cdn->parsed() || chp->parsed()) {
      TubeDomain D = make_domain(load_json_arg(domain_arg));
      HMap h = hmap_from_json(load_json_arg(h_arg));
      Eigen::VectorXd im0 = im0_arg.empty() ? Eigen::VectorXd() : jsonio::vector(load_json_arg(im0_arg), "--im0");
      const json sel = opt_json(selection_arg);
      GeodesicCandidate c;
      if (con->parsed()) {
        AtomList atoms = atoms_arg.empty() ? AtomList() : atoms_from_json(load_json_arg(atoms_arg), h.dim());
        c = construct(h, D, atoms, im0, selection_from_json(sel));
      } else if (cdn->parsed()) {
        std::vector<std::optional<DnAtom>> spec(static_cast<std::size_t>(h.dim()));
        if (!atoms_arg.empty()) {
          const json a = load_json_arg(atoms_arg);
          if (!a.is_array() || static_cast<int>(a.size()) != h.dim())
            throw InvalidArgument("--atoms: expected one entry (null or {angle, alpha}) per coordinate");
          for (std::size_t j = 0; j < a.size(); ++j)
            if (!a[j].is_null())
              spec[j] = DnAtom{jsonio::number(jsonio::field(a[j], "angle", "atom"), "atom.angle"),
                               jsonio::number(jsonio::field(a[j], "alpha", "atom"), "atom.alpha")};
        }
        FaceSelection fs = sel.is_null() ? FaceSelection{FaceSelection::Mode::ray_offset, 0.0, 0.5}
                                         : selection_from_json(sel);
        c = construct_dn(h, D, spec, im0, fs);
      } else {
        std::optional<HalfplaneAtom> atom;
        if (!atom_arg.empty()) {
          const json a = load_json_arg(atom_arg);
          atom = HalfplaneAtom{jsonio::number(jsonio::field(a, "angle", "atom"), "atom.angle"),
                               jsonio::number(jsonio::field(a, "alpha", "atom"), "atom.alpha")};
        }
        c = construct_halfplane_c2(h, D, atom, im0, selection_from_json(sel));
      }
      emit(candidate_to_json(c), cfg.out, out);
      return 0;
    }
    if (ver->parsed()) {
      GeodesicCandidate c = candidate_from_json(load_json_arg(input));
      VerificationReport rep = verify(c, vopt);
      json j = report_to_json(rep);
      j["config"] = cfg.to_json();
      emit(j, report_path(cfg), out);
      return rep.passed() ? 0 : 1;
    }
    if (evl->parsed()) {
      GeodesicCandidate c = candidate_from_json(load_json_arg(input));
      const Grid g = parse_lambda_grid(lambda_grid);
      std::vector<std::complex<double>> pts;
      for (int r = 0; r < g.radii; ++r)
        for (int a = 0; a < g.angles; ++a)
          pts.push_back(std::polar((r + 0.5) / g.radii, kTwoPi * a / g.angles));
      HolomorphicFromMeasure phi(c.mu, c.im0, vopt.quad);
      auto vals = phi.eval_many(pts, cfg.threads);
      if (!cfg.csv.empty()) {
        std::ostringstream os;
        os << "lambda_re,lambda_im";
        for (int j = 1; j <= c.dim(); ++j) os << ",re_phi" << j << ",im_phi" << j;
        os << "\n";
        for (std::size_t i = 0; i < pts.size(); ++i) {
          os << format_double(pts[i].real()) << "," << format_double(pts[i].imag());
          for (int j = 0; j < c.dim(); ++j)
            os << "," << format_double(vals[i][j].real()) << "," << format_double(vals[i][j].imag());
          os << "\n";
        }
        write_text_file(cfg.csv, os.str());
      }
      if (cfg.csv.empty() || !cfg.out.empty()) {
        json rows = json::array();
        for (std::size_t i = 0; i < pts.size(); ++i)
          rows.push_back(json{{"lambda", jsonio::complex_to_json(pts[i])}, {"phi", jsonio::cvector_to_json(vals[i])}});
        emit(json{{"points", rows}, {"config", cfg.to_json()}}, cfg.out, out);
      }
      return 0;
    }
    if (red->parsed()) {
      GeodesicCandidate c = candidate_from_json(load_json_arg(input));
      Reduction r = reduce_dimension(c);
      json j{{"V", jsonio::matrix_to_json(r.V)}, {"reduced", candidate_to_json(r.reduced)}, {"config", cfg.to_json()}};
      int code = 0;
      if (reduce_verify) {
        const auto a = verify(c, vopt), b = verify(r.reduced, vopt);
        j["original_overall"] = to_string(a.overall);
        j["reduced_overall"] = to_string(b.overall);
        if (a.overall != b.overall || !a.passed()) code = 1;
      }
      emit(j, cfg.out, out);
      return code;
    }
    if (rg->parsed()) {
      ExtremalCandidate c = gapq_extremal(ga, gp, gq, parse_automorphism(psi_auto), beta, parse_automorphism(b1),
                                          parse_automorphism(b2), vopt.quad);
      for (const auto& f : c.flags) err << "warning: " << f << "\n";
      emit(extremal_to_json(c), cfg.out, out);
      return 0;
    }
    if (rl->parsed() || rlem->parsed() || rkob->parsed()) {
      ExtremalCandidate c = extremal_from_json(load_json_arg(input), vopt.quad);
      json j;
      int code = 0;
      try {
        if (rl->parsed()) {
          const auto s = parse_complex(sigma);
          j["sigma"] = jsonio::complex_to_json(s);
          j["z"] = jsonio::cvector_to_json(lift(c, s));
        } else {
          const Verdict v = assess(c, vopt);
          if (rlem->parsed()) {
            const auto s1 = parse_complex(sigma1), s2 = parse_complex(sigma2);
            const LempertValue lv = lempert_value(c, s1, s2);
            j["sigma1"] = jsonio::complex_to_json(s1);
            j["sigma2"] = jsonio::complex_to_json(s2);
            j["z"] = jsonio::cvector_to_json(lv.z);
            j["w"] = jsonio::cvector_to_json(lv.w);
            j["bound"] = lv.bound;
          } else {
            const auto s = parse_complex(sigma);
            const KobayashiValue kv = kobayashi_value(c, s);
            j["sigma"] = jsonio::complex_to_json(s);
            j["z"] = jsonio::cvector_to_json(kv.z);
            j["X"] = jsonio::cvector_to_json(kv.X);
            j["bound"] = kv.bound;
          }
          j["verdict"] = verdict_to_json(v);
          if (!v.necessary_conditions) code = 1;
        }
      } catch (const LiftOutsideDomain& e) {
        j["error"] = e.what();
        code = 1;
      }
      j["config"] = cfg.to_json();
      emit(j, report_path(cfg), out);
      if (j.contains("error")) err << "error: " << j["error"].get<std::string>() << "\n";
      return code;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace tubegeo
