// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#include "phr/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "phr/linalg.hpp"
#include "phr/system_model.hpp"

namespace phr {

namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

[[noreturn]] void input_error(const std::string& msg) { throw Error(ErrorCode::InvalidInput, msg); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) input_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// ---- emitter ----------------------------------------------------------------

void put_string(std::string& out, const std::string& s) { out += ojson(s).dump(); }

void put_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void emit(std::string& out, const ojson& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        put_string(out, it.key());
        out += ": ";
        emit(out, it.value(), indent, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case ojson::value_t::array: {
      // numeric rows stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), [](const ojson& e) { return !e.is_structured(); });
      if (j.empty() || flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          emit(out, j[i], indent, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        emit(out, j[i], indent, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case ojson::value_t::number_float:
      put_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

std::string dump(const ojson& j) {
  std::string out;
  emit(out, j, 2, 0);
  out += "\n";
  return out;
}

ojson mat_json(const Mat& M) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
    a.push_back(std::move(row));
  }
  return a;
}

ojson cvec_json(const CVec& v) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(ojson::array({v(i).real(), v(i).imag()}));
  return a;
}

ojson tol_json(const Tolerances& t) {
  return ojson{{"sym", t.sym}, {"psd", t.psd},     {"orth", t.orth},     {"axis", t.axis},
               {"rank", t.rank}, {"fact", t.fact}, {"xi", t.xi}, {"xi_retries", t.xi_retries}};
}

ojson failure_json(const RealizationFailure& f) {
  return ojson{{"condition", f.condition}, {"step", f.step}, {"detail", f.detail}, {"singular_t", f.singular_t}};
}

ojson steps_json(const std::vector<RecursionStep>& steps) {
  ojson a = ojson::array();
  for (const auto& s : steps) {
    ojson e{{"step", s.step}, {"n", s.n}, {"m", s.m}, {"kernel", s.kernel}, {"rank", s.rank}};
    if (!s.terminal.empty()) {
      e["terminal"] = s.terminal;
    } else {
      e["rank_b"] = s.conditions.rank_b;
      e["rank_c"] = s.conditions.rank_c;
      e["sigma_r"] = s.conditions.sigma_r;
      e["lambda_min"] = s.conditions.lambda_min;
      e["constraint_residual"] = s.constraint_residual;
      e["inverse_residual"] = s.inverse_residual;
    }
    a.push_back(std::move(e));
  }
  return a;
}

// ---- parsing ----------------------------------------------------------------

Mat parse_matrix(const nlohmann::json& j, const std::string& name) {
  if (!j.is_array()) input_error(name + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Mat(0, 0);
  if (!j[0].is_array()) input_error(name + ": expected an array of rows");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Mat M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& r = j[static_cast<std::size_t>(i)];
    if (!r.is_array() || static_cast<Eigen::Index>(r.size()) != cols) input_error(name + ": ragged rows");
    for (Eigen::Index k = 0; k < cols; ++k) {
      const auto& v = r[static_cast<std::size_t>(k)];
      if (!v.is_number()) input_error(name + ": non-numeric entry");
      M(i, k) = v.get<double>();
    }
  }
  return M;
}

}  // namespace

Mat read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) input_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) input_error(path + ": empty file");
  std::istringstream hs(line);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (banner != "%%MatrixMarket" || lower(object) != "matrix") input_error(path + ": not a Matrix Market matrix");
  if (format != "array" && format != "coordinate") input_error(path + ": unsupported format " + format);
  if (field != "real" && field != "integer" && field != "double") input_error(path + ": unsupported field " + field);
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric")
    input_error(path + ": unsupported symmetry " + symmetry);
  const bool sym_kind = symmetry != "general";
  const double mirror = symmetry == "skew-symmetric" ? -1.0 : 1.0;

  while (std::getline(in, line))
    if (!line.empty() && line[0] != '%' && line.find_first_not_of(" \t\r") != std::string::npos) break;
  std::istringstream ss(line);
  long long rows = -1, cols = -1, nnz = -1;
  ss >> rows >> cols;
  if (format == "coordinate") ss >> nnz;
  if (ss.fail() || rows < 0 || cols < 0 || (format == "coordinate" && nnz < 0))
    input_error(path + ": bad size line");
  if (sym_kind && rows != cols) input_error(path + ": symmetric storage needs a square matrix");
  Mat M = Mat::Zero(rows, cols);

  auto next_value = [&](double& v) {
    while (in >> std::ws && in.peek() == '%') std::getline(in, line);
    if (!(in >> v)) input_error(path + ": truncated or non-numeric data");
    if (!std::isfinite(v)) input_error(path + ": non-finite entry");
  };

  if (format == "coordinate") {
    for (long long e = 0; e < nnz; ++e) {
      double di = 0, dk = 0, v = 0;
      next_value(di);
      next_value(dk);
      next_value(v);
      const auto i = static_cast<long long>(di) - 1, k = static_cast<long long>(dk) - 1;
      if (di != std::floor(di) || dk != std::floor(dk) || i < 0 || k < 0 || i >= rows || k >= cols)
        input_error(path + ": index out of range");
      M(i, k) += v;
      if (sym_kind && i != k) M(k, i) += mirror * v;
    }
  } else {
    for (long long k = 0; k < cols; ++k) {
      const long long start = !sym_kind ? 0 : (symmetry == "skew-symmetric" ? k + 1 : k);
      for (long long i = start; i < rows; ++i) {
        double v = 0;
        next_value(v);
        M(i, k) = v;
        if (sym_kind && i != k) M(k, i) = mirror * v;
      }
    }
  }
  double extra = 0;
  while (in >> std::ws && in.peek() == '%') std::getline(in, line);
  if (in >> extra) input_error(path + ": trailing data");
  return M;
}

void write_matrix_market(const std::string& path, const Mat& M) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  out << "%%MatrixMarket matrix array real general\n" << M.rows() << " " << M.cols() << "\n";
  char buf[32];
  for (Eigen::Index k = 0; k < M.cols(); ++k)
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", M(i, k));
      out << buf << "\n";
    }
}

LtiSystem parse_system_json(const std::string& text, const std::string& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    input_error(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) input_error("system file must be a JSON object");
  auto get = [&](const char* key) -> Mat {
    if (!j.contains(key)) input_error(std::string("missing matrix ") + key);
    const auto& v = j[key];
    if (v.is_string()) {
      fs::path p(v.get<std::string>());
      if (p.is_relative()) p = fs::path(base_dir) / p;
      return read_matrix_market(p.string());
    }
    return parse_matrix(v, key);
  };
  LtiSystem sys{get("A"), get("B"), get("C"), get("D")};
  // an empty JSON array loses the other dimension
  if (sys.B.rows() == 0) sys.B.resize(sys.A.rows(), 0);
  if (sys.C.rows() == 0) sys.C.resize(0, sys.A.rows());
  auto v = validate_lti(sys);
  if (!v.empty()) input_error(v.front());
  return sys;
}

LtiSystem load_system(const std::string& path) {
  const std::string text = read_file(path);
  const fs::path base = fs::path(path).parent_path();
  return parse_system_json(text, base.empty() ? "." : base.string());
}

std::string system_to_json(const LtiSystem& sys) {
  return dump(ojson{{"A", mat_json(sys.A)}, {"B", mat_json(sys.B)}, {"C", mat_json(sys.C)}, {"D", mat_json(sys.D)}});
}

std::string report_to_json(const AnalysisReport& rep, bool include_timing) {
  ojson j;
  j["n"] = rep.n;
  j["m"] = rep.m;
  j["verdicts"] = ojson{{"stable", rep.stable},
                        {"asymptotically_stable", rep.asymptotically_stable},
                        {"passive", rep.passive},
                        {"ph_realizable", rep.ph_realizable}};
  j["realization_attempted"] = rep.realization_attempted;
  j["spectral_abscissa"] = rep.spectral_abscissa;
  j["passivity_route"] = rep.passivity_route;
  j["n_observable"] = rep.n_observable;
  ojson fr = ojson::array();
  for (const auto& f : rep.failure_reasons) {
    ojson w = ojson::object();
    for (const auto& [k, v] : f.witnesses) w[k] = v;
    fr.push_back(ojson{{"condition_id", f.condition},
                       {"stage", f.stage},
                       {"step", f.step},
                       {"detail", f.detail},
                       {"witnesses", std::move(w)}});
  }
  j["failure_reasons"] = std::move(fr);
  j["adjustments"] = rep.adjustments;
  const auto& r = rep.residuals;
  j["residuals"] = ojson{{"lyapunov", r.lyapunov},
                         {"passive_lmi", r.passive_lmi},
                         {"lmi_lambda_max", r.lmi_lambda_max},
                         {"lmi_scale", r.lmi_scale},
                         {"constraint_residual", r.constraint_residual},
                         {"sym_residuals", ojson{{"J_skew", r.j_skew}, {"R_sym", r.r_sym}, {"S_sym", r.s_sym},
                                                 {"N_skew", r.n_skew}}},
                         {"K_lambda_min", r.k_lambda_min},
                         {"reconstruction", r.reconstruction}};
  if (rep.ph_realizable) j["cond_T"] = rep.cond_T;
  j["recursion"] = steps_json(rep.recursion);
  ojson rd = ojson::array();
  for (const auto& d : rep.rank_decisions)
    rd.push_back(ojson{{"stage", d.stage}, {"step", d.step}, {"rank", d.rank}, {"sigma_kept", d.sigma_kept},
                       {"sigma_dropped", d.sigma_dropped}});
  j["rank_decisions"] = std::move(rd);
  j["tolerances_used"] = tol_json(rep.tol);
  if (include_timing)
    j["timing_ms"] = ojson{{"stability", rep.timing.stability_ms},
                           {"passivity", rep.timing.passivity_ms},
                           {"realization", rep.timing.realization_ms}};
  return dump(j);
}

std::string spectrum_to_json(const SpectrumReport& sp) {
  ojson j;
  j["eig_A"] = cvec_json(sp.eig_A);
  j["s_definite"] = sp.s_definite;
  if (sp.s_definite) {
    j["eig_H"] = cvec_json(sp.eig_H);
    j["hamiltonian_pairing_residual"] = sp.hamiltonian_pairing;
  }
  j["pencil"] = ojson{{"finite", cvec_json(sp.pencil.finite)},
                      {"n_finite", sp.pencil.finite.size()},
                      {"n_infinite", sp.pencil.n_infinite},
                      {"pairing_residual", sp.pencil.pairing_residual},
                      {"index_one", sp.pencil.index_one}};
  if (!sp.warning.empty()) j["warning"] = sp.warning;
  return dump(j);
}

std::string realization_to_json(const LtiSystem& sys, const RealizationResult& res) {
  ojson j;
  j["success"] = res.success;
  if (!res.success) {
    if (res.failure) j["failure"] = failure_json(*res.failure);
    j["recursion"] = steps_json(res.trace.steps);
    return dump(j);
  }
  const auto& ph = res.ph;
  j["T"] = mat_json(res.transform.T);
  j["V"] = mat_json(res.transform.V);
  j["J"] = mat_json(ph.J);
  j["R"] = mat_json(ph.R);
  j["Q"] = mat_json(ph.Q);
  j["F"] = mat_json(ph.F);
  j["P"] = mat_json(ph.P);
  j["S"] = mat_json(ph.S);
  j["N"] = mat_json(ph.N);
  const Mat K = ph.K();
  const LtiSystem target = transform_system(sys, res.transform.T, res.transform.V);
  const LtiSystem back = ph_to_lti(ph);
  auto diff = [](const Mat& X, const Mat& Y) { return X.size() ? norm2(X - Y) : 0.0; };
  j["residuals"] = ojson{{"lmi_lambda_max", res.lmi_lambda_max},
                         {"lmi_scale", res.lmi_scale},
                         {"K_lambda_min", K.size() ? lambda_min_sym(K) : 0.0},
                         {"J_skew", ph.J.size() ? norm2(ph.J + ph.J.transpose()) : 0.0},
                         {"A_reconstruction", diff(back.A, target.A)},
                         {"B_reconstruction", diff(back.B, target.B)},
                         {"C_reconstruction", diff(back.C, target.C)},
                         {"D_reconstruction", diff(back.D, target.D)}};
  j["cond_T"] = res.transform.cond_T;
  j["recursion"] = steps_json(res.trace.steps);
  return dump(j);
}

std::string brake_to_json(const BrakeInstance& b) {
  ojson j{{"A", mat_json(b.sys.A)}, {"B", mat_json(b.sys.B)}, {"C", mat_json(b.sys.C)}, {"D", mat_json(b.sys.D)}};
  j["brake"] = ojson{{"lambda_min_R", b.lambda_min_R},
                     {"max_real", b.max_real},
                     {"witness_unstable", b.witness_unstable},
                     {"substitution_residual", b.substitution_residual},
                     {"J_skew_residual", b.j_skew_residual},
                     {"J", mat_json(b.J)},
                     {"R", mat_json(b.R)},
                     {"Q", mat_json(b.Q)}};
  return dump(j);
}

std::string scrambled_to_json(const ScrambledInstance& s) {
  const LtiSystem& sys = s.scrambled;
  ojson j{{"A", mat_json(sys.A)}, {"B", mat_json(sys.B)}, {"C", mat_json(sys.C)}, {"D", mat_json(sys.D)}};
  j["scramble"] = ojson{{"Ts", mat_json(s.Ts)}, {"Vs", mat_json(s.Vs)}, {"cond_Ts", cond2(s.Ts)}};
  return dump(j);
}

namespace {

RealizationBundle bundle_from_json(const nlohmann::json& j) {
  RealizationBundle b;
  b.success = j.value("success", false);
  if (!b.success) {
    if (j.contains("failure")) b.condition = j["failure"].value("condition", "");
    return b;
  }
  b.transform.T = parse_matrix(j.at("T"), "T");
  b.transform.V = parse_matrix(j.at("V"), "V");
  b.transform.cond_T = j.value("cond_T", 0.0);
  auto& ph = b.ph;
  ph.J = parse_matrix(j.at("J"), "J");
  ph.R = parse_matrix(j.at("R"), "R");
  ph.Q = parse_matrix(j.at("Q"), "Q");
  ph.F = parse_matrix(j.at("F"), "F");
  ph.P = parse_matrix(j.at("P"), "P");
  ph.S = parse_matrix(j.at("S"), "S");
  ph.N = parse_matrix(j.at("N"), "N");
  return b;
}

}  // namespace

RealizationBundle parse_realization_bundle(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    input_error(std::string("malformed JSON: ") + e.what());
  }
  try {
    return bundle_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    input_error(std::string("malformed realization bundle: ") + e.what());
  }
}

}  // namespace phr
