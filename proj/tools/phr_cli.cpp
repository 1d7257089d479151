// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "phr/phr.h"

namespace {

struct Common {
  std::string input;
  std::string output;
  phr_options_t opt{};
};

int report_error(phr_status_t s) {
  std::fprintf(stderr, "phr: %s\n", phr_last_error_message());
  return static_cast<int>(s);
}

// writes and frees the string; returns false on write failure
bool emit(char* json, const std::string& path) {
  bool ok = true;
  if (path.empty() || path == "-") {
    std::fputs(json, stdout);
    std::fflush(stdout);
  } else {
    std::ofstream out(path, std::ios::binary);
    out << json;
    ok = static_cast<bool>(out);
    if (!ok) std::fprintf(stderr, "phr: cannot write %s\n", path.c_str());
  }
  phr_string_free(json);
  return ok;
}

void add_common(CLI::App* sub, Common& c, bool with_input = true) {
  if (with_input) sub->add_option("input", c.input, "system JSON file or .bundle.json manifest")->required();
  sub->add_option("-o,--output", c.output, "output path, stdout when omitted");
  sub->add_option("--rank-tol", c.opt.rank_tol, "relative rank tolerance")->envname("PHR_RANK_TOL");
  sub->add_option("--psd-tol", c.opt.psd_tol, "relative semidefiniteness tolerance")->envname("PHR_PSD_TOL");
  sub->add_option("--axis-tol", c.opt.axis_tol, "imaginary axis band, relative to ||A||")->envname("PHR_AXIS_TOL");
}

phr_system_t* load(const Common& c, int& code) {
  phr_system_t* sys = nullptr;
  phr_status_t s = phr_system_load(c.input.c_str(), &sys);
  code = s == PHR_OK ? 0 : report_error(s);
  return sys;
}

int cmd_analyze(const Common& c, bool timing) {
  int code = 0;
  phr_system_t* sys = load(c, code);
  if (!sys) return code;
  phr_report_t* rep = nullptr;
  phr_status_t s = phr_analyze(sys, &c.opt, &rep);
  phr_system_free(sys);
  if (s != PHR_OK) return report_error(s);
  char* json = nullptr;
  s = phr_report_to_json(rep, timing ? 1 : 0, &json);
  phr_report_free(rep);
  if (s != PHR_OK) return report_error(s);
  return emit(json, c.output) ? 0 : 2;
}

int cmd_realize(const Common& c) {
  int code = 0;
  phr_system_t* sys = load(c, code);
  if (!sys) return code;
  phr_realization_t* r = nullptr;
  const phr_status_t s = phr_realize(sys, &c.opt, &r);
  phr_system_free(sys);
  if (!r) return report_error(s);
  if (s != PHR_OK) std::fprintf(stderr, "phr: %s\n", phr_last_error_message());
  char* json = nullptr;
  const phr_status_t js = phr_realization_to_json(r, &json);
  phr_realization_free(r);
  if (js != PHR_OK) return report_error(js);
  if (!emit(json, c.output)) return 2;
  return static_cast<int>(s);
}

int cmd_spectrum(const Common& c) {
  int code = 0;
  phr_system_t* sys = load(c, code);
  if (!sys) return code;
  char* json = nullptr;
  const phr_status_t s = phr_spectrum_json(sys, &c.opt, &json);
  phr_system_free(sys);
  if (s != PHR_OK) return report_error(s);
  return emit(json, c.output) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phr: stability, passivity and port-Hamiltonian realization of LTI systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(phr_version()));

  Common common;
  phr_options_default(&common.opt);
  bool timing = false;

  auto* analyze = app.add_subcommand("analyze", "stability, passivity and PH-realizability verdicts");
  add_common(analyze, common);
  bool passive_only = false;
  analyze->add_flag("--passive-only", passive_only, "certify passivity only, skip the realization");
  analyze->add_flag("--timing", timing, "include wall-clock timings (makes the output non-deterministic)");

  auto* realize = app.add_subcommand("realize", "construct T, V and the PH matrices");
  add_common(realize, common);

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of A, the Hamiltonian matrix and the even pencil");
  add_common(spectrum, common);

  auto* generate = app.add_subcommand("generate", "fixture generators");
  generate->require_subcommand(1);
  std::string gen_out;
  std::uint64_t seed = 1;

  auto* brake = generate->add_subcommand("brake", "disc-brake first-order model");
  int n_q = 10, rank_n = 0;
  double ratio = 1.0, n_scale = 1.0;
  bool amplify = false;
  brake->add_option("--nq", n_q, "number of mechanical degrees of freedom")->check(CLI::PositiveNumber);
  brake->add_option("--omega-ratio", ratio, "rotation speed ratio")->check(CLI::PositiveNumber);
  brake->add_option("--rank-n", rank_n, "rank of the circulatory matrix")->check(CLI::NonNegativeNumber);
  brake->add_option("--n-scale", n_scale, "circulatory scale")->check(CLI::PositiveNumber);
  brake->add_flag("--amplify", amplify, "double the circulatory scale until the model is unstable");
  brake->add_option("--seed", seed);
  brake->add_option("-o,--output", gen_out);

  auto* scr = generate->add_subcommand("scrambled", "random PH system hidden behind random T and orthogonal V");
  int n = 6, m = 2, s_rank = -1;
  bool lossless = false;
  scr->add_option("--n", n)->check(CLI::PositiveNumber);
  scr->add_option("--m", m)->check(CLI::PositiveNumber);
  scr->add_option("--s-rank", s_rank, "rank of the symmetric feedthrough, -1 for full");
  scr->add_flag("--lossless", lossless, "R = 0 and P = 0");
  scr->add_option("--seed", seed);
  scr->add_option("-o,--output", gen_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  common.opt.passive_only = passive_only ? 1 : 0;
  if (*analyze) return cmd_analyze(common, timing);
  if (*realize) return cmd_realize(common);
  if (*spectrum) return cmd_spectrum(common);

  char* json = nullptr;
  phr_status_t s = PHR_INPUT_ERROR;
  if (*brake) s = phr_generate_brake(n_q, ratio, rank_n, seed, n_scale, amplify ? 1 : 0, &json);
  if (*scr) s = phr_generate_scrambled(seed, n, m, lossless ? 1 : 0, s_rank, &json);
  if (s != PHR_OK) return report_error(s);
  return emit(json, gen_out) ? 0 : 2;
}
