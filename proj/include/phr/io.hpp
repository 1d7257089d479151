// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#pragma once

#include <string>

#include "phr/analysis.hpp"
#include "phr/generators.hpp"
#include "phr/transform.hpp"
#include "phr/types.hpp"

namespace phr {

// Matrix Market array or coordinate format, real or integer field,
// general / symmetric / skew-symmetric. Throws Error(InvalidInput).
Mat read_matrix_market(const std::string& path);
void write_matrix_market(const std::string& path, const Mat& M);

// {"A": [[...]], "B": ..., "C": ..., "D": ...}; in a manifest any entry may
// instead be a path to a .mtx file, resolved relative to base_dir.
LtiSystem parse_system_json(const std::string& text, const std::string& base_dir = ".");
LtiSystem load_system(const std::string& path);

std::string system_to_json(const LtiSystem& sys);
std::string report_to_json(const AnalysisReport& rep, bool include_timing = false);
std::string spectrum_to_json(const SpectrumReport& sp);
// {T, V, J, R, Q, F, P, S, N, residuals, cond_T} on success, the failure otherwise
std::string realization_to_json(const LtiSystem& sys, const RealizationResult& res);
std::string brake_to_json(const BrakeInstance& b);
std::string scrambled_to_json(const ScrambledInstance& s);

struct RealizationBundle {
  bool success = false;
  EquivalenceTransform transform;
  PhRealization ph;
  std::string condition;
};

RealizationBundle parse_realization_bundle(const std::string& text);

}  // namespace phr
