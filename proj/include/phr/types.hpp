// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The phr authors.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace phr {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

// All tolerances are relative to the norm of the quantity being tested.
struct Tolerances {
  double sym = 1e-12;
  double psd = 1e-8;
  double orth = 1e-12;
  double axis = 1e-8;
  double rank = 1e-10;
  double fact = 1e-9;
  double xi = 1e-8;     // initial perturbation size, relative to ||A||
  int xi_retries = 8;
};

enum class ErrorCode {
  InvalidInput,
  SingularT,
  CertificateRejected,
  IntegrationFailure,
  ConvergenceFailure,
  UnstableMatrix,
  NotStable,
  SolveFailure,
  SpectraOverlap,
  NotPsd,
  DegenerateKernelPairing,
  SingularS,
  NoLagrangianSubspace,
  W1Singular,
  ConditionViolated,
  StructureViolation,
};

const char* to_string(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct LtiSystem {
  Mat A, B, C, D;
  Eigen::Index n() const { return A.rows(); }
  Eigen::Index m() const { return B.cols(); }
};

struct PhRealization {
  Mat J, R, Q, F, P, S, N;
  Mat K() const;
};

struct EquivalenceTransform {
  Mat T;
  Mat V;
  double cond_T = 1.0;
};

enum class StorageKind { positive_definite, positive_semidefinite };

struct StorageCertificate {
  Mat Q;
  StorageKind kind = StorageKind::positive_definite;
  double lmi_residual = 0.0;  // lambda_max of the LMI matrix
  double scale = 1.0;         // normalisation used for acceptance
};

}  // namespace phr
