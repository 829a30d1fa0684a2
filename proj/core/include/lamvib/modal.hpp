#pragma once

#include <string>

#include "lamvib/materials.hpp"

namespace lamvib {

enum class Method { Cnm, Mse, Det, Eet, OracleFp };

std::string to_string(Method method);
Method method_from_string(const std::string& text);

struct FrequencyLoss {
  double frequency_hz;
  double loss_factor;
};

/// Splits a complex squared angular frequency omega^2 = (2 pi f)^2 (1 + i eta)
/// into the natural frequency f [Hz] and the modal loss factor eta [-].
/// Throws std::domain_error for Re[omega^2] <= 0 (non-physical mode).
FrequencyLoss freq_and_loss(Complex omega_squared);

struct ModalResult {
  int mode = 0;  // 1-based, elastic modes only
  Method method = Method::Cnm;
  double frequency_hz = 0.0;
  double loss_factor = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

struct SolverSettings {
  double tolerance = 1e-5;
  int max_iterations = 50;
  int modes = 3;
  /// Eigenvalues below rigid_mode_cutoff times the largest computed
  /// eigenvalue are treated as rigid-body modes and skipped.
  double rigid_mode_cutoff = 1e-6;
};

}  // namespace lamvib
