#pragma once

#include <vector>

#include "lamvib/fem.hpp"
#include "lamvib/modal.hpp"

namespace lamvib {

struct RealEigenpair {
  double omega_squared = 0.0;   // [rad^2/s^2]
  Eigen::VectorXd shape;        // unit Euclidean norm
};

struct ComplexEigenpair {
  Complex omega_squared;
  Eigen::VectorXcd shape;
  int iterations = 0;
  double residual = 0.0;  // final weighted residual / problem scale
};

/// Smallest eigenpairs of the symmetric pencil (K, M), M positive definite,
/// ascending, without rigid-mode filtering. Dense solve for small systems,
/// shift-invert Lanczos with full reorthogonalization otherwise. Shapes have
/// unit Euclidean norm and a deterministic sign.
std::vector<RealEigenpair> lowest_modes(const SparseMatrixD& stiffness,
                                        const SparseMatrixD& mass, int count);

/// Smallest elastic eigenpairs of (K, M): eigenvalues below
/// rigid_mode_cutoff times the largest computed one are discarded before
/// counting (free-free rigid-body modes).
std::vector<RealEigenpair> elastic_modes(const SparseMatrixD& stiffness,
                                         const SparseMatrixD& mass, int count,
                                         const SolverSettings& settings);

/// Undamped auxiliary problem (K0 - omega0^2 M) phi0 = 0 on the constrained
/// system; the n lowest elastic modes.
std::vector<RealEigenpair> real_modes(const AssembledSystem& system,
                                      int n_modes,
                                      const SolverSettings& settings);

/// Complex nonlinear eigensolver: bordered Newton iteration on
/// T(omega) phi = 0 with T = K0 + G*_fr(omega) Kc - omega^2 M and the
/// constraint phi0^T (phi - phi0) = 0, started from a real eigenpair.
/// Stops when ||T phi|| / ||phi|| < tol * s with the per-mode scale
/// s = omega0^2 ||M phi0|| / ||phi0||.
ComplexEigenpair newton_solve(const AssembledSystem& system,
                              const MaxwellChain& chain,
                              const RealEigenpair& start,
                              const SolverSettings& settings);

struct MseResult {
  RealEigenpair converged;
  double loss_factor = 0.0;
  int iterations = 0;
  double correlation = 1.0;  // |phi . phi0| of the tracked mode
};

/// Iterated real-eigenvalue approximation: K_R(omega) = K0 + Re[G*_fr] Kc is
/// re-solved until the tracked frequency settles, then the modal strain
/// energy quotient gives the loss factor.
MseResult mse_solve(const AssembledSystem& system, const MaxwellChain& chain,
                    const RealEigenpair& start, const SolverSettings& settings);

}  // namespace lamvib
