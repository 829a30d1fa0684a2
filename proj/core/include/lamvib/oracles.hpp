#pragma once

#include "lamvib/eigensolvers.hpp"

namespace lamvib {

/// Uniform elastic monolithic beam, used as an analytic reference.
struct MonolithSpec {
  double young_modulus;  // [Pa]
  double density;        // [kg/m^3]
  double thickness;      // [m]
  double width;          // [m]
  double length;         // [m]
  BoundaryCondition bc = BoundaryCondition::SimplySupported;
};

/// Euler-Bernoulli natural frequency f = beta^2 sqrt(E h^2 / (12 rho)) / 2 pi
/// with the tabulated wavenumbers, modes 1..3.
double euler_bernoulli_frequency(const MonolithSpec& spec, int mode);

/// Verification path independent of the Newton solver: iterate the dense
/// complex generalized eigenproblem of (K0 + G*_fr(omega_k) Kc, M), track the
/// target mode by shape correlation, and fix-point the eigenvalue. Intended
/// for small systems only.
ComplexEigenpair dense_fixed_point_eig(const AssembledSystem& system,
                                       const MaxwellChain& chain, int mode,
                                       const SolverSettings& settings);

}  // namespace lamvib
