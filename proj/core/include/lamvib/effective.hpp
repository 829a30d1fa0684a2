#pragma once

#include "lamvib/fem.hpp"
#include "lamvib/modal.hpp"

namespace lamvib {

/// Wavenumber beta = beta_hat / l for the first three modes:
/// S-S {pi, 2 pi, 3 pi}; C-C and F-F {4.7300, 7.8532, 10.996}.
double wavenumber(BoundaryCondition bc, int mode, double length);

/// Shape coefficient psi = psi_hat / l^2:
/// S-S {pi^2, (2 pi)^2, (3 pi)^2}; C-C {40.7, 82.6, 148}; F-F {10.1, 34.9, 78.2}.
/// For a simply supported beam psi equals beta^2.
double shape_coefficient(BoundaryCondition bc, int mode, double length);

/// Dynamic effective thickness (complex):
///   h_ef^3 = (h1^3 + h3^3) (1 + Y (1 + h1 / (g (h1 + h3)))^-1)
/// with g = G* / (E1 h3 h2 beta^2) and the geometric factor
/// Y = 12 h1 h3 d^2 / ((h1^3 + h3^3)(h1 + h3)), d = h1/2 + h2 + h3/2.
/// Note the squared d: the first-power form is dimensionally inconsistent
/// and would break the monolithic limit; with d^2 the g -> inf limit equals
/// the enhanced method's full-cohesion thickness. Principal cube root.
Complex det_thickness(const CrossSection& section, double young_glass,
                      Complex g_star, double beta);

/// Enhanced effective thickness (complex) with shear-cohesion coefficient
/// zeta = mu / (mu + c), mu = G* b / (E1 h2),
/// c = ((I1 + I3)/I_tot) (A1 A3/(A1 + A3)) psi:
///   h_ef^3 = 1 / (zeta/(h1^3 + h3^3 + 12 I_s) + (1 - zeta)/(h1^3 + h3^3)),
/// I_s = h1 h3 d^2 / (h1 + h3) per unit width. The width cancels.
Complex eet_thickness(const CrossSection& section, double young_glass,
                      Complex g_star, double psi);

/// Closed-form modal estimate: fixed-point iteration of
/// omega^2 = beta^4 E1 h_ef^3(omega) / (12 m_bar), m_bar = sum rho_i h_i,
/// started from the long-term (real) thickness, stopped on the relative
/// change of the complex omega. Requires identical glass layers.
ModalResult effective_modal(const LaminatedBeam& beam, Method method, int mode,
                            const SolverSettings& settings);

}  // namespace lamvib
