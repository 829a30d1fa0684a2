#include "lamvib/effective.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace lamvib {

namespace {

constexpr std::array<double, 3> kBetaHatSS = {M_PI, 2.0 * M_PI, 3.0 * M_PI};
constexpr std::array<double, 3> kBetaHatClampedOrFree = {4.7300, 7.8532,
                                                         10.996};

constexpr std::array<double, 3> kPsiHatSS = {
    M_PI * M_PI, 4.0 * M_PI * M_PI, 9.0 * M_PI * M_PI};
constexpr std::array<double, 3> kPsiHatCC = {40.7, 82.6, 148.0};
constexpr std::array<double, 3> kPsiHatFF = {10.1, 34.9, 78.2};

int mode_index(int mode) {
  if (mode < 1 || mode > 3) {
    throw std::invalid_argument(
        "effective thickness tables cover modes 1..3, got " +
        std::to_string(mode));
  }
  return mode - 1;
}

Complex principal_cbrt(Complex z) { return std::pow(z, 1.0 / 3.0); }

void require_identical_glass(const LaminatedBeam& beam) {
  const auto& g1 = beam.glass1;
  const auto& g3 = beam.glass3;
  const bool same =
      std::abs(g1.young_modulus - g3.young_modulus) <=
          1e-12 * g1.young_modulus &&
      std::abs(g1.poisson_ratio - g3.poisson_ratio) <= 1e-12 &&
      std::abs(g1.density - g3.density) <= 1e-12 * g1.density;
  if (!same) {
    throw std::invalid_argument(
        "effective thickness methods require identical glass layers");
  }
}

}  // namespace

double wavenumber(BoundaryCondition bc, int mode, double length) {
  const int i = mode_index(mode);
  const double hat = (bc == BoundaryCondition::SimplySupported)
                         ? kBetaHatSS[i]
                         : kBetaHatClampedOrFree[i];
  return hat / length;
}

double shape_coefficient(BoundaryCondition bc, int mode, double length) {
  const int i = mode_index(mode);
  double hat = 0.0;
  switch (bc) {
    case BoundaryCondition::SimplySupported: hat = kPsiHatSS[i]; break;
    case BoundaryCondition::ClampedClamped: hat = kPsiHatCC[i]; break;
    case BoundaryCondition::FreeFree: hat = kPsiHatFF[i]; break;
  }
  return hat / (length * length);
}

Complex det_thickness(const CrossSection& section, double young_glass,
                      Complex g_star, double beta) {
  section.validate();
  if (beta == 0.0) throw std::invalid_argument("det_thickness: beta = 0");
  const double h1 = section.h1;
  const double h2 = section.h2;
  const double h3 = section.h3;

  const double hcube = h1 * h1 * h1 + h3 * h3 * h3;
  const double d = 0.5 * h1 + h2 + 0.5 * h3;
  const double y = 12.0 * h1 * h3 * d * d / (hcube * (h1 + h3));

  const Complex g = g_star / (young_glass * h3 * h2 * beta * beta);
  // Y (1 + h1/(g (h1+h3)))^-1 = Y g (h1+h3) / (g (h1+h3) + h1), which stays
  // finite for g -> 0
  const Complex denom = g * (h1 + h3) + h1;
  if (std::abs(denom) < 1e-300) {
    throw std::domain_error("det_thickness: vanishing shear-transfer term");
  }
  const Complex coupling = y * g * (h1 + h3) / denom;
  return principal_cbrt(hcube * (1.0 + coupling));
}

Complex eet_thickness(const CrossSection& section, double young_glass,
                      Complex g_star, double psi) {
  section.validate();
  const double h1 = section.h1;
  const double h2 = section.h2;
  const double h3 = section.h3;
  const double b = section.b;

  const double hcube = h1 * h1 * h1 + h3 * h3 * h3;
  const double d = h2 + 0.5 * (h1 + h3);
  const double is = h1 * h3 / (h1 + h3) * d * d;  // per unit width

  const double i1 = b * h1 * h1 * h1 / 12.0;
  const double i3 = b * h3 * h3 * h3 / 12.0;
  const double a1 = b * h1;
  const double a3 = b * h3;
  const double a_series = a1 * a3 / (a1 + a3);
  const double i_tot = i1 + i3 + a_series * d * d;

  const Complex mu = g_star * b / (young_glass * h2);
  // zeta = 1 / (1 + (I1+I3)/(mu I_tot) * A1 A3/(A1+A3) * psi), rearranged so
  // mu = 0 gives the layered limit without dividing by zero
  const double c = (i1 + i3) / i_tot * a_series * psi;
  const Complex zc = mu + c;
  if (std::abs(zc) < 1e-300) {
    throw std::domain_error("eet_thickness: vanishing cohesion denominator");
  }
  const Complex zeta = mu / zc;
  const Complex inv_cube =
      zeta / (hcube + 12.0 * is) + (1.0 - zeta) / hcube;
  return principal_cbrt(1.0 / inv_cube);
}

ModalResult effective_modal(const LaminatedBeam& beam, Method method, int mode,
                            const SolverSettings& settings) {
  if (method != Method::Det && method != Method::Eet) {
    throw std::invalid_argument("effective_modal: method must be det or eet");
  }
  beam.validate();
  require_identical_glass(beam);

  const MaxwellChain chain = beam.interlayer.chain_at(beam.temperature);
  const CrossSection& s = beam.section;
  const double e1 = beam.glass1.young_modulus;
  const double m_bar = beam.glass1.density * s.h1 +
                       beam.interlayer.density * s.h2 +
                       beam.glass3.density * s.h3;
  const double beta = wavenumber(beam.bc, mode, beam.length);
  const double psi = shape_coefficient(beam.bc, mode, beam.length);
  const double beta4 = beta * beta * beta * beta;

  const auto thickness = [&](Complex omega) {
    const Complex g_star = chain.complex_modulus(omega);
    return method == Method::Det ? det_thickness(s, e1, g_star, beta)
                                 : eet_thickness(s, e1, g_star, psi);
  };
  const auto next_lambda = [&](Complex omega) {
    const Complex hef = thickness(omega);
    return beta4 * e1 * hef * hef * hef / (12.0 * m_bar);
  };

  // long-term start: G*(0) = G_inf is real, so the first iterate is real
  const Complex h0 = thickness(Complex(0.0, 0.0));
  Complex omega = std::sqrt(beta4 * e1 * std::pow(h0.real(), 3) /
                            (12.0 * m_bar));
  Complex lambda = omega * omega;

  for (int it = 1; it <= settings.max_iterations; ++it) {
    lambda = next_lambda(omega);
    const Complex omega_new = std::sqrt(lambda);
    const bool done =
        std::abs(omega_new - omega) / std::abs(omega_new) <
        settings.tolerance;
    omega = omega_new;
    if (done) {
      const double residual =
          std::abs(next_lambda(omega) - lambda) / std::abs(lambda);
      const FrequencyLoss fl = freq_and_loss(lambda);
      ModalResult out;
      out.mode = mode;
      out.method = method;
      out.frequency_hz = fl.frequency_hz;
      out.loss_factor = fl.loss_factor;
      out.iterations = it;
      out.residual = residual;
      return out;
    }
  }
  throw std::runtime_error("effective_modal: fixed point did not converge");
}

}  // namespace lamvib
