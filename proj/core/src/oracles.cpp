#include "lamvib/oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "lamvib/effective.hpp"

namespace lamvib {

namespace {

constexpr int kMaxDenseSize = 800;
constexpr int kMaxFixedPointIterations = 200;
constexpr double kTrackingFloor = 0.6;

}  // namespace

double euler_bernoulli_frequency(const MonolithSpec& spec, int mode) {
  const double beta = wavenumber(spec.bc, mode, spec.length);
  return beta * beta *
         std::sqrt(spec.young_modulus * spec.thickness * spec.thickness /
                   (12.0 * spec.density)) /
         (2.0 * M_PI);
}

ComplexEigenpair dense_fixed_point_eig(const AssembledSystem& system,
                                       const MaxwellChain& chain, int mode,
                                       const SolverSettings& settings) {
  const int n = system.size();
  if (n > kMaxDenseSize) {
    throw std::invalid_argument(
        "dense_fixed_point_eig: system too large for the dense path (" +
        std::to_string(n) + " DOFs)");
  }

  const auto starts = real_modes(system, mode, settings);
  const RealEigenpair& start = starts[mode - 1];

  const Eigen::MatrixXd k0(system.elastic_stiffness);
  const Eigen::MatrixXd kc(system.unit_interlayer);
  const Eigen::MatrixXd m(system.mass);
  const Eigen::LLT<Eigen::MatrixXd> m_llt(m);
  if (m_llt.info() != Eigen::Success) {
    throw std::runtime_error("dense_fixed_point_eig: mass not positive definite");
  }

  Complex omega = std::sqrt(Complex(start.omega_squared, 0.0));
  Complex lambda = omega * omega;
  Eigen::VectorXcd shape = start.shape.cast<Complex>();

  for (int it = 1; it <= kMaxFixedPointIterations; ++it) {
    const Eigen::MatrixXcd k =
        k0.cast<Complex>() + chain.frequency_part(omega) * kc.cast<Complex>();
    // M^-1 K via the real Cholesky factor applied to both parts
    Eigen::MatrixXcd a(n, n);
    a.real() = m_llt.solve(k.real().eval());
    a.imag() = m_llt.solve(k.imag().eval());

    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(a);
    if (ces.info() != Eigen::Success) {
      throw std::runtime_error("dense_fixed_point_eig: eigensolver failed");
    }

    double best = -1.0;
    int pick = -1;
    for (int i = 0; i < n; ++i) {
      const Complex dot =
          (start.shape.cast<Complex>().transpose() * ces.eigenvectors().col(i))(0);
      const double c = std::abs(dot) / ces.eigenvectors().col(i).norm();
      if (c > best) {
        best = c;
        pick = i;
      }
    }
    if (best < kTrackingFloor) {
      throw std::runtime_error("dense_fixed_point_eig: mode tracking failed");
    }

    lambda = ces.eigenvalues()[pick];
    shape = ces.eigenvectors().col(pick);
    const Complex omega_new = std::sqrt(lambda);
    const bool done = std::abs(omega_new - omega) / std::abs(omega_new) <
                      settings.tolerance;
    omega = omega_new;
    if (done) {
      ComplexEigenpair out;
      out.omega_squared = lambda;
      out.shape = shape;
      out.iterations = it;
      const Eigen::MatrixXcd t =
          k0.cast<Complex>() + chain.frequency_part(omega) * kc.cast<Complex>() -
          lambda * m.cast<Complex>();
      const double scale = start.omega_squared *
                           (m * start.shape).norm() / start.shape.norm();
      out.residual = (t * shape).norm() / shape.norm() / scale;
      return out;
    }
  }
  throw std::runtime_error("dense_fixed_point_eig: did not converge");
}

}  // namespace lamvib
