#include "lamvib/eigensolvers.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/SparseLU>

namespace lamvib {

namespace {

using SparseMatrixC = Eigen::SparseMatrix<Complex>;

// Dense solve below this size; shift-invert Lanczos above.
constexpr int kDenseThreshold = 260;

// Shift for the inverted operator; below the first elastic eigenvalue of
// every study case and above the (zero) rigid-body eigenvalues.
const double kShift = std::pow(2.0 * M_PI * 1.0, 2);

// Ritz acceptance is a backward-error test: the achievable residual of a
// low mode scales with eps * ||K|| * ||x|| (the foil DOFs make these
// pencils ill-scaled, kappa up to ~1e10), not with ||K x||. Accepted pairs
// are polished by one Rayleigh-quotient inverse-iteration step afterwards.
constexpr double kEigResidualTol = 1e-10;

double inf_norm(const SparseMatrixD& a) {
  Eigen::VectorXd row_sum = Eigen::VectorXd::Zero(a.rows());
  for (int col = 0; col < a.outerSize(); ++col) {
    for (SparseMatrixD::InnerIterator it(a, col); it; ++it) {
      row_sum[it.row()] += std::abs(it.value());
    }
  }
  return row_sum.maxCoeff();
}

// Number of eigenvalues of (K, M) strictly below tau, from the inertia of
// K - tau M (Sylvester's law). Returns -1 when the unpivoted factorization
// breaks down and the caller should nudge tau.
int eigenvalue_count_below(const SparseMatrixD& k, const SparseMatrixD& m,
                           double tau) {
  SparseMatrixD shifted = k - tau * m;
  shifted.makeCompressed();
  Eigen::SimplicialLDLT<SparseMatrixD> ldlt;
  ldlt.compute(shifted);
  if (ldlt.info() != Eigen::Success) return -1;
  const auto& d = ldlt.vectorD();
  int negatives = 0;
  double max_abs = 0.0;
  for (int i = 0; i < d.size(); ++i) {
    max_abs = std::max(max_abs, std::abs(d[i]));
  }
  for (int i = 0; i < d.size(); ++i) {
    if (std::abs(d[i]) < 1e-14 * max_abs) return -1;  // pivot too small
    if (d[i] < 0.0) ++negatives;
  }
  return negatives;
}

void canonicalize(Eigen::VectorXd& v) {
  v.normalize();
  int imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0.0) v = -v;
}

std::vector<RealEigenpair> dense_lowest(const SparseMatrixD& k,
                                        const SparseMatrixD& m, int count) {
  const Eigen::MatrixXd kd(k);
  const Eigen::MatrixXd md(m);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(kd, md);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("dense generalized eigensolver failed");
  }
  std::vector<RealEigenpair> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    RealEigenpair p;
    p.omega_squared = es.eigenvalues()[i];
    p.shape = es.eigenvectors().col(i);
    canonicalize(p.shape);
    out.push_back(std::move(p));
  }
  return out;
}

struct RitzPair {
  double lambda;
  Eigen::VectorXd shape;
};

// Shift-invert Lanczos on op(x) = (K - sigma M)^{-1} M x, self-adjoint in
// the M-inner product; full reorthogonalization, one-shot Krylov space of
// dimension m, explicit residual filtering of the Ritz pairs. The run stays
// M-orthogonal to the locked pairs, so repeated (or numerically multiple)
// eigenvalues -- the free-free rigid-body triple -- are found one copy per
// pass: a single Krylov sequence carries exactly one direction per
// eigenspace.
std::vector<RitzPair> lanczos_shift_invert(
    const Eigen::SparseLU<SparseMatrixD>& lu, const SparseMatrixD& m_mat,
    double sigma, int krylov_dim, const SparseMatrixD& k_mat,
    const std::vector<RitzPair>& locked, unsigned seed) {
  const int n = static_cast<int>(m_mat.rows());
  const int m = std::min<int>(krylov_dim, n - static_cast<int>(locked.size()));
  if (m < 1) return {};

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);

  std::vector<Eigen::VectorXd> m_locked;
  m_locked.reserve(locked.size());
  for (const auto& p : locked) m_locked.push_back(m_mat * p.shape);

  std::vector<Eigen::VectorXd> basis;   // M-orthonormal
  std::vector<Eigen::VectorXd> m_basis; // M * basis
  std::vector<double> alpha, beta;

  const auto orthogonalize = [&](Eigen::VectorXd& w) {
    for (int pass = 0; pass < 2; ++pass) {
      for (size_t i = 0; i < locked.size(); ++i) {
        w -= w.dot(m_locked[i]) * locked[i].shape;
      }
      for (size_t i = 0; i < basis.size(); ++i) {
        w -= w.dot(m_basis[i]) * basis[i];
      }
    }
  };

  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  orthogonalize(v);
  const double v_norm = std::sqrt(std::max(v.dot(m_mat * v), 0.0));
  if (v_norm < 1e-300) return {};
  v /= v_norm;
  basis.push_back(v);
  m_basis.push_back(m_mat * v);

  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd w = lu.solve(m_basis[j]);
    const double a = w.dot(m_basis[j]);
    alpha.push_back(a);
    orthogonalize(w);
    Eigen::VectorXd mw = m_mat * w;
    double b = std::sqrt(std::max(w.dot(mw), 0.0));
    if (j + 1 >= m) break;
    if (b < 1e-300) {
      // invariant subspace; restart with a fresh random direction
      for (int i = 0; i < n; ++i) w[i] = dist(rng);
      orthogonalize(w);
      mw = m_mat * w;
      b = std::sqrt(std::max(w.dot(mw), 0.0));
      if (b < 1e-300) break;
      beta.push_back(0.0);
    } else {
      beta.push_back(b);
    }
    w /= b;
    basis.push_back(w);
    m_basis.push_back(m_mat * w);
  }

  const int steps = static_cast<int>(alpha.size());
  Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(steps, steps);
  for (int i = 0; i < steps; ++i) {
    tri(i, i) = alpha[i];
    if (i + 1 < steps) {
      tri(i, i + 1) = beta[i];
      tri(i + 1, i) = beta[i];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tes(tri);

  const double k_norm = inf_norm(k_mat);
  const double m_norm = inf_norm(m_mat);
  std::vector<RitzPair> converged;
  for (int i = 0; i < steps; ++i) {
    const double nu = tes.eigenvalues()[i];
    if (std::abs(nu) < 1e-300) continue;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < steps; ++j) {
      x += tes.eigenvectors()(j, i) * basis[j];
    }
    const Eigen::VectorXd kx = k_mat * x;
    const Eigen::VectorXd mx = m_mat * x;
    // Rayleigh quotient: accurate to second order in the vector error,
    // which removes the noise the LU solve injects into the Ritz value
    const double lambda = x.dot(kx) / x.dot(mx);
    const double scale =
        (k_norm + (std::abs(lambda) + sigma) * m_norm) * x.norm();
    const double res = (kx - lambda * mx).norm();
    if (res <= kEigResidualTol * scale) {
      converged.push_back({lambda, std::move(x)});
    }
  }
  std::sort(converged.begin(), converged.end(),
            [](const RitzPair& a, const RitzPair& b) {
              return a.lambda < b.lambda;
            });
  return converged;
}

}  // namespace

// One Rayleigh-quotient inverse-iteration step. Leaves the pair untouched
// when the factorization is unusable or the iterate jumps to a neighbour of
// a clustered eigenvalue.
RitzPair polish_pair(const SparseMatrixD& k, const SparseMatrixD& m,
                     const RitzPair& pair) {
  SparseMatrixD shifted = k - pair.lambda * m;
  shifted.makeCompressed();
  Eigen::SparseLU<SparseMatrixD> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success) return pair;
  Eigen::VectorXd y = lu.solve(m * pair.shape);
  if (!y.allFinite() || y.norm() == 0.0) return pair;
  y.normalize();
  const Eigen::VectorXd x = pair.shape.normalized();
  if (std::abs(y.dot(x)) < 0.9) return pair;
  const double lambda = y.dot(k * y) / y.dot(m * y);
  return {lambda, std::move(y)};
}

std::vector<RealEigenpair> lowest_modes(const SparseMatrixD& stiffness,
                                        const SparseMatrixD& mass, int count) {
  const int n = static_cast<int>(stiffness.rows());
  if (count < 1) throw std::invalid_argument("lowest_modes: count < 1");
  count = std::min(count, n);
  if (n <= kDenseThreshold) return dense_lowest(stiffness, mass, count);

  double sigma = kShift;
  SparseMatrixD shifted = stiffness - sigma * mass;
  shifted.makeCompressed();
  Eigen::SparseLU<SparseMatrixD> lu;
  lu.compute(shifted);
  for (int tries = 0; lu.info() != Eigen::Success && tries < 3; ++tries) {
    sigma *= 1.7;  // sigma hit an eigenvalue; nudge it
    shifted = stiffness - sigma * mass;
    shifted.makeCompressed();
    lu.compute(shifted);
  }
  if (lu.info() != Eigen::Success) {
    throw std::runtime_error("lowest_modes: factorization of K - sigma M failed");
  }

  int krylov = std::max(4 * count + 20, 48);
  std::vector<RitzPair> locked;
  for (int attempt = 0; attempt < 6; ++attempt) {
    auto fresh = lanczos_shift_invert(lu, mass, sigma, krylov, stiffness,
                                      locked, 0x5eedu + attempt);
    const bool progress = !fresh.empty();
    for (auto& p : fresh) locked.push_back(std::move(p));
    std::sort(locked.begin(), locked.end(),
              [](const RitzPair& a, const RitzPair& b) {
                return a.lambda < b.lambda;
              });

    if (static_cast<int>(locked.size()) >= count) {
      // completeness: verify by matrix inertia that no eigenvalue below the
      // accepted band failed to converge (a silent gap would shift the mode
      // numbering of everything downstream)
      const double lam_top = locked[count - 1].lambda;
      double tau = lam_top + 1e-7 * (std::abs(lam_top) + sigma);
      int below = -1;
      for (int nudge = 0; nudge < 4 && below < 0; ++nudge) {
        below = eigenvalue_count_below(stiffness, mass, tau);
        tau += 1e-7 * (std::abs(lam_top) + sigma);
      }
      int accepted_below = 0;
      for (const auto& p : locked) {
        if (p.lambda < tau) ++accepted_below;
      }
      if (below == accepted_below) {
        std::vector<RealEigenpair> out;
        out.reserve(count);
        for (int i = 0; i < count; ++i) {
          const RitzPair refined = polish_pair(stiffness, mass, locked[i]);
          RealEigenpair p;
          p.omega_squared = refined.lambda;
          p.shape = refined.shape;
          canonicalize(p.shape);
          out.push_back(std::move(p));
        }
        // polishing can reorder values inside a tight cluster
        std::sort(out.begin(), out.end(),
                  [](const RealEigenpair& a, const RealEigenpair& b) {
                    return a.omega_squared < b.omega_squared;
                  });
        return out;
      }
    }
    if (!progress) krylov = std::min(2 * krylov, n);
  }
  throw std::runtime_error("lowest_modes: Lanczos did not converge");
}

std::vector<RealEigenpair> elastic_modes(const SparseMatrixD& stiffness,
                                         const SparseMatrixD& mass, int count,
                                         const SolverSettings& settings) {
  // over-request to allow for up to three rigid-body modes
  const int request = count + 4;
  auto pairs = lowest_modes(stiffness, mass, request);
  const double lambda_max = pairs.back().omega_squared;
  const double cutoff = settings.rigid_mode_cutoff * std::abs(lambda_max);

  std::vector<RealEigenpair> out;
  for (auto& p : pairs) {
    if (p.omega_squared > cutoff) out.push_back(std::move(p));
  }
  if (static_cast<int>(out.size()) < count) {
    // more rigid modes than the buffer allowed for; ask for more
    pairs = lowest_modes(stiffness, mass, request + 4);
    out.clear();
    const double cutoff2 =
        settings.rigid_mode_cutoff * std::abs(pairs.back().omega_squared);
    for (auto& p : pairs) {
      if (p.omega_squared > cutoff2) out.push_back(std::move(p));
    }
    if (static_cast<int>(out.size()) < count) {
      throw std::runtime_error("elastic_modes: fewer elastic modes than requested");
    }
  }
  out.resize(count);
  return out;
}

std::vector<RealEigenpair> real_modes(const AssembledSystem& system,
                                      int n_modes,
                                      const SolverSettings& settings) {
  if (n_modes < 1) throw std::invalid_argument("real_modes: n_modes < 1");
  return elastic_modes(system.elastic_stiffness, system.mass, n_modes,
                       settings);
}

ComplexEigenpair newton_solve(const AssembledSystem& system,
                              const MaxwellChain& chain,
                              const RealEigenpair& start,
                              const SolverSettings& settings) {
  const SparseMatrixC k0 = system.elastic_stiffness.cast<Complex>();
  const SparseMatrixC kc = system.unit_interlayer.cast<Complex>();
  const SparseMatrixC m = system.mass.cast<Complex>();

  const Eigen::VectorXcd phi0 = start.shape.cast<Complex>();
  // fixed per-mode scale: modal inertial force of the starting pair
  const double scale =
      start.omega_squared * (system.mass * start.shape).norm() /
      start.shape.norm();

  Complex omega = std::sqrt(Complex(start.omega_squared, 0.0));
  Eigen::VectorXcd phi = phi0;

  for (int it = 0; it <= settings.max_iterations; ++it) {
    SparseMatrixC t = k0 + chain.frequency_part(omega) * kc -
                      omega * omega * m;
    const double res = (t * phi).norm() / phi.norm();
    if (res < settings.tolerance * scale) {
      const Complex omega_sq = omega * omega;
      if (omega_sq.real() <= 0.0) {
        throw std::runtime_error(
            "newton_solve: converged to non-positive Re[omega^2]");
      }
      ComplexEigenpair out;
      out.omega_squared = omega_sq;
      out.shape = phi;
      out.iterations = it;
      out.residual = res / scale;
      return out;
    }
    if (it == settings.max_iterations) break;

    const Eigen::VectorXcd rhs =
        chain.frequency_part_derivative(omega) * (kc * phi) -
        2.0 * omega * (m * phi);
    t.makeCompressed();
    Eigen::SparseLU<SparseMatrixC> lu;
    lu.compute(t);
    if (lu.info() != Eigen::Success) {
      throw std::runtime_error("newton_solve: singular bordered system");
    }
    const Eigen::VectorXcd x = lu.solve(rhs);
    const Complex denom = (phi0.transpose() * x)(0);
    if (std::abs(denom) < 1e-300) {
      throw std::runtime_error("newton_solve: singular bordered system");
    }
    // block elimination of the bordered system: the constraint
    // phi0^T phi = phi0^T phi0 (= 1 for the unit-norm start) fixes the
    // frequency increment, then the new shape follows
    const Complex delta = -Complex(start.shape.squaredNorm(), 0.0) / denom;
    phi = -delta * x;
    omega += delta;
  }
  throw std::runtime_error("newton_solve: max iterations exceeded");
}

MseResult mse_solve(const AssembledSystem& system, const MaxwellChain& chain,
                    const RealEigenpair& start,
                    const SolverSettings& settings) {
  constexpr double kTrackingFloor = 0.7;

  double omega = std::sqrt(start.omega_squared);
  RealEigenpair current = start;
  double correlation = 1.0;
  bool converged = false;
  int it = 0;

  while (it < settings.max_iterations) {
    ++it;
    const double re_gfr =
        chain.frequency_part(Complex(omega, 0.0)).real();
    SparseMatrixD kr = system.elastic_stiffness + re_gfr * system.unit_interlayer;
    const auto window =
        elastic_modes(kr, system.mass, settings.modes + 3, settings);

    double best = -1.0;
    const RealEigenpair* pick = nullptr;
    for (const auto& p : window) {
      const double c = std::abs(p.shape.dot(start.shape));
      if (c > best) {
        best = c;
        pick = &p;
      }
    }
    correlation = best;
    if (best < kTrackingFloor) {
      throw std::runtime_error("mse_solve: mode tracking failed (correlation " +
                               std::to_string(best) + ")");
    }
    const double omega_new = std::sqrt(pick->omega_squared);
    const bool done = std::abs(omega_new - omega) / omega_new <
                      settings.tolerance;
    omega = omega_new;
    current = *pick;
    if (done) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw std::runtime_error("mse_solve: max iterations exceeded");
  }

  // modal strain energy quotient at the converged frequency
  const Complex gfr = chain.frequency_part(Complex(omega, 0.0));
  const Eigen::VectorXd kc_phi = system.unit_interlayer * current.shape;
  const double numerator = gfr.imag() * current.shape.dot(kc_phi);
  const double denominator =
      current.shape.dot(system.elastic_stiffness * current.shape) +
      gfr.real() * current.shape.dot(kc_phi);
  MseResult out;
  out.converged = current;
  out.loss_factor = numerator / denominator;
  out.iterations = it;
  out.correlation = correlation;
  return out;
}

}  // namespace lamvib
