#include "lamvib/fem.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace lamvib {

namespace {

// Shear correction factor. The interlayer is a constrained thin core in
// nearly homogeneous shear, so no parabolic-warping reduction is applied;
// using 1 for the faces as well keeps the FE and effective-thickness models
// consistent.
constexpr double kShearCorrection = 1.0;

constexpr int kDofsPerNode = 5;

}  // namespace

std::string to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::SimplySupported: return "ss";
    case BoundaryCondition::ClampedClamped: return "cc";
    case BoundaryCondition::FreeFree: return "ff";
  }
  throw std::logic_error("unreachable");
}

BoundaryCondition bc_from_string(const std::string& text) {
  std::string t;
  for (char c : text) {
    if (c != '-' && c != '_') t.push_back(static_cast<char>(std::tolower(c)));
  }
  if (t == "ss" || t == "simplysupported") {
    return BoundaryCondition::SimplySupported;
  }
  if (t == "cc" || t == "clampedclamped" || t == "fixedfixed") {
    return BoundaryCondition::ClampedClamped;
  }
  if (t == "ff" || t == "freefree") return BoundaryCondition::FreeFree;
  throw std::invalid_argument("unknown boundary condition '" + text + "'");
}

void CrossSection::validate() const {
  if (h1 <= 0.0 || h2 <= 0.0 || h3 <= 0.0 || b <= 0.0) {
    throw std::invalid_argument(
        "CrossSection: thicknesses and width must be positive");
  }
}

void LaminatedBeam::validate() const {
  if (length <= 0.0) {
    throw std::invalid_argument("LaminatedBeam: length must be positive");
  }
  section.validate();
  glass1.validate();
  glass3.validate();
  interlayer.validate();
  interlayer.chain_at(temperature);  // throws if the temperature is invalid
}

ElementMatrices layer_element_matrices(const LayerElastic& mat, double h,
                                       double b, double element_length) {
  if (element_length <= 0.0) {
    throw std::invalid_argument("layer element: length must be positive");
  }
  const double le = element_length;
  const double area = b * h;
  const double inertia = b * h * h * h / 12.0;

  ElementMatrices out;
  out.stiffness.setZero();
  out.mass.setZero();
  Matrix6& k = out.stiffness;
  Matrix6& m = out.mass;

  // axial: E A integral(u'^2), linear shape functions
  const double ka = mat.young_modulus * area / le;
  k(0, 0) += ka; k(0, 3) -= ka;
  k(3, 0) -= ka; k(3, 3) += ka;

  // bending: E I integral(phi'^2)
  const double kb = mat.young_modulus * inertia / le;
  k(2, 2) += kb; k(2, 5) -= kb;
  k(5, 2) -= kb; k(5, 5) += kb;

  // shear: ks G A integral((w' + phi)^2), single midpoint evaluation to
  // avoid shear locking; gamma_mid = (w_R - w_L)/le + (phi_L + phi_R)/2
  Eigen::Matrix<double, 6, 1> bs;
  bs << 0.0, -1.0 / le, 0.5, 0.0, 1.0 / le, 0.5;
  k += kShearCorrection * mat.shear_modulus * area * le * (bs * bs.transpose());

  // consistent mass: translational on u and w, rotary on phi
  const double mt = mat.density * area * le / 6.0;
  const double mr = mat.density * inertia * le / 6.0;
  m(0, 0) = 2 * mt; m(0, 3) = mt; m(3, 0) = mt; m(3, 3) = 2 * mt;
  m(1, 1) = 2 * mt; m(1, 4) = mt; m(4, 1) = mt; m(4, 4) = 2 * mt;
  m(2, 2) = 2 * mr; m(2, 5) = mr; m(5, 2) = mr; m(5, 5) = 2 * mr;
  return out;
}

Matrix18x10 transformation_matrix(const CrossSection& section) {
  section.validate();
  const double h1 = section.h1;
  const double h2 = section.h2;
  const double h3 = section.h3;

  Matrix18x10 t = Matrix18x10::Zero();
  // master columns: 0..4 = (u1, w1, phi1, u3, phi3) left node,
  //                 5..9 = the same at the right node
  // full rows, layer-major: layer 1 rows 0-5, layer 2 rows 6-11,
  //                         layer 3 rows 12-17, (uL wL phiL uR wR phiR) each
  t(0, 0) = 1.0;  // u1L
  t(1, 1) = 1.0;  // w1L
  t(2, 2) = 1.0;  // phi1L
  t(3, 5) = 1.0;  // u1R
  t(4, 6) = 1.0;  // w1R
  t(5, 7) = 1.0;  // phi1R

  // interlayer slaves from the adhesion conditions:
  //   u2   = (u1 + u3)/2 + h1/4 phi1 - h3/4 phi3
  //   w2   = w1
  //   phi2 = (u3 - u1)/h2 - h1/(2 h2) phi1 - h3/(2 h2) phi3
  for (const auto& [row, col0] : {std::pair{6, 0}, std::pair{9, 5}}) {
    t(row, col0 + 0) = 0.5;
    t(row, col0 + 2) = h1 / 4.0;
    t(row, col0 + 3) = 0.5;
    t(row, col0 + 4) = -h3 / 4.0;
  }
  t(7, 1) = 1.0;   // w2L
  t(10, 6) = 1.0;  // w2R
  for (const auto& [row, col0] : {std::pair{8, 0}, std::pair{11, 5}}) {
    t(row, col0 + 0) = -1.0 / h2;
    t(row, col0 + 2) = -h1 / (2.0 * h2);
    t(row, col0 + 3) = 1.0 / h2;
    t(row, col0 + 4) = -h3 / (2.0 * h2);
  }

  t(12, 3) = 1.0;  // u3L
  t(13, 1) = 1.0;  // w3L = w1L
  t(14, 4) = 1.0;  // phi3L
  t(15, 8) = 1.0;  // u3R
  t(16, 6) = 1.0;  // w3R = w1R
  t(17, 9) = 1.0;  // phi3R
  return t;
}

CondensedElement condensed_element(const CrossSection& section,
                                   const LayerMaterials& materials,
                                   double element_length,
                                   bool unit_interlayer_shear) {
  LayerMaterials mats = materials;
  if (unit_interlayer_shear) {
    if (mats.interlayer.shear_modulus <= 0.0) {
      throw std::invalid_argument(
          "condensed_element: interlayer shear modulus must be positive");
    }
    // keep the E/G ratio 2(1+nu2) while normalizing G to 1 Pa
    const double ratio =
        mats.interlayer.young_modulus / mats.interlayer.shear_modulus;
    mats.interlayer.young_modulus = ratio;
    mats.interlayer.shear_modulus = 1.0;
    mats.glass1.young_modulus = 0.0;
    mats.glass1.shear_modulus = 0.0;
    mats.glass3.young_modulus = 0.0;
    mats.glass3.shear_modulus = 0.0;
  }

  const Matrix18x10 t = transformation_matrix(section);
  Eigen::Matrix<double, 18, 18> k_full = Eigen::Matrix<double, 18, 18>::Zero();
  Eigen::Matrix<double, 18, 18> m_full = Eigen::Matrix<double, 18, 18>::Zero();

  const LayerElastic* layer_mats[3] = {&mats.glass1, &mats.interlayer,
                                       &mats.glass3};
  const double hs[3] = {section.h1, section.h2, section.h3};
  for (int layer = 0; layer < 3; ++layer) {
    const ElementMatrices em = layer_element_matrices(
        *layer_mats[layer], hs[layer], section.b, element_length);
    k_full.block<6, 6>(6 * layer, 6 * layer) = em.stiffness;
    m_full.block<6, 6>(6 * layer, 6 * layer) = em.mass;
  }

  CondensedElement out;
  out.stiffness = t.transpose() * k_full * t;
  out.mass = t.transpose() * m_full * t;
  return out;
}

AssembledSystem assemble(const LaminatedBeam& beam, int elements_per_layer) {
  if (elements_per_layer < 2) {
    throw std::invalid_argument("assemble: need at least 2 elements");
  }
  beam.validate();

  const int n_elem = elements_per_layer;
  const int n_dof = kDofsPerNode * (n_elem + 1);
  const double le = beam.length / n_elem;

  const MaxwellChain chain = beam.interlayer.chain_at(beam.temperature);
  const double g20 = chain.instantaneous_modulus();

  LayerMaterials mats;
  mats.glass1 = {beam.glass1.young_modulus, beam.glass1.shear_modulus(),
                 beam.glass1.density};
  mats.glass3 = {beam.glass3.young_modulus, beam.glass3.shear_modulus(),
                 beam.glass3.density};
  mats.interlayer = {beam.interlayer.young_from_shear(g20), g20,
                     beam.interlayer.density};

  // uniform mesh, identical elements; the full element already carries the
  // interlayer at its instantaneous modulus, so it is the K0 contribution
  const CondensedElement full = condensed_element(beam.section, mats, le);
  const CondensedElement unit = condensed_element(beam.section, mats, le, true);

  std::vector<Eigen::Triplet<double>> tm, tk0, tkc;
  tm.reserve(static_cast<size_t>(n_elem) * 100);
  tk0.reserve(static_cast<size_t>(n_elem) * 100);
  tkc.reserve(static_cast<size_t>(n_elem) * 100);
  for (int e = 0; e < n_elem; ++e) {
    const int base = kDofsPerNode * e;
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        tm.emplace_back(base + i, base + j, full.mass(i, j));
        tk0.emplace_back(base + i, base + j, full.stiffness(i, j));
        tkc.emplace_back(base + i, base + j, unit.stiffness(i, j));
      }
    }
  }

  AssembledSystem sys;
  sys.dof_count = n_dof;
  sys.mass.resize(n_dof, n_dof);
  sys.elastic_stiffness.resize(n_dof, n_dof);
  sys.unit_interlayer.resize(n_dof, n_dof);
  sys.mass.setFromTriplets(tm.begin(), tm.end());
  sys.elastic_stiffness.setFromTriplets(tk0.begin(), tk0.end());
  sys.unit_interlayer.setFromTriplets(tkc.begin(), tkc.end());
  sys.node_x.resize(n_elem + 1);
  for (int i = 0; i <= n_elem; ++i) sys.node_x[i] = i * le;
  return sys;
}

namespace {

SparseMatrixD eliminate(const SparseMatrixD& a, const std::vector<int>& keep) {
  const int m = static_cast<int>(keep.size());
  std::vector<int> map(a.rows(), -1);
  for (int i = 0; i < m; ++i) map[keep[i]] = i;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(a.nonZeros());
  for (int col = 0; col < a.outerSize(); ++col) {
    for (SparseMatrixD::InnerIterator it(a, col); it; ++it) {
      const int r = map[it.row()];
      const int c = map[it.col()];
      if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
    }
  }
  SparseMatrixD out(m, m);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

}  // namespace

AssembledSystem apply_bc(const AssembledSystem& system, BoundaryCondition bc) {
  const int n = system.dof_count;
  const int last = n - kDofsPerNode;  // first DOF of the right end node

  std::vector<int> drop;
  switch (bc) {
    case BoundaryCondition::SimplySupported:
      // w at both ends; u1 at the left end removes the axial rigid mode
      // without restraining the end rotation
      drop = {0, 1, last + 1};
      break;
    case BoundaryCondition::ClampedClamped:
      drop = {0, 1, 2, 3, 4, last, last + 1, last + 2, last + 3, last + 4};
      break;
    case BoundaryCondition::FreeFree:
      break;
  }

  std::unordered_set<int> dropped(drop.begin(), drop.end());
  std::vector<int> keep;
  keep.reserve(n - drop.size());
  for (int i = 0; i < n; ++i) {
    if (!dropped.count(i)) keep.push_back(i);
  }

  AssembledSystem out;
  out.dof_count = system.dof_count;
  out.constrained_dofs = drop;
  out.node_x = system.node_x;
  out.mass = eliminate(system.mass, keep);
  out.elastic_stiffness = eliminate(system.elastic_stiffness, keep);
  out.unit_interlayer = eliminate(system.unit_interlayer, keep);
  return out;
}

void write_coordinate_list(const SparseMatrixD& matrix, std::ostream& out) {
  out << matrix.rows() << " " << matrix.cols() << " " << matrix.nonZeros()
      << "\n";
  for (int col = 0; col < matrix.outerSize(); ++col) {
    for (SparseMatrixD::InnerIterator it(matrix, col); it; ++it) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n",
                    static_cast<int>(it.row()), static_cast<int>(it.col()),
                    it.value());
      out << buf;
    }
  }
}

}  // namespace lamvib
