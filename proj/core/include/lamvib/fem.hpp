#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "lamvib/materials.hpp"

namespace lamvib {

using SparseMatrixD = Eigen::SparseMatrix<double>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Matrix10 = Eigen::Matrix<double, 10, 10>;
using Matrix18x10 = Eigen::Matrix<double, 18, 10>;

enum class BoundaryCondition { SimplySupported, ClampedClamped, FreeFree };

std::string to_string(BoundaryCondition bc);
BoundaryCondition bc_from_string(const std::string& text);

/// Layer thicknesses h1 (bottom glass), h2 (interlayer), h3 (top glass)
/// and common width b. SI units [m].
struct CrossSection {
  double h1;
  double h2;
  double h3;
  double b;

  void validate() const;
};

struct LaminatedBeam {
  double length;  // [m]
  CrossSection section;
  GlassMaterial glass1;
  GlassMaterial glass3;
  InterlayerMaterial interlayer;
  BoundaryCondition bc = BoundaryCondition::SimplySupported;
  double temperature = kDefaultDataTemperature;  // [deg C]

  void validate() const;
};

/// Elastic constants of one layer as used by the beam element.
struct LayerElastic {
  double young_modulus;  // [Pa]
  double shear_modulus;  // [Pa]
  double density;        // [kg/m^3]
};

struct LayerMaterials {
  LayerElastic glass1;
  LayerElastic interlayer;
  LayerElastic glass3;
};

struct ElementMatrices {
  Matrix6 stiffness;
  Matrix6 mass;
};

/// Linear two-node Timoshenko layer element with DOFs
/// (u_L, w_L, phi_L, u_R, w_R, phi_R). The rotation is measured so that the
/// axial fiber displacement is u + (z - z_mid) * phi and the shear strain is
/// w' + phi. Axial and bending terms use the exact 2-point rule, the shear
/// term 1-point reduced integration; the mass matrix is consistent and
/// includes rotary inertia.
ElementMatrices layer_element_matrices(const LayerElastic& mat, double h,
                                       double b, double element_length);

/// 18x10 condensation map from the 10 master DOFs
/// (u1, w1, phi1, u3, phi3) at the left then right node to the full 18-DOF
/// layer-major vector, enforcing the eight inter-layer adhesion conditions.
Matrix18x10 transformation_matrix(const CrossSection& section);

struct CondensedElement {
  Matrix10 stiffness;
  Matrix10 mass;
};

/// Three stacked layer elements projected onto the master DOFs. With
/// unit_interlayer_shear the stiffness carries only the interlayer built at
/// G = 1 Pa (and E = 2(1+nu2) Pa), i.e. the element contribution to Kc.
CondensedElement condensed_element(const CrossSection& section,
                                   const LayerMaterials& materials,
                                   double element_length,
                                   bool unit_interlayer_shear = false);

/// Global matrices of a discretized beam, 5 DOFs per node.
/// K(omega) = elastic_stiffness + G*_fr(omega) * unit_interlayer.
struct AssembledSystem {
  SparseMatrixD mass;              // M
  SparseMatrixD elastic_stiffness; // K0 (interlayer at instantaneous modulus)
  SparseMatrixD unit_interlayer;   // Kc (interlayer assembly at G = 1 Pa)
  int dof_count = 0;
  std::vector<int> constrained_dofs;  // original indices eliminated
  std::vector<double> node_x;

  int size() const { return static_cast<int>(mass.rows()); }
};

AssembledSystem assemble(const LaminatedBeam& beam, int elements_per_layer);

/// Row/column elimination of the supported DOFs. Per node the DOF order is
/// (u1, w, phi1, u3, phi3); simply supported pins w at both ends plus u1 at
/// the left end, clamped-clamped pins all five DOFs at both ends, free-free
/// leaves the system unconstrained.
AssembledSystem apply_bc(const AssembledSystem& system, BoundaryCondition bc);

/// Debug export: one "row col value" line per stored entry.
void write_coordinate_list(const SparseMatrixD& matrix, std::ostream& out);

}  // namespace lamvib
