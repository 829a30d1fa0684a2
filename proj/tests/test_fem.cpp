#include "lamvib/fem.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "lamvib/eigensolvers.hpp"
#include "test_util.hpp"

using namespace lamvib;
using lamvib::testing::assemble_single_layer;
using lamvib::testing::drop_rows_cols;
using lamvib::testing::elastic_interlayer;
using lamvib::testing::standard_beam;

namespace {

const LayerElastic kGlassLayer{72e9, 72e9 / (2.0 * 1.22), 2500.0};

CrossSection standard_section() { return {10e-3, 0.76e-3, 10e-3, 0.1}; }

LayerMaterials all_glass_materials() {
  return {kGlassLayer, kGlassLayer, kGlassLayer};
}

}  // namespace

TEST(LayerElement, RigidModesInStiffnessKernel) {
  const auto em = layer_element_matrices(kGlassLayer, 0.02, 0.1, 0.005);
  Eigen::Matrix<double, 6, 1> u_const, w_const, rotation;
  u_const << 1, 0, 0, 1, 0, 0;
  w_const << 0, 1, 0, 0, 1, 0;
  // rigid rotation: w linear, phi constant, gamma = w' + phi = 0
  rotation << 0, 0, 1, 0, -0.005, 1;
  const double scale = em.stiffness.norm();
  EXPECT_LT((em.stiffness * u_const).norm(), 1e-12 * scale);
  EXPECT_LT((em.stiffness * w_const).norm(), 1e-12 * scale);
  EXPECT_LT((em.stiffness * rotation).norm(), 1e-12 * scale);
}

TEST(LayerElement, MassConservation) {
  const double h = 0.015, b = 0.08, le = 0.01, rho = 1234.0;
  const auto em = layer_element_matrices({1e9, 4e8, rho}, h, b, le);
  Eigen::Matrix<double, 6, 1> w_const;
  w_const << 0, 1, 0, 0, 1, 0;
  EXPECT_NEAR(w_const.dot(em.mass * w_const), rho * h * b * le, 1e-12);
  Eigen::Matrix<double, 6, 1> u_const;
  u_const << 1, 0, 0, 1, 0, 0;
  EXPECT_NEAR(u_const.dot(em.mass * u_const), rho * h * b * le, 1e-12);
}

TEST(LayerElement, CantileverStaticDeflection) {
  // clamped-free single layer under a transverse tip load
  const double h = 0.02, b = 0.1, length = 1.0, load = 1000.0;
  const int elements = 50;
  const auto beam = assemble_single_layer(kGlassLayer, h, b, length, elements);
  const Eigen::MatrixXd k = drop_rows_cols(beam.stiffness, {0, 1, 2});

  Eigen::VectorXd f = Eigen::VectorXd::Zero(k.rows());
  f[f.size() - 2] = load;  // w at the free end
  const Eigen::VectorXd d = k.ldlt().solve(f);
  const double tip = d[d.size() - 2];

  const double inertia = b * h * h * h / 12.0;
  const double area = b * h;
  // element shear term uses no correction factor (ks = 1)
  const double expected =
      load * std::pow(length, 3) / (3.0 * kGlassLayer.young_modulus * inertia) +
      load * length / (kGlassLayer.shear_modulus * area);
  EXPECT_NEAR(tip, expected, 0.05 * expected);
}

TEST(Transformation, PrintedEntries) {
  const CrossSection s = standard_section();
  const auto t = transformation_matrix(s);
  // u2 row couples (u1, phi1, u3, phi3) with (1/2, h1/4, 1/2, -h3/4)
  EXPECT_DOUBLE_EQ(t(6, 0), 0.5);
  EXPECT_DOUBLE_EQ(t(6, 2), s.h1 / 4.0);
  EXPECT_DOUBLE_EQ(t(6, 3), 0.5);
  EXPECT_DOUBLE_EQ(t(6, 4), -s.h3 / 4.0);
  // right-node twin
  EXPECT_DOUBLE_EQ(t(9, 5), 0.5);
  EXPECT_DOUBLE_EQ(t(9, 7), s.h1 / 4.0);
  EXPECT_DOUBLE_EQ(t(9, 8), 0.5);
  EXPECT_DOUBLE_EQ(t(9, 9), -s.h3 / 4.0);
}

TEST(Transformation, CompatibilityResiduals) {
  const CrossSection s{15e-3, 1.52e-3, 5e-3, 0.1};
  const auto t = transformation_matrix(s);

  std::mt19937 rng(3);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::Matrix<double, 10, 1> master;
    for (int i = 0; i < 10; ++i) master[i] = dist(rng);
    const Eigen::Matrix<double, 18, 1> full = t * master;

    for (int node = 0; node < 2; ++node) {
      const int o = 3 * node;  // column offset inside each layer block
      const double u1 = full[0 + o], w1 = full[1 + o], p1 = full[2 + o];
      const double u2 = full[6 + o], w2 = full[7 + o], p2 = full[8 + o];
      const double u3 = full[12 + o], w3 = full[13 + o], p3 = full[14 + o];
      EXPECT_NEAR(u1 + s.h1 / 2 * p1, u2 - s.h2 / 2 * p2, 1e-14);
      EXPECT_NEAR(u2 + s.h2 / 2 * p2, u3 - s.h3 / 2 * p3, 1e-14);
      EXPECT_NEAR(w1, w2, 1e-14);
      EXPECT_NEAR(w2, w3, 1e-14);
    }
  }
}

TEST(Transformation, SharedDeflection) {
  const CrossSection s = standard_section();
  const auto t = transformation_matrix(s);
  Eigen::Matrix<double, 10, 1> master = Eigen::Matrix<double, 10, 1>::Zero();
  master[1] = 0.7;  // w at left node
  const Eigen::Matrix<double, 18, 1> full = t * master;
  EXPECT_DOUBLE_EQ(full[7], 0.7);   // w2L
  EXPECT_DOUBLE_EQ(full[13], 0.7);  // w3L
}

TEST(CondensedElement, SymmetryAndDefiniteness) {
  const CrossSection s = standard_section();
  const auto ce = condensed_element(s, all_glass_materials(), 0.005);

  EXPECT_LT((ce.mass - ce.mass.transpose()).norm(), 1e-12 * ce.mass.norm());
  EXPECT_LT((ce.stiffness - ce.stiffness.transpose()).norm(),
            1e-12 * ce.stiffness.norm());

  const Eigen::SelfAdjointEigenSolver<Matrix10> es(ce.mass);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12 * es.eigenvalues().maxCoeff());

  Eigen::Matrix<double, 10, 1> rigid = Eigen::Matrix<double, 10, 1>::Zero();
  rigid[0] = rigid[3] = rigid[5] = rigid[8] = 1.0;  // u1 = u3 = const
  EXPECT_LT((ce.stiffness * rigid).norm(), 1e-12 * ce.stiffness.norm());
}

TEST(CondensedElement, UnitInterlayerScalesLinearly) {
  const CrossSection s = standard_section();
  LayerMaterials mats = all_glass_materials();
  const double g2 = 5.0e6;
  mats.interlayer = {2.0 * (1.0 + 0.49) * g2, g2, 1100.0};

  const auto unit = condensed_element(s, mats, 0.005, true);
  LayerMaterials only_foil = mats;
  only_foil.glass1 = {0.0, 0.0, kGlassLayer.density};
  only_foil.glass3 = {0.0, 0.0, kGlassLayer.density};
  const auto foil = condensed_element(s, only_foil, 0.005);

  // the interlayer element stiffness is exactly G2 times the unit assembly
  EXPECT_LT((foil.stiffness - g2 * unit.stiffness).norm(),
            1e-12 * foil.stiffness.norm());
}

TEST(CondensedElement, MonolithicEquivalence) {
  // with interlayer := glass the condensed sandwich admits the exact
  // monolith kinematics: the embedded monolith mode reproduces the monolith
  // Rayleigh quotient to machine precision, and the first bending frequency
  // agrees to the zigzag relaxation (~3e-4), not to machine precision
  const CrossSection s = standard_section();
  const double h = s.h1 + s.h2 + s.h3;
  const int elements = 60;
  const double length = 1.0;

  LaminatedBeam beam = standard_beam("PVB_M", BoundaryCondition::SimplySupported);
  InterlayerMaterial glassy;
  glassy.name = "glassy";
  glassy.density = kGlassLayer.density;
  glassy.poisson_ratio = 0.22;
  glassy.chain = MaxwellChain(kGlassLayer.shear_modulus, {});
  beam.interlayer = glassy;

  const AssembledSystem sandwich = apply_bc(assemble(beam, elements), beam.bc);

  const auto mono = assemble_single_layer(kGlassLayer, h, s.b, length, elements);
  const Eigen::MatrixXd k3 =
      drop_rows_cols(mono.stiffness, {0, 1, 3 * elements + 1});
  const Eigen::MatrixXd m3 =
      drop_rows_cols(mono.mass, {0, 1, 3 * elements + 1});
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(k3, m3);
  const double lambda_mono = es.eigenvalues()[0];

  const auto modes = real_modes(sandwich, 1, SolverSettings{});
  EXPECT_NEAR(modes[0].omega_squared, lambda_mono, 1e-3 * lambda_mono);

  // exact embedding identity on the unconstrained matrices
  const AssembledSystem free_sys = assemble(beam, elements);
  Eigen::VectorXd mode3 = Eigen::VectorXd::Zero(mono.stiffness.rows());
  {
    std::vector<int> keep;
    const std::vector<int> drop = {0, 1, 3 * elements + 1};
    for (int i = 0; i < mono.stiffness.rows(); ++i) {
      if (std::find(drop.begin(), drop.end(), i) == drop.end()) {
        keep.push_back(i);
      }
    }
    for (size_t i = 0; i < keep.size(); ++i) {
      mode3[keep[i]] = es.eigenvectors().col(0)[i];
    }
  }
  const double z1 = -(s.h1 + s.h2) / 2.0;
  const double z3 = (s.h2 + s.h3) / 2.0;
  Eigen::VectorXd embedded = Eigen::VectorXd::Zero(free_sys.dof_count);
  for (int node = 0; node <= elements; ++node) {
    const double uc = mode3[3 * node];
    const double w = mode3[3 * node + 1];
    const double phi = mode3[3 * node + 2];
    embedded[5 * node + 0] = uc + z1 * phi;
    embedded[5 * node + 1] = w;
    embedded[5 * node + 2] = phi;
    embedded[5 * node + 3] = uc + z3 * phi;
    embedded[5 * node + 4] = phi;
  }
  const double num = embedded.dot(free_sys.elastic_stiffness * embedded);
  const double den = embedded.dot(free_sys.mass * embedded);
  EXPECT_NEAR(num / den, lambda_mono, 1e-9 * lambda_mono);
}

TEST(Assemble, CountsAndMass) {
  const LaminatedBeam beam =
      standard_beam("PVB_M", BoundaryCondition::FreeFree);
  const int elements = 200;
  const AssembledSystem sys = assemble(beam, elements);
  EXPECT_EQ(sys.dof_count, 5 * (elements + 1));
  EXPECT_EQ(sys.mass.rows(), 1005);

  // total translational mass via the rigid w vector
  Eigen::VectorXd w_rigid = Eigen::VectorXd::Zero(sys.dof_count);
  for (int node = 0; node <= elements; ++node) w_rigid[5 * node + 1] = 1.0;
  const double total = w_rigid.dot(sys.mass * w_rigid);
  const auto& s = beam.section;
  const double expected =
      s.b * beam.length *
      (2500.0 * s.h1 + 1100.0 * s.h2 + 2500.0 * s.h3);
  EXPECT_NEAR(total, expected, 1e-10 * expected);

  EXPECT_THROW(assemble(beam, 1), std::invalid_argument);
}

TEST(Assemble, SymmetryAndSemidefiniteness) {
  const LaminatedBeam beam =
      standard_beam("SGP_M", BoundaryCondition::SimplySupported);
  const AssembledSystem sys = assemble(beam, 12);

  const auto sym_err = [](const SparseMatrixD& a) {
    return (Eigen::MatrixXd(a) - Eigen::MatrixXd(a).transpose()).norm() /
           Eigen::MatrixXd(a).norm();
  };
  EXPECT_LT(sym_err(sys.mass), 1e-12);
  EXPECT_LT(sym_err(sys.elastic_stiffness), 1e-12);
  EXPECT_LT(sym_err(sys.unit_interlayer), 1e-12);

  const Eigen::MatrixXd m(sys.mass);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> mes(m);
  EXPECT_GT(mes.eigenvalues().minCoeff(), 0.0);

  const Eigen::MatrixXd kc(sys.unit_interlayer);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> kces(kc);
  EXPECT_GE(kces.eigenvalues().minCoeff(),
            -1e-10 * kces.eigenvalues().maxCoeff());
}

TEST(Assemble, LongTermStiffnessIdentity) {
  // K0 + G*_fr(0) Kc must match an assembly built with the long-term
  // modulus directly
  LaminatedBeam beam = standard_beam("PVB_M", BoundaryCondition::SimplySupported);
  const AssembledSystem sys = assemble(beam, 10);
  const MaxwellChain chain = beam.interlayer.chain_at(beam.temperature);

  LaminatedBeam longterm = beam;
  longterm.interlayer = elastic_interlayer(chain.long_term_modulus());
  const AssembledSystem ref = assemble(longterm, 10);

  const double gfr0 = chain.frequency_part(Complex(0.0, 0.0)).real();
  const Eigen::MatrixXd lhs =
      Eigen::MatrixXd(sys.elastic_stiffness) +
      gfr0 * Eigen::MatrixXd(sys.unit_interlayer);
  const Eigen::MatrixXd rhs(ref.elastic_stiffness);
  EXPECT_LT((lhs - rhs).norm(), 1e-10 * rhs.norm());
}

TEST(ApplyBc, ConstraintCounts) {
  const LaminatedBeam beam =
      standard_beam("PVB_M", BoundaryCondition::ClampedClamped);
  const int elements = 8;
  const AssembledSystem sys = assemble(beam, elements);

  const AssembledSystem cc = apply_bc(sys, BoundaryCondition::ClampedClamped);
  EXPECT_EQ(cc.size(), 5 * (elements + 1) - 10);

  const AssembledSystem ss = apply_bc(sys, BoundaryCondition::SimplySupported);
  EXPECT_EQ(ss.size(), 5 * (elements + 1) - 3);

  const AssembledSystem ff = apply_bc(sys, BoundaryCondition::FreeFree);
  EXPECT_EQ(ff.size(), 5 * (elements + 1));
  EXPECT_TRUE(ff.constrained_dofs.empty());
}

TEST(ApplyBc, FreeFreeNullSpace) {
  const LaminatedBeam beam = standard_beam("PVB_M", BoundaryCondition::FreeFree);
  const AssembledSystem sys =
      apply_bc(assemble(beam, 10), BoundaryCondition::FreeFree);

  const Eigen::MatrixXd k(sys.elastic_stiffness);
  const Eigen::MatrixXd m(sys.mass);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(k, m);
  const double first_elastic = es.eigenvalues()[3];
  EXPECT_LT(std::abs(es.eigenvalues()[0]), 1e-6 * first_elastic);
  EXPECT_LT(std::abs(es.eigenvalues()[1]), 1e-6 * first_elastic);
  EXPECT_LT(std::abs(es.eigenvalues()[2]), 1e-6 * first_elastic);
  EXPECT_GT(es.eigenvalues()[3], 1e3);
}

TEST(ApplyBc, SimplySupportedRemovesVerticalTranslation) {
  const LaminatedBeam beam =
      standard_beam("PVB_M", BoundaryCondition::SimplySupported);
  const AssembledSystem sys =
      apply_bc(assemble(beam, 10), BoundaryCondition::SimplySupported);
  const Eigen::MatrixXd k(sys.elastic_stiffness);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(CoordinateList, RoundTrips) {
  const LaminatedBeam beam = standard_beam("PVB_M", BoundaryCondition::FreeFree);
  const AssembledSystem sys = assemble(beam, 3);
  std::ostringstream out;
  write_coordinate_list(sys.mass, out);

  std::istringstream in(out.str());
  int rows, cols;
  long nnz;
  in >> rows >> cols >> nnz;
  EXPECT_EQ(rows, sys.mass.rows());
  EXPECT_EQ(nnz, sys.mass.nonZeros());
  int r, c;
  double v;
  in >> r >> c >> v;
  EXPECT_DOUBLE_EQ(v, sys.mass.coeff(r, c));
}
