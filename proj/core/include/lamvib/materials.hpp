#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lamvib {

using Complex = std::complex<double>;

/// One spring-dashpot unit of a generalized Maxwell chain. SI units (Pa, s).
struct MaxwellUnit {
  double shear_modulus;    // G_p > 0 [Pa]
  double relaxation_time;  // theta_p > 0 [s]
};

/// Generalized Maxwell chain: an elastic spring G_inf in parallel with P
/// Maxwell units. P = 0 describes a purely elastic material.
class MaxwellChain {
 public:
  MaxwellChain() = default;
  MaxwellChain(double long_term_modulus, std::vector<MaxwellUnit> units);

  double long_term_modulus() const { return g_inf_; }
  const std::vector<MaxwellUnit>& units() const { return units_; }
  bool elastic() const { return units_.empty(); }

  /// G_0 = G_inf + sum_p G_p (instantaneous shear modulus of the chain).
  double instantaneous_modulus() const;

  /// Relaxation modulus G(t) = G_inf + sum_p G_p exp(-t/theta_p), t >= 0.
  double relaxation_modulus(double time) const;

  /// Frequency-dependent part G*_fr(omega) = -sum_p G_p / (1 + i omega theta_p).
  /// For real omega this reproduces the storage/loss decomposition
  ///   Re = -sum G_p/(1 + omega^2 theta_p^2),
  ///   Im =  sum G_p omega theta_p/(1 + omega^2 theta_p^2);
  /// the same rational expression analytically continues to complex omega.
  Complex frequency_part(Complex omega) const;

  /// d G*_fr / d omega = sum_p G_p i theta_p / (1 + i omega theta_p)^2.
  Complex frequency_part_derivative(Complex omega) const;

  /// Complex shear modulus G*(omega) = G_0 + G*_fr(omega).
  Complex complex_modulus(Complex omega) const;

 private:
  double g_inf_ = 0.0;
  std::vector<MaxwellUnit> units_;
};

/// Williams-Landel-Ferry time-temperature shift,
/// log10 a_T = -c1 (T - T0) / (c2 + T - T0).
struct WlfShift {
  double reference_temperature;  // T0 [deg C]
  double c1;                     // [-]
  double c2;                     // [deg C]

  double shift_factor(double temperature) const;
};

/// Chain with every relaxation time multiplied by a_T(temperature).
MaxwellChain shifted_chain(const MaxwellChain& chain, const WlfShift& wlf,
                           double temperature);

struct GlassMaterial {
  double young_modulus;  // [Pa]
  double poisson_ratio;  // [-]
  double density;        // [kg/m^3]

  double shear_modulus() const {
    return young_modulus / (2.0 * (1.0 + poisson_ratio));
  }

  void validate() const;
};

/// Data temperature assumed for interlayers without WLF parameters.
inline constexpr double kDefaultDataTemperature = 25.0;  // [deg C]

struct InterlayerMaterial {
  std::string name;
  double density = 0.0;        // [kg/m^3]
  double poisson_ratio = 0.0;  // [-], constant by assumption
  MaxwellChain chain;
  std::optional<WlfShift> wlf;

  /// Chain valid at the requested ambient temperature. Without WLF data the
  /// material is usable only at kDefaultDataTemperature.
  MaxwellChain chain_at(double temperature) const;

  /// Young modulus consistent with a given shear modulus and constant nu.
  double young_from_shear(double shear_modulus) const {
    return 2.0 * (1.0 + poisson_ratio) * shear_modulus;
  }

  void validate() const;
};

/// Named material collection, serializable to/from JSON.
struct MaterialDatabase {
  std::map<std::string, GlassMaterial> glasses;
  std::map<std::string, InterlayerMaterial> interlayers;

  const GlassMaterial& glass(const std::string& name) const;
  const InterlayerMaterial& interlayer(const std::string& name) const;

  std::string to_json() const;
  static MaterialDatabase from_json(const std::string& text);
};

/// Built-in database: soda-lime glass plus the five interlayer datasets
/// (SGP_M, TPU_M, PVB_M, PVB_S, PVB_A).
const MaterialDatabase& builtin_database();

}  // namespace lamvib
