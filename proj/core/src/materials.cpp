#include "lamvib/materials.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace lamvib {

namespace {

constexpr double kMPa = 1.0e6;
constexpr double kGPa = 1.0e9;

void check_pole(const Complex& denom, const Complex& omega, double theta) {
  const double mag = std::abs(denom);
  if (mag < 1e-14 * std::max(1.0, std::abs(omega) * theta)) {
    throw std::domain_error("MaxwellChain: 1 + i*omega*theta vanishes (pole)");
  }
}

}  // namespace

MaxwellChain::MaxwellChain(double long_term_modulus,
                           std::vector<MaxwellUnit> units)
    : g_inf_(long_term_modulus), units_(std::move(units)) {
  if (g_inf_ < 0.0) {
    throw std::invalid_argument("MaxwellChain: negative long-term modulus");
  }
  double sum = g_inf_;
  for (const auto& u : units_) {
    if (u.shear_modulus <= 0.0 || u.relaxation_time <= 0.0) {
      throw std::invalid_argument(
          "MaxwellChain: unit moduli and relaxation times must be positive");
    }
    sum += u.shear_modulus;
  }
  if (sum <= 0.0) {
    throw std::invalid_argument(
        "MaxwellChain: instantaneous modulus must be positive");
  }
}

double MaxwellChain::instantaneous_modulus() const {
  double sum = g_inf_;
  for (const auto& u : units_) sum += u.shear_modulus;
  return sum;
}

double MaxwellChain::relaxation_modulus(double time) const {
  if (time < 0.0) {
    throw std::invalid_argument("relaxation_modulus: negative time");
  }
  double sum = g_inf_;
  for (const auto& u : units_) {
    sum += u.shear_modulus * std::exp(-time / u.relaxation_time);
  }
  return sum;
}

Complex MaxwellChain::frequency_part(Complex omega) const {
  Complex acc(0.0, 0.0);
  for (const auto& u : units_) {
    const Complex denom =
        1.0 + Complex(0.0, 1.0) * omega * u.relaxation_time;
    check_pole(denom, omega, u.relaxation_time);
    acc -= u.shear_modulus / denom;
  }
  return acc;
}

Complex MaxwellChain::frequency_part_derivative(Complex omega) const {
  Complex acc(0.0, 0.0);
  for (const auto& u : units_) {
    const Complex denom =
        1.0 + Complex(0.0, 1.0) * omega * u.relaxation_time;
    check_pole(denom, omega, u.relaxation_time);
    acc += u.shear_modulus * Complex(0.0, u.relaxation_time) / (denom * denom);
  }
  return acc;
}

Complex MaxwellChain::complex_modulus(Complex omega) const {
  return instantaneous_modulus() + frequency_part(omega);
}

double WlfShift::shift_factor(double temperature) const {
  const double dt = temperature - reference_temperature;
  const double denom = c2 + dt;
  if (std::abs(denom) < 1e-12 * std::max(1.0, std::abs(c2))) {
    throw std::domain_error("WlfShift: c2 + T - T0 vanishes");
  }
  return std::pow(10.0, -c1 * dt / denom);
}

MaxwellChain shifted_chain(const MaxwellChain& chain, const WlfShift& wlf,
                           double temperature) {
  const double at = wlf.shift_factor(temperature);
  std::vector<MaxwellUnit> units = chain.units();
  for (auto& u : units) u.relaxation_time *= at;
  return MaxwellChain(chain.long_term_modulus(), std::move(units));
}

void GlassMaterial::validate() const {
  if (young_modulus <= 0.0 || density <= 0.0) {
    throw std::invalid_argument("GlassMaterial: E and rho must be positive");
  }
  if (poisson_ratio < 0.0 || poisson_ratio >= 0.5) {
    throw std::invalid_argument("GlassMaterial: nu must be in [0, 0.5)");
  }
}

MaxwellChain InterlayerMaterial::chain_at(double temperature) const {
  if (wlf) {
    return shifted_chain(chain, *wlf, temperature);
  }
  if (std::abs(temperature - kDefaultDataTemperature) > 1e-9) {
    throw std::invalid_argument(
        "InterlayerMaterial '" + name + "': no WLF data, usable only at " +
        std::to_string(kDefaultDataTemperature) + " degC");
  }
  return chain;
}

void InterlayerMaterial::validate() const {
  if (density <= 0.0) {
    throw std::invalid_argument("InterlayerMaterial: rho must be positive");
  }
  if (poisson_ratio <= 0.0 || poisson_ratio >= 0.5) {
    throw std::invalid_argument("InterlayerMaterial: nu must be in (0, 0.5)");
  }
}

const GlassMaterial& MaterialDatabase::glass(const std::string& name) const {
  auto it = glasses.find(name);
  if (it == glasses.end()) {
    throw std::invalid_argument("unknown glass material '" + name + "'");
  }
  return it->second;
}

const InterlayerMaterial& MaterialDatabase::interlayer(
    const std::string& name) const {
  auto it = interlayers.find(name);
  if (it == interlayers.end()) {
    throw std::invalid_argument("unknown interlayer material '" + name + "'");
  }
  return it->second;
}

namespace {

using nlohmann::json;

json chain_to_json(const MaxwellChain& chain) {
  json units = json::array();
  for (const auto& u : chain.units()) {
    units.push_back({{"g_mpa", u.shear_modulus / kMPa},
                     {"theta_s", u.relaxation_time}});
  }
  return units;
}

MaxwellChain chain_from_json(const json& j) {
  const double g_inf = j.at("g_inf_mpa").get<double>() * kMPa;
  std::vector<MaxwellUnit> units;
  const double g20 =
      j.contains("g20_mpa") ? j.at("g20_mpa").get<double>() * kMPa : 0.0;
  for (const auto& ju : j.at("units")) {
    double g;
    if (ju.contains("g_mpa")) {
      g = ju.at("g_mpa").get<double>() * kMPa;
    } else {
      if (g20 <= 0.0) {
        throw std::invalid_argument(
            "material JSON: g_ratio units require g20_mpa");
      }
      g = ju.at("g_ratio").get<double>() * g20;
    }
    units.push_back({g, ju.at("theta_s").get<double>()});
  }
  return MaxwellChain(g_inf, std::move(units));
}

}  // namespace

std::string MaterialDatabase::to_json() const {
  json j;
  j["glasses"] = json::array();
  for (const auto& [name, g] : glasses) {
    j["glasses"].push_back({{"name", name},
                            {"young_gpa", g.young_modulus / kGPa},
                            {"poisson", g.poisson_ratio},
                            {"density", g.density}});
  }
  j["interlayers"] = json::array();
  for (const auto& [name, m] : interlayers) {
    json jm = {{"name", name},
               {"density", m.density},
               {"poisson", m.poisson_ratio},
               {"g_inf_mpa", m.chain.long_term_modulus() / kMPa},
               {"units", chain_to_json(m.chain)}};
    if (m.wlf) {
      jm["wlf"] = {{"t0_c", m.wlf->reference_temperature},
                   {"c1", m.wlf->c1},
                   {"c2", m.wlf->c2}};
    }
    j["interlayers"].push_back(jm);
  }
  return j.dump(2);
}

MaterialDatabase MaterialDatabase::from_json(const std::string& text) {
  const json j = json::parse(text);
  MaterialDatabase db;
  for (const auto& jg : j.value("glasses", json::array())) {
    GlassMaterial g{jg.at("young_gpa").get<double>() * kGPa,
                    jg.at("poisson").get<double>(),
                    jg.at("density").get<double>()};
    g.validate();
    db.glasses[jg.at("name").get<std::string>()] = g;
  }
  for (const auto& jm : j.value("interlayers", json::array())) {
    InterlayerMaterial m;
    m.name = jm.at("name").get<std::string>();
    m.density = jm.at("density").get<double>();
    m.poisson_ratio = jm.at("poisson").get<double>();
    m.chain = chain_from_json(jm);
    if (jm.contains("wlf")) {
      const auto& jw = jm.at("wlf");
      m.wlf = WlfShift{jw.at("t0_c").get<double>(), jw.at("c1").get<double>(),
                       jw.at("c2").get<double>()};
    }
    m.validate();
    db.interlayers[m.name] = m;
  }
  return db;
}

namespace {

// Tabulated datasets. Ratio-based chains (SGP_M, TPU_M, PVB_M) store
// G_p = ratio * G_0 with the published ratios kept verbatim; the published
// total is not re-normalized, so sum(G_p) + G_inf reproduces the table
// rounding, not the printed G_0 exactly.
MaxwellChain ratio_chain(double g_inf_mpa, double g20_mpa,
                         const std::vector<double>& ratios) {
  std::vector<MaxwellUnit> units;
  units.reserve(ratios.size());
  double theta = 1e-6;
  for (double r : ratios) {
    units.push_back({r * g20_mpa * kMPa, theta});
    theta *= 10.0;
  }
  return MaxwellChain(g_inf_mpa * kMPa, std::move(units));
}

MaxwellChain table_chain(double g_inf_mpa,
                         const std::vector<std::pair<double, double>>& rows) {
  std::vector<MaxwellUnit> units;
  units.reserve(rows.size());
  for (const auto& [g_mpa, theta_s] : rows) {
    units.push_back({g_mpa * kMPa, theta_s});
  }
  return MaxwellChain(g_inf_mpa * kMPa, std::move(units));
}

MaterialDatabase make_builtin() {
  MaterialDatabase db;

  db.glasses["glass"] = GlassMaterial{72.0 * kGPa, 0.22, 2500.0};

  InterlayerMaterial sgp;
  sgp.name = "SGP_M";
  sgp.density = 950.0;
  sgp.poisson_ratio = 0.49;
  sgp.chain = ratio_chain(
      1.8, 274.1,
      {0.07767, 0.03764, 0.05631, 0.06501, 0.07409, 0.09317, 0.11867, 0.20551,
       0.18131, 0.05361, 0.01856, 0.01180});
  db.interlayers[sgp.name] = sgp;

  InterlayerMaterial tpu;
  tpu.name = "TPU_M";
  tpu.density = 1070.0;
  tpu.poisson_ratio = 0.49;
  tpu.chain = ratio_chain(
      1.56, 94.6,
      {0.42077, 0.18113, 0.19280, 0.09969, 0.04750, 0.01928, 0.00903, 0.00414,
       0.00307, 0.00230, 0.00371, 0.00004});
  db.interlayers[tpu.name] = tpu;

  InterlayerMaterial pvb_m;
  pvb_m.name = "PVB_M";
  pvb_m.density = 1100.0;
  pvb_m.poisson_ratio = 0.49;
  pvb_m.chain = ratio_chain(
      0.22, 213.6,
      {0.39262, 0.19225, 0.20957, 0.12621, 0.05694, 0.01536, 0.00325, 0.00103,
       0.00077, 0.00010, 0.00029, 0.00053});
  db.interlayers[pvb_m.name] = pvb_m;

  InterlayerMaterial pvb_s;
  pvb_s.name = "PVB_S";
  pvb_s.density = 1100.0;
  pvb_s.poisson_ratio = 0.49;
  pvb_s.chain = table_chain(
      0.0, {{51.25, 4.273e-7},
            {31.75, 3.546e-6},
            {12.80, 1.330e-5},
            {32.90, 4.279e-5},
            {39.90, 2.984e-4},
            {37.80, 2.170e-3},
            {21.94, 8.274e-3},
            {25.01, 2.937e-2},
            {27.58, 1.658e-1},
            {11.98, 7.774e-1},
            {6.345, 3.293e0},
            {2.692, 1.698e1},
            {8.718, 2.041e2},
            {0.6969, 3.588e4}});
  pvb_s.wlf = WlfShift{20.46, 37.30, 203.61};
  db.interlayers[pvb_s.name] = pvb_s;

  InterlayerMaterial pvb_a;
  pvb_a.name = "PVB_A";
  pvb_a.density = 1100.0;
  pvb_a.poisson_ratio = 0.49;
  pvb_a.chain = table_chain(
      0.0, {{0.514628, 9.51e-2},
            {0.280116, 4.71e-1},
            {0.144282, 2.72e0},
            {0.086904, 2.11e1},
            {0.076190, 2.21e2},
            {0.092202, 2.12e3},
            {0.098780, 1.74e4},
            {0.085555, 1.31e5},
            {0.070251, 1.05e6},
            {0.107653, 2.99e7}});
  pvb_a.wlf = WlfShift{30.0, 12.5, 89.0};
  db.interlayers[pvb_a.name] = pvb_a;

  return db;
}

}  // namespace

const MaterialDatabase& builtin_database() {
  static const MaterialDatabase db = make_builtin();
  return db;
}

}  // namespace lamvib
