#include "lamvib/modal.hpp"

#include <cmath>
#include <stdexcept>

namespace lamvib {

std::string to_string(Method method) {
  switch (method) {
    case Method::Cnm: return "cnm";
    case Method::Mse: return "mse";
    case Method::Det: return "det";
    case Method::Eet: return "eet";
    case Method::OracleFp: return "oracle";
  }
  throw std::logic_error("unreachable");
}

Method method_from_string(const std::string& text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::tolower(c)));
  if (t == "cnm") return Method::Cnm;
  if (t == "mse") return Method::Mse;
  if (t == "det") return Method::Det;
  if (t == "eet") return Method::Eet;
  if (t == "oracle") return Method::OracleFp;
  throw std::invalid_argument("unknown method '" + text + "'");
}

FrequencyLoss freq_and_loss(Complex omega_squared) {
  if (omega_squared.real() <= 0.0) {
    throw std::domain_error(
        "freq_and_loss: non-positive Re[omega^2], mode rejected");
  }
  return {std::sqrt(omega_squared.real()) / (2.0 * M_PI),
          omega_squared.imag() / omega_squared.real()};
}

}  // namespace lamvib
