#include "kleinz/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kz {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0, 1);
// below this imaginary part tau is first sent to -1/tau
constexpr double kModularThreshold = 0.05;

void check_tau(cplx tau) {
  if (!(tau.imag() > 0)) throw std::domain_error("theta/eta: Im(tau) must be positive");
}

cplx theta_series(cplx nu, cplx tau) {
  // Centre the sum on the dominant index so large Im(nu) does not cost accuracy.
  const double j0 = std::round(-nu.imag() / tau.imag());
  cplx sum = 0;
  double scale = 0;
  for (int k = 0;; ++k) {
    cplx part = 0;
    for (int s : {1, -1}) {
      if (k == 0 && s == -1) break;
      const double j = j0 + s * k;
      part += std::exp(kPi * I * (j * j * tau + 2.0 * j * nu));
    }
    sum += part;
    scale = std::max(scale, std::abs(sum));
    if (k > 2 && std::abs(part) < 1e-17 * scale) break;
    if (k > 100000) throw std::runtime_error("theta: series did not converge");
  }
  return sum;
}

}  // namespace

cplx theta(cplx nu, cplx tau) {
  check_tau(tau);
  if (tau.imag() < kModularThreshold) {
    // theta(nu|tau) = (-i tau)^(-1/2) exp(-pi i nu^2 / tau) theta(nu/tau | -1/tau)
    return std::exp(-kPi * I * nu * nu / tau) / std::sqrt(-I * tau) * theta_series(nu / tau, -1.0 / tau);
  }
  return theta_series(nu, tau);
}

cplx theta00(cplx nu, cplx tau) { return theta(nu, tau); }
cplx theta01(cplx nu, cplx tau) { return theta(nu + 0.5, tau); }
cplx theta10(cplx nu, cplx tau) { return std::exp(kPi * I * (nu + tau / 4.0)) * theta(nu + tau / 2.0, tau); }
cplx theta11(cplx nu, cplx tau) {
  return I * std::exp(kPi * I * (nu + tau / 4.0)) * theta(nu + tau / 2.0 + 0.5, tau);
}

cplx eta(cplx tau) {
  check_tau(tau);
  if (tau.imag() < kModularThreshold) return eta(-1.0 / tau) / std::sqrt(-I * tau);
  const cplx q = std::exp(2 * kPi * I * tau);
  cplx prod = 1, qj = q;
  for (int j = 1; std::abs(qj) > 1e-18; ++j) {
    prod *= 1.0 - qj;
    qj *= q;
    if (j > 100000) throw std::runtime_error("eta: product did not converge");
  }
  return std::exp(kPi * I * tau / 12.0) * prod;
}

double xi(double phi, double psi, cplx tau) {
  return std::abs(theta(phi * tau - psi, tau) * std::exp(kPi * I * tau * phi * phi) / eta(tau));
}

double xi_at(cplx u, cplx v, cplx tau) {
  // phi, psi are only defined mod 1; Xi does not depend on the choice
  const double phi = std::arg(-u) / (2 * kPi), psi = std::arg(-v) / (2 * kPi);
  return xi(phi, psi, tau);
}

}  // namespace kz
