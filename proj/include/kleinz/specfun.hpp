// Jacobi theta functions, Dedekind eta and the function Xi entering the
// finite-size expansion of products of P over roots of unity.
#pragma once

#include <complex>

namespace kz {

using cplx = std::complex<double>;

// theta(nu|tau) = sum_j exp(pi i (j^2 tau + 2 j nu)), Im tau > 0.
cplx theta(cplx nu, cplx tau);
cplx theta00(cplx nu, cplx tau);
cplx theta01(cplx nu, cplx tau);
cplx theta10(cplx nu, cplx tau);
cplx theta11(cplx nu, cplx tau);

cplx eta(cplx tau);

// Xi(-exp(2 pi i phi), -exp(2 pi i psi) | tau)
double xi(double phi, double psi, cplx tau);
// Same, from the two unit complex numbers u = -exp(2 pi i phi), v = -exp(2 pi i psi).
double xi_at(cplx u, cplx v, cplx tau);

}  // namespace kz
