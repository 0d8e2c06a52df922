#include "kleinz/poly.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "kleinz/orient.hpp"

namespace kz {

namespace {

constexpr double kPi = std::numbers::pi;

cplx unit(double theta) { return std::polar(1.0, theta); }

// prod_{j=0}^{k-1} (e - j), the falling factorial used for derivatives of z^e
double falling(int e, int k) {
  double r = 1;
  for (int j = 0; j < k; ++j) r *= (e - j);
  return r;
}

}  // namespace

cplx LaurentPoly::coeff(int k) const {
  if (k < lo || k > hi()) return {0, 0};
  return c[k - lo];
}

cplx LaurentPoly::operator()(cplx z) const {
  // Horner on the polynomial part, then shift.
  cplx s(0, 0);
  for (size_t k = c.size(); k-- > 0;) s = s * z + c[k];
  return s * cpow(z, lo);
}

cplx LaurentPoly::derivative(cplx z, int k) const {
  cplx s(0, 0);
  for (size_t j = 0; j < c.size(); ++j) {
    const int e = lo + static_cast<int>(j);
    const double f = falling(e, k);
    if (f != 0) s += c[j] * f * cpow(z, e - k);
  }
  return s;
}

void LaurentPoly::trim(double rel) {
  double mx = 0;
  for (auto& x : c) mx = std::max(mx, std::abs(x));
  const double tol = rel * mx;
  if (mx == 0) {
    c.clear();
    lo = 0;
    return;
  }
  size_t b = 0, e = c.size();
  while (b < e && std::abs(c[b]) <= tol) ++b;
  while (e > b && std::abs(c[e - 1]) <= tol) --e;
  c = std::vector<cplx>(c.begin() + b, c.begin() + e);
  lo += static_cast<int>(b);
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  LaurentPoly r;
  if (zero() || o.zero()) return r;
  r.lo = lo + o.lo;
  r.c.assign(c.size() + o.c.size() - 1, 0);
  for (size_t i = 0; i < c.size(); ++i)
    for (size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
  return r;
}

LaurentPoly LaurentPoly::scaled(cplx s) const {
  LaurentPoly r = *this;
  for (auto& x : r.c) x *= s;
  return r;
}

LaurentPoly LaurentPoly::reversed() const {
  LaurentPoly r;
  if (zero()) return r;
  r.lo = -hi();
  r.c.assign(c.rbegin(), c.rend());
  return r;
}

std::string LaurentPoly::str(int digits) const {
  std::ostringstream os;
  os << std::setprecision(digits);
  bool first = true;
  for (size_t j = 0; j < c.size(); ++j) {
    if (std::abs(c[j]) == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << c[j].real() << (c[j].imag() < 0 ? "-" : "+") << std::abs(c[j].imag()) << "i)";
    const int e = lo + static_cast<int>(j);
    if (e != 0) os << "z^" << e;
  }
  if (first) os << "0";
  return os.str();
}

double BiLaurentPoly::coeff(int i, int j) const {
  auto it = a.find({i, j});
  return it == a.end() ? 0.0 : it->second;
}

cplx BiLaurentPoly::operator()(cplx z, cplx w) const {
  cplx s(0, 0);
  for (const auto& [ij, v] : a) s += v * cpow(z, ij.first) * cpow(w, ij.second);
  return s;
}

cplx BiLaurentPoly::derivative(cplx z, cplx w, int p, int q) const {
  cplx s(0, 0);
  for (const auto& [ij, v] : a) {
    const double f = falling(ij.first, p) * falling(ij.second, q);
    if (f != 0) s += v * f * cpow(z, ij.first - p) * cpow(w, ij.second - q);
  }
  return s;
}

LaurentPoly BiLaurentPoly::in_w(cplx z) const {
  LaurentPoly r;
  if (a.empty()) return r;
  int lo = 1 << 30, hi = -(1 << 30);
  for (const auto& [ij, v] : a) {
    lo = std::min(lo, ij.second);
    hi = std::max(hi, ij.second);
  }
  r.lo = lo;
  r.c.assign(hi - lo + 1, 0);
  for (const auto& [ij, v] : a) r.c[ij.second - lo] += v * cpow(z, ij.first);
  return r;
}

LaurentPoly BiLaurentPoly::in_z(cplx w) const {
  BiLaurentPoly t;
  for (const auto& [ij, v] : a) t.a[{ij.second, ij.first}] = v;
  return t.in_w(w);
}

double BiLaurentPoly::max_abs() const {
  double m = 0;
  for (const auto& [ij, v] : a) m = std::max(m, std::abs(v));
  return m;
}

void BiLaurentPoly::trim(double rel) {
  const double tol = rel * max_abs();
  for (auto it = a.begin(); it != a.end();) {
    if (std::abs(it->second) <= tol)
      it = a.erase(it);
    else
      ++it;
  }
}

BiLaurentPoly BiLaurentPoly::scaled(double s) const {
  BiLaurentPoly r = *this;
  for (auto& [ij, v] : r.a) v *= s;
  return r;
}

double BiLaurentPoly::newton_area() const {
  std::vector<std::pair<long, long>> pts;
  for (const auto& [ij, v] : a) pts.emplace_back(ij.first, ij.second);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return 0;
  auto cross = [](auto o, auto p, auto q) {
    return (p.first - o.first) * (q.second - o.second) - (p.second - o.second) * (q.first - o.first);
  };
  std::vector<std::pair<long, long>> hull(2 * pts.size());
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  double area2 = 0;
  for (size_t i = 0; i < hull.size(); ++i) {
    const auto& p = hull[i];
    const auto& q = hull[(i + 1) % hull.size()];
    area2 += static_cast<double>(p.first * q.second - q.first * p.second);
  }
  return std::abs(area2) / 2;
}

std::string BiLaurentPoly::str(int digits) const {
  std::ostringstream os;
  os << std::setprecision(digits);
  bool first = true;
  for (const auto& [ij, v] : a) {
    if (!first) os << (v < 0 ? " - " : " + ");
    else if (v < 0) os << "-";
    first = false;
    os << std::abs(v);
    if (ij.first) os << " z^" << ij.first;
    if (ij.second) os << " w^" << ij.second;
  }
  if (first) os << "0";
  return os.str();
}

nlohmann::json to_json(const LaurentPoly& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (size_t k = 0; k < p.c.size(); ++k)
    if (std::abs(p.c[k]) > 0)
      terms.push_back({{"i", p.lo + static_cast<int>(k)}, {"j", 0}, {"re", p.c[k].real()}, {"im", p.c[k].imag()}});
  return {{"terms", terms}};
}

nlohmann::json to_json(const BiLaurentPoly& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [ij, v] : p.a) terms.push_back({{"i", ij.first}, {"j", ij.second}, {"re", v}, {"im", 0.0}});
  return {{"terms", terms}};
}

namespace {

// Interpolates a Laurent polynomial with exponents in [-D, D] from N = 2D+1
// values on a rotated circle of roots of unity, then checks fresh points.
template <class F>
LaurentPoly interpolate1(F f, int D, const char* what) {
  const int N = 2 * D + 1;
  const double off = kPi / (2.0 * N);
  std::vector<cplx> zk(N), dk(N);
  for (int k = 0; k < N; ++k) {
    zk[k] = unit(2 * kPi * k / N + off);
    dk[k] = f(zk[k]);
  }
  LaurentPoly p;
  p.lo = -D;
  p.c.assign(N, 0);
  for (int j = -D; j <= D; ++j) {
    cplx s(0, 0);
    for (int k = 0; k < N; ++k) s += dk[k] * cpow(zk[k], -j);
    p.c[j + D] = s / static_cast<double>(N);
  }
  double scale = 0;
  for (auto& x : p.c) scale += std::abs(x);
  for (double t : {0.37, 1.91, 4.03}) {
    const cplx z = unit(t);
    if (std::abs(p(z) - f(z)) > 1e-9 * std::max(scale, 1e-300))
      throw InterpolationError(std::string("interpolation residual too large for ") + what);
  }
  p.trim();
  return p;
}

// Same in two variables; returns complex coefficients indexed (i,j).
template <class F>
std::map<std::pair<int, int>, cplx> interpolate2(F f, int Dz, int Dw, const char* what) {
  const int Nz = 2 * Dz + 1, Nw = 2 * Dw + 1;
  const double oz = kPi / (2.0 * Nz), ow = kPi / (2.0 * Nw);
  std::vector<cplx> zs(Nz), ws(Nw);
  for (int k = 0; k < Nz; ++k) zs[k] = unit(2 * kPi * k / Nz + oz);
  for (int l = 0; l < Nw; ++l) ws[l] = unit(2 * kPi * l / Nw + ow);
  std::vector<cplx> d(static_cast<size_t>(Nz) * Nw);
  for (int k = 0; k < Nz; ++k)
    for (int l = 0; l < Nw; ++l) d[k * Nw + l] = f(zs[k], ws[l]);
  std::map<std::pair<int, int>, cplx> out;
  double scale = 0;
  for (int i = -Dz; i <= Dz; ++i)
    for (int j = -Dw; j <= Dw; ++j) {
      cplx s(0, 0);
      for (int k = 0; k < Nz; ++k)
        for (int l = 0; l < Nw; ++l) s += d[k * Nw + l] * cpow(zs[k], -i) * cpow(ws[l], -j);
      s /= static_cast<double>(Nz) * Nw;
      out[{i, j}] = s;
      scale += std::abs(s);
    }
  for (auto [s, t] : {std::pair{0.37, 2.2}, {1.91, 0.61}, {4.03, 5.3}}) {
    const cplx z = unit(s), w = unit(t);
    cplx v(0, 0);
    for (const auto& [ij, c] : out) v += c * cpow(z, ij.first) * cpow(w, ij.second);
    if (std::abs(v - f(z, w)) > 1e-9 * std::max(scale, 1e-300))
      throw InterpolationError(std::string("interpolation residual too large for ") + what);
  }
  return out;
}

BiLaurentPoly real_part_checked(const std::map<std::pair<int, int>, cplx>& m, const char* what) {
  double scale = 0;
  for (const auto& [ij, c] : m) scale = std::max(scale, std::abs(c));
  BiLaurentPoly p;
  for (const auto& [ij, c] : m) {
    if (std::abs(c.imag()) > 1e-9 * std::max(scale, 1e-300))
      throw InterpolationError(std::string("non-real coefficient in ") + what);
    p.a[ij] = c.real();
  }
  p.trim();
  return p;
}

int sum_abs_b(const EmbeddedGraph& g) {
  int s = 0;
  for (const auto& e : g.edges) s += std::abs(e.b);
  return s;
}
int sum_abs_a(const EmbeddedGraph& g) {
  int s = 0;
  for (const auto& e : g.edges) s += std::abs(e.a);
  return s;
}

}  // namespace

KleinPolys extract_R(const EmbeddedGraph& g, const std::vector<int>& K) {
  const int D = sum_abs_b(g);
  KleinPolys out;
  out.R1 = interpolate1([&](cplx z) { return det(klein_matrix(g, K, z, 1.0)); }, D, "R(z,1)");
  out.Rm1 = interpolate1([&](cplx z) { return det(klein_matrix(g, K, z, -1.0)); }, D, "R(z,-1)");
  return out;
}

BiLaurentPoly extract_P(const EmbeddedGraph& gt, const std::vector<int>& Kt) {
  auto m = interpolate2([&](cplx z, cplx w) { return det(torus_matrix(gt, Kt, z, w)); }, sum_abs_b(gt),
                        sum_abs_a(gt), "P(z,w)");
  return real_part_checked(m, "P(z,w)");
}

BiLaurentPoly extract_P_klein(const EmbeddedGraph& g, const std::vector<int>& K) {
  EmbeddedGraph gk = g;
  gk.orientation = K;
  const EmbeddedGraph t = orientation_cover(gk);
  return extract_P(t, t.orientation);
}

BipartitePolys extract_bipartite(const EmbeddedGraph& g, const std::vector<int>& K) {
  if (static_cast<int>(g.colors.size()) != g.n_vertices) throw std::invalid_argument("extract_S: graph is not bipartite");
  const int D = sum_abs_b(g);
  BipartitePolys out;
  auto S_of = [&](double w) {
    LaurentPoly s = interpolate1([&](cplx z) { return det(bipartite_block(g, klein_matrix(g, K, z, w))); }, D,
                                 "S(z,w)");
    // phase so that S(-z) has the conjugate coefficients of S(z)
    cplx num(0, 0);
    double den = 0;
    for (size_t k = 0; k < s.c.size(); ++k) {
      const int e = s.lo + static_cast<int>(k);
      num += (e % 2 == 0 ? 1.0 : -1.0) * s.c[k] * s.c[k];
      den += std::norm(s.c[k]);
    }
    const double eps = den > 0 ? num.real() / den : 1.0;
    return eps > 0 ? s : s.scaled(cplx(0, 1));
  };
  out.S1 = S_of(1.0);
  out.Sm1 = S_of(-1.0);

  EmbeddedGraph gk = g;
  gk.orientation = K;
  const EmbeddedGraph t = orientation_cover(gk);
  auto m = interpolate2([&](cplx z, cplx w) { return det(bipartite_block(t, torus_matrix(t, t.orientation, z, w))); },
                        sum_abs_b(t), sum_abs_a(t), "Q(z,w)");
  BiLaurentPoly Q = real_part_checked(m, "Q(z,w)");
  // global sign from Q(z,1) = S(z^1/2,1) S(-z^1/2,1) at a generic point
  const cplx z0 = unit(0.813), r0 = std::sqrt(z0);
  const cplx lhs = Q(z0, 1.0), rhs = out.S1(r0) * out.S1(-r0);
  if ((lhs * std::conj(rhs)).real() < 0) Q = Q.scaled(-1.0);
  out.Q = Q;

  // Rephase S so that R(z,w) = S(z,w) S(1/z,w), the normalization the product
  // formula for Z_mn relies on.  This can break S(-z) = conj S(z) by a sign.
  auto rephase = [&](LaurentPoly& s, double w) {
    const cplx zg = unit(0.377);
    const cplx c2 = det(klein_matrix(g, K, zg, w)) / (s(zg) * s(1.0 / zg));
    if (std::abs(std::abs(c2) - 1) > 1e-6) throw InterpolationError("S(z,w) S(1/z,w) does not match R(z,w)");
    s = s.scaled(std::sqrt(c2 / std::abs(c2)));
  };
  rephase(out.S1, 1.0);
  rephase(out.Sm1, -1.0);
  return out;
}

bool IdentityReport::ok() const {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

IdentityReport poly_identity_suite(const EmbeddedGraph& g, const std::vector<int>& K, const KleinPolys& R,
                                   const BiLaurentPoly& P, const BipartitePolys* bip, unsigned seed, double tol) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(0, 2 * kPi);
  IdentityReport rep;
  auto add = [&](const std::string& name, auto fn) {
    double err = 0;
    for (int s = 0; s < 32; ++s) {
      const cplx z = unit(U(rng)), w = unit(U(rng));
      err = std::max(err, fn(z, w));
    }
    rep.checks.push_back({name, err, err < tol});
  };
  auto rel = [](cplx x, cplx y) { return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300}); };
  auto scaleP = P.max_abs();
  auto relP = [&](cplx x, cplx y) { return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-12 * scaleP, 1e-300}); };

  add("R(-z,w) = conj R(z,w)", [&](cplx z, cplx) {
    return std::max(rel(R.R1(-z), std::conj(R.R1(z))), rel(R.Rm1(-z), std::conj(R.Rm1(z))));
  });
  add("P(z,w) = P(z,1/w)", [&](cplx z, cplx w) { return relP(P(z, w), P(z, 1.0 / w)); });
  add("R(z^1/2,w) R(-z^1/2,w) = P(z,w), w=+-1", [&](cplx z, cplx) {
    const cplx r = std::sqrt(z);
    return std::max(relP(R.R1(r) * R.R1(-r), P(z, 1.0)), relP(R.Rm1(r) * R.Rm1(-r), P(z, -1.0)));
  });
  add("P(1,w) = |R(1,w)|^2", [&](cplx, cplx) {
    return std::max(relP(P(1.0, 1.0), std::norm(R.R1(1.0))), relP(P(1.0, -1.0), std::norm(R.Rm1(1.0))));
  });
  add("P real on the unit torus", [&](cplx z, cplx w) {
    const cplx v = P(z, w);
    return std::abs(v.imag()) / std::max(std::abs(v), 1e-12 * scaleP);
  });
  add("direct determinant matches R", [&](cplx z, cplx) {
    return std::max(rel(R.R1(z), det(klein_matrix(g, K, z, 1.0))), rel(R.Rm1(z), det(klein_matrix(g, K, z, -1.0))));
  });
  if (bip) {
    const auto& B = *bip;
    const double scaleQ = B.Q.max_abs();
    auto relQ = [&](cplx x, cplx y) { return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-12 * scaleQ * scaleQ, 1e-300}); };
    add("P(z,w) = Q(z,w) Q(1/z,1/w)", [&](cplx z, cplx w) { return relP(P(z, w), B.Q(z, w) * B.Q(1.0 / z, 1.0 / w)); });
    add("Q(z,w) = Q(z,1/w)", [&](cplx z, cplx w) { return relQ(B.Q(z, w), B.Q(z, 1.0 / w)); });
    add("R(z,w) = S(z,w) S(1/z,w), w=+-1", [&](cplx z, cplx) {
      return std::max(rel(R.R1(z), B.S1(z) * B.S1(1.0 / z)), rel(R.Rm1(z), B.Sm1(z) * B.Sm1(1.0 / z)));
    });
    add("Q(z,w) = +-S(z^1/2,w) S(-z^1/2,w), w=+-1", [&](cplx z, cplx) {
      const cplx r = std::sqrt(z), g0 = unit(0.813), r0 = std::sqrt(g0);
      const double s1 = (B.Q(g0, 1.0) * std::conj(B.S1(r0) * B.S1(-r0))).real() < 0 ? -1 : 1;
      const double sm1 = (B.Q(g0, -1.0) * std::conj(B.Sm1(r0) * B.Sm1(-r0))).real() < 0 ? -1 : 1;
      return std::max(relQ(B.Q(z, 1.0), s1 * B.S1(r) * B.S1(-r)), relQ(B.Q(z, -1.0), sm1 * B.Sm1(r) * B.Sm1(-r)));
    });
    // only holds for real positive arguments
    add("|S(x,w)|^2 = Q(x^2,w), x>0, w=+-1", [&](cplx z, cplx) {
      const double x = std::exp(std::arg(z) / kPi);
      return std::max(relQ(std::norm(B.S1(x)), B.Q(x * x, 1.0)), relQ(std::norm(B.Sm1(x)), B.Q(x * x, -1.0)));
    });
    // coefficientwise conjugation: conj(S(conj z))
    add("S(-z,w) = +-conj-coefficients S(z,w)", [&](cplx z, cplx) {
      auto one = [&](const LaurentPoly& S) {
        const cplx a = S(-z), b = std::conj(S(std::conj(z)));
        return std::min(rel(a, b), rel(a, -b));
      };
      return std::max(one(B.S1), one(B.Sm1));
    });
  }
  return rep;
}

}  // namespace kz
