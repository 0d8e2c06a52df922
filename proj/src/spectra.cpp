#include "kleinz/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace kz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
const cplx I(0, 1);

struct Eval {
  cplx p, dp;
  double scale;  // sum |a_k| |z|^k, for relative residuals
};

Eval horner(const std::vector<cplx>& a, cplx z) {
  cplx p = 0, dp = 0;
  double s = 0;
  const double az = std::abs(z);
  for (size_t k = a.size(); k-- > 0;) {
    dp = dp * z + p;
    p = p * z + a[k];
    s = s * az + std::abs(a[k]);
  }
  return {p, dp, s};
}

double rel_residual(const std::vector<cplx>& a, cplx z) {
  const Eval e = horner(a, z);
  return e.scale > 0 ? std::abs(e.p) / e.scale : 0.0;
}

// Aberth-Ehrlich iteration; returns one approximation per root (with repetition).
std::vector<cplx> aberth(const std::vector<cplx>& a, int max_iter) {
  const int d = static_cast<int>(a.size()) - 1;
  std::vector<cplx> z(d);
  const double r = std::pow(std::abs(a[0]) / std::abs(a[d]), 1.0 / d);
  for (int k = 0; k < d; ++k) z[k] = std::polar(r, 2 * kPi * k / d + 0.4);
  std::vector<char> done(d, 0);
  for (int it = 0; it < max_iter; ++it) {
    bool all = true;
    for (int k = 0; k < d; ++k) {
      if (done[k]) continue;
      const Eval e = horner(a, z[k]);
      if (std::abs(e.p) <= 4 * kEps * e.scale) {
        done[k] = 1;
        continue;
      }
      all = false;
      const cplx ratio = e.dp == cplx(0, 0) ? cplx(1e-3, 1e-3) * std::max(1.0, std::abs(z[k])) : e.p / e.dp;
      cplx sum = 0;
      for (int j = 0; j < d; ++j)
        if (j != k && z[j] != z[k]) sum += 1.0 / (z[k] - z[j]);
      const cplx step = ratio / (1.0 - ratio * sum);
      z[k] -= step;
      if (std::abs(step) <= 2 * kEps * std::abs(z[k])) done[k] = 1;
    }
    if (all) return z;
  }
  for (const cplx& zk : z)
    if (rel_residual(a, zk) > 1e-6)
      throw RootError("roots: Aberth iteration did not converge (ill-conditioned polynomial)");
  return z;
}

int mod4(int x) { return ((x % 4) + 4) % 4; }

}  // namespace

int RootSet::count() const {
  int c = 0;
  for (const auto& r : roots) c += r.multiplicity;
  return c;
}

RootSet roots(const LaurentPoly& p0, const RootOptions& opt) {
  LaurentPoly p = p0;
  p.trim();
  if (p.zero()) throw std::invalid_argument("roots: zero polynomial");
  RootSet out;
  out.tol = opt.tol;
  out.degree = p.hi() - p.lo;
  if (out.degree == 0) return out;
  const auto& a = p.c;
  std::vector<cplx> z = aberth(a, opt.max_iter);

  // cluster approximations of multiple roots
  const int d = out.degree;
  std::vector<int> parent(d);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::abs(z[i] - z[j]) <= opt.cluster * std::max(1.0, std::abs(z[i]))) parent[find(i)] = find(j);
  std::vector<std::vector<int>> groups(d);
  for (int i = 0; i < d; ++i) groups[find(i)].push_back(i);

  for (const auto& gr : groups) {
    if (gr.empty()) continue;
    cplx c = 0;
    for (int i : gr) c += z[i];
    c /= static_cast<double>(gr.size());
    // Newton polish; a root of multiplicity k is a simple root of the
    // (k-1)-th derivative, which the cluster mean only locates to ~eps^(1/k)
    std::vector<cplx> b = a;
    for (size_t k = 1; k < gr.size(); ++k) {
      std::vector<cplx> db(b.size() - 1);
      for (size_t j = 1; j < b.size(); ++j) db[j - 1] = b[j] * static_cast<double>(j);
      b = std::move(db);
    }
    for (int it = 0; it < (gr.size() == 1 ? 1 : 4); ++it) {
      const Eval e = horner(b, c);
      if (e.dp == cplx(0, 0)) break;
      const cplx c2 = c - e.p / e.dp;
      if (!(rel_residual(b, c2) < rel_residual(b, c))) break;
      c = c2;
    }
    if (std::abs(c - I) < opt.snap_imag_unit) c = I;
    else if (std::abs(c + I) < opt.snap_imag_unit) c = -I;
    else if (std::abs(std::abs(c) - 1) < opt.tol) c /= std::abs(c);
    out.max_residual = std::max(out.max_residual, rel_residual(a, c));
    out.roots.push_back({c, static_cast<int>(gr.size())});
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const Root& x, const Root& y) {
    return x.z.imag() != y.z.imag() ? x.z.imag() < y.z.imag() : x.z.real() < y.z.real();
  });
  return out;
}

Mod4Components mod4_components(const LaurentPoly& R0, const RootOptions& opt) {
  LaurentPoly R = R0;
  R.trim();
  if (R.zero()) throw std::invalid_argument("mod4: zero polynomial");
  Mod4Components c;
  const double lf = std::arg(R.c.back()) / (kPi / 2);
  const double lr = std::round(lf);
  if (std::abs(lf - lr) > 1e-6)
    throw std::runtime_error("mod4: leading coefficient argument is not a multiple of pi/2");
  c.lambda = mod4(static_cast<int>(lr));
  int off_axis = 0;
  for (const Root& r : roots(R, opt).roots) {
    const double mod = std::abs(r.z);
    if (std::abs(mod - 1) <= opt.tol) {
      if (r.z == I) c.m_plus += r.multiplicity;
      else if (r.z == -I) c.m_minus += r.multiplicity;
      else
        throw ConjectureViolation("unit-circle root of R(z,+-1) at z = (" + std::to_string(r.z.real()) + ", " +
                                  std::to_string(r.z.imag()) + "), not at +-i");
      continue;
    }
    if (mod < 1) continue;
    if (std::abs(r.z.real()) <= 1e-8 * mod)
      (r.z.imag() > 0 ? c.r_plus : c.r_minus) += r.multiplicity;
    else
      off_axis += r.multiplicity;
  }
  if (off_axis % 2) throw std::runtime_error("mod4: roots off the imaginary axis are not paired");
  c.p = off_axis / 2;
  if ((c.m_minus - c.m_plus) % 2) throw std::runtime_error("mod4: multiplicities at i and -i differ by an odd number");
  c.A = mod4(c.lambda + 2 * c.p + c.r_minus - c.r_plus + (c.m_minus - c.m_plus) / 2);
  return c;
}

ModFourInvariant mod4_invariants(const LaurentPoly& R1, const LaurentPoly& Rm1, const RootOptions& opt) {
  ModFourInvariant m;
  m.c1 = mod4_components(R1, opt);
  m.cm1 = mod4_components(Rm1, opt);
  m.A = m.c1.A;
  m.Ap = m.cm1.A;
  return m;
}

ModFourInvariant mod4_invariants_bipartite(const LaurentPoly& S1, const LaurentPoly& Sm1, const RootOptions& opt) {
  ModFourInvariant m = mod4_invariants(S1, Sm1, opt);
  // only the parity enters the bipartite formulas
  m.c1.A = m.A = mod4(m.c1.lambda + m.c1.r_plus + m.c1.r_minus);
  m.cm1.A = m.Ap = mod4(m.cm1.lambda + m.cm1.r_plus + m.cm1.r_minus);
  return m;
}

double predicted_root_product_arg(const Mod4Components& c, int n) {
  const int sign = ((n - 1) / 2) % 2 == 0 ? 1 : -1;
  const double k = static_cast<double>(c.lambda + 2 * c.p + c.r_minus - c.r_plus) * n +
                   sign * (c.m_minus - c.m_plus) / 2.0;
  double a = std::remainder(k * kPi / 2, 2 * kPi);
  return a <= -kPi ? a + 2 * kPi : a;
}

const char* to_string(ZeroType t) { return t == ZeroType::simple_pair ? "simple-pair" : "real-node"; }

namespace {

double coeff_scale(const BiLaurentPoly& F) {
  double s = 0;
  for (const auto& [k, v] : F.a) s += std::abs(v);
  return s;
}

// Real-valued F on the torus (P, or a symmetric Q) has its zeros at minima of
// sign*F; complex-valued F has simple zeros.  Returns sign, or 0 if complex.
int real_sign(const BiLaurentPoly& F, double scale) {
  double re = 0;
  for (int k = 0; k < 8; ++k) {
    const cplx v = F(std::polar(1.0, 0.7 + 1.3 * k), std::polar(1.0, 0.3 + 2.1 * k));
    if (std::abs(v.imag()) > 1e-10 * scale) return 0;
    if (std::abs(v.real()) > std::abs(re)) re = v.real();
  }
  return re < 0 ? -1 : 1;
}

// Moves (z,w) along the unit torus towards a zero of F; `fix_z` keeps z.
void refine(const BiLaurentPoly& F, int sign, cplx& z, cplx& w, bool fix_z) {
  auto size = [&](cplx a, cplx b) { return sign ? sign * F(a, b).real() : std::abs(F(a, b)); };
  for (int it = 0; it < 300; ++it) {
    const cplx f = F(z, w);
    if (f == cplx(0, 0)) return;
    const cplx fz = F.derivative(z, w, 1, 0), fw = F.derivative(z, w, 0, 1);
    double dr = 0, ds = 0;
    if (sign) {
      // Newton on the gradient of sign*F in angle coordinates
      const double gr = sign * (I * z * fz).real(), gs = sign * (I * w * fw).real();
      const double hrr = sign * (-z * fz - z * z * F.derivative(z, w, 2, 0)).real();
      const double hss = sign * (-w * fw - w * w * F.derivative(z, w, 0, 2)).real();
      const double hrs = sign * (-z * w * F.derivative(z, w, 1, 1)).real();
      if (fix_z) {
        ds = hss > 0 ? -gs / hss : (gs > 0 ? -1e-2 : 1e-2);
      } else {
        const double det = hrr * hss - hrs * hrs;
        if (hrr > 0 && det > 0) {
          dr = -(hss * gr - hrs * gs) / det;
          ds = -(hrr * gs - hrs * gr) / det;
        } else {
          dr = -1e-2 * gr / (std::hypot(gr, gs) + 1e-300);
          ds = -1e-2 * gs / (std::hypot(gr, gs) + 1e-300);
        }
      }
    } else {
      // Gauss-Newton on Re F = Im F = 0
      const cplx jr = I * z * fz, js = I * w * fw;
      if (fix_z) {
        const double n2 = std::norm(js);
        if (n2 == 0) return;
        ds = -(std::conj(js) * f).real() / n2;
      } else {
        const double a11 = std::norm(jr), a22 = std::norm(js), a12 = (std::conj(jr) * js).real();
        const double b1 = -(std::conj(jr) * f).real(), b2 = -(std::conj(js) * f).real();
        const double det = a11 * a22 - a12 * a12;
        if (!(det > 1e-14 * (a11 + a22) * (a11 + a22))) return;
        dr = (a22 * b1 - a12 * b2) / det;
        ds = (a11 * b2 - a12 * b1) / det;
      }
    }
    const double len = std::hypot(dr, ds);
    if (len > 0.2) dr *= 0.2 / len, ds *= 0.2 / len;
    const double cur = size(z, w);
    double t = 1;
    while (t > 1e-3 && size(z * std::polar(1.0, t * dr), w * std::polar(1.0, t * ds)) > cur) t /= 2;
    if (t <= 1e-3) return;
    z *= std::polar(1.0, t * dr);
    w *= std::polar(1.0, t * ds);
    if (t * len < 1e-15) return;
  }
}

void analyse(const BiLaurentPoly& F, TorusZero& t, double scale) {
  const cplx z0 = t.z0, w0 = t.w0;
  t.dz = F.derivative(z0, w0, 1, 0);
  t.dw = F.derivative(z0, w0, 0, 1);
  t.dzz = F.derivative(z0, w0, 2, 0);
  t.dww = F.derivative(z0, w0, 0, 2);
  t.dzw = F.derivative(z0, w0, 1, 1);
  t.psi = std::arg(w0) / (2 * kPi);
  if (t.psi <= -0.5) t.psi += 1;
  if (std::abs(t.dz) + std::abs(t.dw) > 1e-6 * scale) {
    // simple zero: |F|^2 ~ |a r + b s|^2 in angle coordinates
    t.order = 1;
    const cplx a = I * z0 * t.dz, b = I * w0 * t.dw;
    if (std::abs(t.dw) == 0) throw std::runtime_error("tau: vanishing w-derivative at a simple zero");
    t.Az = std::norm(a);
    t.Aw = std::norm(b);
    t.B = (a * std::conj(b)).real();
    const double cross = (a * std::conj(b)).imag();
    if (std::abs(cross) <= 1e-9 * (t.Az + t.Aw))
      throw std::runtime_error("unit-torus zero is not isolated (tangent spectral curve)");
    t.D = std::abs(cross);
  } else {
    t.order = 2;
    const cplx czz = -z0 * z0 * t.dzz / 2.0, cww = -w0 * w0 * t.dww / 2.0, czw = -z0 * w0 * t.dzw / 2.0;
    if (std::abs(cww) == 0) throw std::runtime_error("tau: vanishing second w-derivative at a node");
    const cplx ph = std::polar(1.0, -std::arg(cww));
    const cplx az = czz * ph, aw = cww * ph, b = czw * ph;
    const double mag = std::abs(az) + std::abs(aw) + std::abs(b);
    if (std::abs(az.imag()) + std::abs(b.imag()) > 1e-6 * mag)
      throw std::runtime_error("node: second-order part is not a real quadratic form");
    t.Az = az.real();
    t.Aw = aw.real();
    t.B = b.real();
    const double disc = t.Az * t.Aw - t.B * t.B;
    if (!(t.Az > 0) || !(disc > 1e-12 * mag * mag))
      throw std::runtime_error("node is not positive: quadratic form (Az, B, Aw) is not definite");
    t.D = std::sqrt(disc);
  }
  t.tau_unit = cplx(-t.B, t.D) / t.Aw;
  t.type = std::abs(w0.imag()) < 1e-12 ? ZeroType::real_node : ZeroType::simple_pair;
}

}  // namespace

NodeReport unit_torus_zeros(const BiLaurentPoly& F, const ZeroOptions& opt) {
  NodeReport rep;
  rep.scale = coeff_scale(F);
  rep.tol = opt.tol;
  if (rep.scale == 0) throw std::invalid_argument("unit_torus_zeros: zero polynomial");
  const double accept = opt.tol * rep.scale;

  const int sign = real_sign(F, rep.scale);
  const LaurentPoly slice = F.in_w(-1.0);
  std::vector<cplx> found;
  LaurentPoly sl = slice;
  sl.trim();
  if (!sl.zero() && sl.hi() > sl.lo) {
    RootOptions ro = opt.roots;
    for (const Root& r : roots(sl, ro).roots) {
      if (std::abs(std::abs(r.z) - 1) > 1e-4) continue;
      cplx z = -1.0, w = r.z / std::abs(r.z);
      refine(F, sign, z, w, true);
      if (std::abs(w.imag()) < 1e-7) {
        const cplx ws(w.real() > 0 ? 1.0 : -1.0, 0.0);
        if (std::abs(F(z, ws)) <= std::max(accept, std::abs(F(z, w)))) w = ws;
      }
      if (std::abs(F(z, w)) > accept) continue;
      bool dup = false;
      for (const cplx& f : found) dup = dup || std::abs(f - w) < 1e-6;
      if (!dup) found.push_back(w);
    }
  } else if (sl.zero()) {
    throw ConjectureViolation("characteristic polynomial vanishes identically on z = -1");
  }

  if (opt.grid > 0) {
    const int G = opt.grid;
    std::vector<double> val(G * G);
    auto pt = [&](int j) { return std::polar(1.0, 2 * kPi * (j + 0.5) / G); };
    for (int j = 0; j < G; ++j) {
      const LaurentPoly row = F.in_w(pt(j));
      for (int k = 0; k < G; ++k) val[j * G + k] = std::abs(row(pt(k)));
    }
    for (int j = 0; j < G; ++j)
      for (int k = 0; k < G; ++k) {
        const double v = val[j * G + k];
        bool is_min = true;
        for (int dj = -1; dj <= 1 && is_min; ++dj)
          for (int dk = -1; dk <= 1; ++dk)
            if ((dj || dk) && val[((j + dj + G) % G) * G + (k + dk + G) % G] < v) {
              is_min = false;
              break;
            }
        if (!is_min) continue;
        cplx z = pt(j), w = pt(k);
        refine(F, sign, z, w, false);
        if (std::abs(F(z, w)) > accept) continue;
        if (std::abs(z + 1.0) > 1e-3)
          throw ConjectureViolation("unit-torus zero at z = exp(" + std::to_string(std::arg(z)) + " i), w = exp(" +
                                    std::to_string(std::arg(w)) + " i); expected z = -1");
      }
  }

  for (const cplx& w : found) {
    TorusZero t;
    t.z0 = -1.0;
    t.w0 = w;
    analyse(F, t, rep.scale);
    rep.zeros.push_back(t);
  }
  std::sort(rep.zeros.begin(), rep.zeros.end(), [](const TorusZero& x, const TorusZero& y) { return x.psi < y.psi; });
  const size_t nz = rep.zeros.size();
  const bool all_pair = std::all_of(rep.zeros.begin(), rep.zeros.end(),
                                    [](const TorusZero& t) { return t.type == ZeroType::simple_pair; });
  if (nz == 0) rep.kind = "none";
  else if (nz == 1 && rep.zeros[0].type == ZeroType::real_node) rep.kind = "real-node";
  else if (nz == 2 && all_pair) rep.kind = "two-zeros";
  else rep.kind = "nodes";
  return rep;
}

cplx tau(const TorusZero& zero, int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("tau: m, n must be positive");
  return zero.tau_unit * (static_cast<double>(m) / n);
}

bool interlacing_check(const LaurentPoly& S1, const LaurentPoly& Sm1, double tol) {
  std::vector<std::pair<double, int>> all;
  for (int which = 0; which < 2; ++which) {
    RootSet rs;
    try {
      rs = roots(which == 0 ? S1 : Sm1);
    } catch (const RootError&) {
      return false;
    }
    for (const Root& r : rs.roots) {
      if (r.multiplicity != 1) return false;
      if (std::abs(r.z.real()) > tol * std::max(1.0, std::abs(r.z))) return false;
      all.push_back({r.z.imag(), which});
    }
  }
  std::sort(all.begin(), all.end());
  for (size_t k = 1; k < all.size(); ++k) {
    if (all[k].second == all[k - 1].second) return false;
    if (all[k].first - all[k - 1].first <= tol) return false;
  }
  return true;
}

nlohmann::json to_json(const RootSet& r) {
  nlohmann::json j;
  j["degree"] = r.degree;
  j["max_residual"] = r.max_residual;
  for (const Root& x : r.roots)
    j["roots"].push_back({{"re", x.z.real()}, {"im", x.z.imag()}, {"multiplicity", x.multiplicity}});
  return j;
}

nlohmann::json to_json(const ModFourInvariant& m) {
  auto comp = [](const Mod4Components& c) {
    return nlohmann::json{{"lambda", c.lambda}, {"p", c.p},           {"r_minus", c.r_minus}, {"r_plus", c.r_plus},
                          {"m_minus", c.m_minus}, {"m_plus", c.m_plus}, {"A", c.A}};
  };
  return {{"A", m.A}, {"A_prime", m.Ap}, {"w=1", comp(m.c1)}, {"w=-1", comp(m.cm1)}};
}

nlohmann::json to_json(const NodeReport& r) {
  nlohmann::json j;
  j["kind"] = r.kind;
  j["zeros"] = nlohmann::json::array();
  for (const TorusZero& t : r.zeros)
    j["zeros"].push_back({{"z0", {t.z0.real(), t.z0.imag()}},
                          {"w0", {t.w0.real(), t.w0.imag()}},
                          {"type", to_string(t.type)},
                          {"psi", t.psi},
                          {"order", t.order},
                          {"Az", t.Az},
                          {"Aw", t.Aw},
                          {"B", t.B},
                          {"D", t.D},
                          {"tau_per_unit_aspect", {t.tau_unit.real(), t.tau_unit.imag()}}});
  return j;
}

}  // namespace kz
