#include "thermocluster/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thermo {

Mat4 magic_basis() {
  Mat4 m;
  double s = 1.0 / std::sqrt(2.0);
  cd i(0, 1);
  m << s, i * s, 0, 0,
       0, 0, i * s, s,
       0, 0, i * s, -s,
       s, -i * s, 0, 0;
  return m;
}

void takagi4(const Mat4& tau, double scale, Mat4& u_out, Eigen::Vector4d& lam_out) {
  constexpr int n = 4;
  Eigen::Matrix<double, 8, 8> T;
  Eigen::Matrix4d re = tau.real(), im = tau.imag();
  T.topLeftCorner(4, 4) = re;
  T.topRightCorner(4, 4) = im;
  T.bottomLeftCorner(4, 4) = im;
  T.bottomRightCorner(4, 4) = -re;
  T = ((T + T.transpose()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 8, 8>> es(T);
  // descending order
  std::array<int, 8> order;
  for (int k = 0; k < 8; ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return es.eigenvalues()[a] > es.eigenvalues()[b]; });
  double thresh = std::max(1e-13 * scale, 1e-12 * tau.norm());
  std::vector<Eigen::Matrix<double, 8, 1>> kernel;
  int filled = 0;
  for (int k = 0; k < 8; ++k) {
    double w = es.eigenvalues()[order[k]];
    Eigen::Matrix<double, 8, 1> v = es.eigenvectors().col(order[k]);
    if (w > thresh && filled < n) {
      for (int r = 0; r < n; ++r) u_out(r, filled) = cd(v[r], v[n + r]);
      lam_out[filled] = w;
      ++filled;
    } else if (std::abs(w) <= thresh) {
      kernel.push_back(v);
    }
  }
  // the eigenvalue spectrum pairs as (+w, -w); complete the basis from the kernel,
  // discarding the conjugate-pair partner of each chosen vector
  while (filled < n) {
    if (kernel.empty()) throw std::runtime_error("takagi4: basis deficit");
    size_t best = 0;
    for (size_t z = 1; z < kernel.size(); ++z)
      if (kernel[z].norm() > kernel[best].norm()) best = z;
    Eigen::Matrix<double, 8, 1> v = kernel[best];
    kernel.erase(kernel.begin() + best);
    double nv = v.norm();
    if (nv < 1e-6) throw std::runtime_error("takagi4: kernel basis collapsed");
    v /= nv;
    for (int r = 0; r < n; ++r) u_out(r, filled) = cd(v[r], v[n + r]);
    lam_out[filled] = 0.0;
    ++filled;
    Eigen::Matrix<double, 8, 1> J;
    J << -v.tail(4), v.head(4);
    for (auto& z : kernel) z = (z - J.dot(z) * J - v.dot(z) * v).eval();
  }
}

namespace {

// columns of W are sqrt(mu_i) |psi_i> for the eigendecomposition of rho
Mat4 weighted_eigvecs(const Mat4& rho) {
  Mat4 h = (rho + rho.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat4> es(h);
  double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
  Mat4 w = Mat4::Zero();
  for (int k = 0; k < 4; ++k) {
    double mu = es.eigenvalues()[k];
    if (mu > 1e-13 * top) w.col(k) = std::sqrt(mu) * es.eigenvectors().col(k);
  }
  return w;
}

Eigen::Vector4d takagi_spectrum(const Mat4& rho) {
  Mat4 wm = magic_basis().adjoint() * weighted_eigvecs(rho);
  Mat4 tau = wm.transpose() * wm;
  Mat4 u;
  Eigen::Vector4d lam;
  takagi4(tau, std::max(rho.trace().real(), 1e-30), u, lam);
  std::sort(lam.data(), lam.data() + 4, std::greater<double>());
  return lam;
}

}  // namespace

double concurrence(const Mat4& rho) {
  Eigen::Vector4d lam = takagi_spectrum(rho);
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

double max_pe(const Mat4& bond, const Vec4& psi) {
  Mat4 proj = psi * psi.adjoint();
  if ((bond - proj).cwiseAbs().maxCoeff() < 1e-9) return 1.0;
  // test the unnormalized remainder: min_eig and concurrence both scale
  // linearly in (1-p), and the absolute floor keeps eigensolver noise from
  // rejecting near-pure bonds where 1-p underflows the relative tolerance
  auto feasible = [&](double p) {
    Mat4 r = bond - p * proj;
    double tol = std::max(1e-12 * (1.0 - p), 2e-14);
    if (min_eig_herm(r) < -tol) return false;
    return concurrence(r) <= tol;
  };
  auto h = [&](double p) {
    Mat4 r = bond - p * proj;
    return std::min(min_eig_herm(r), min_eig_herm(partial_transpose_2nd(r)));
  };
  if (feasible(0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 140; ++it) {
    double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (h(m1) < h(m2))
      lo = m1;
    else
      hi = m2;
  }
  double pstar = (lo + hi) / 2.0;
  if (!feasible(pstar)) throw std::runtime_error("max_pe: no separable completion");
  double a = 0.0, b = pstar;
  for (int it = 0; it < 110; ++it) {
    double mid = (a + b) / 2.0;
    if (feasible(mid))
      b = mid;
    else
      a = mid;
  }
  return b;
}

namespace {

// phases psi with sum lam_j exp(i psi_j) = 0, lam descending >= 0
Eigen::Vector4d close_polygon(const Eigen::Vector4d& lam) {
  double l1 = lam[0], l2 = lam[1], l3 = lam[2], l4 = lam[3];
  double m_lo = std::max(l1 - l2, l3 - l4);
  double m_hi = std::min(l1 + l2, l3 + l4);
  if (m_lo > m_hi + 1e-9 * std::max(1.0, l1))
    throw std::runtime_error("close_polygon: lengths cannot close");
  double m = std::clamp((m_lo + m_hi) / 2.0, m_lo, m_hi);
  auto mod_at = [](double a, double b, double phi) {
    return std::abs(a * std::polar(1.0, phi) + b * std::polar(1.0, -phi));
  };
  // modulus is monotone decreasing in phi on [0, pi/2]
  auto pair_angle = [&](double a, double b, double target) {
    target = std::clamp(target, std::abs(a - b), a + b);
    double lo = 0.0, hi = M_PI / 2.0;
    for (int it = 0; it < 80; ++it) {
      double mid = (lo + hi) / 2.0;
      if (mod_at(a, b, mid) > target)
        lo = mid;
      else
        hi = mid;
    }
    return (lo + hi) / 2.0;
  };
  double phi12 = pair_angle(l1, l2, m);
  double r1 = mod_at(l1, l2, phi12);
  double phi34 = pair_angle(l3, l4, r1);
  cd s1 = l1 * std::polar(1.0, phi12) + l2 * std::polar(1.0, -phi12);
  cd s2 = l3 * std::polar(1.0, phi34) + l4 * std::polar(1.0, -phi34);
  double d1 = std::abs(s1) > 1e-300 ? -std::arg(s1) : 0.0;
  double d2 = std::abs(s2) > 1e-300 ? M_PI - std::arg(s2) : M_PI;
  Eigen::Vector4d psi;
  psi << phi12 + d1, -phi12 + d1, phi34 + d2, -phi34 + d2;
  // closure lives on the doubled angles; the applied phases are half of psi
  return psi / 2.0;
}

// v (index a + 2b) as a product b x a via the 2x2 SVD; returns residual singular value
double factor_product(const Vec4& v, Vec2& a, Vec2& b) {
  Mat2 m;
  m << v[0], v[1], v[2], v[3];  // m(b_bit, a_bit)
  Eigen::JacobiSVD<Mat2> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  b = svd.matrixU().col(0);
  a = svd.matrixV().col(0).conjugate();
  return svd.singularValues()[1];
}

}  // namespace

std::vector<ProductTerm> product_ensemble(const Mat4& rho_in, double tol_c) {
  Mat4 rho = (rho_in + rho_in.adjoint()) / 2.0;
  Mat4 wm = magic_basis().adjoint() * weighted_eigvecs(rho);
  Mat4 tau = wm.transpose() * wm;
  Mat4 u;
  Eigen::Vector4d lam;
  takagi4(tau, std::max(rho.trace().real(), 1e-30), u, lam);
  std::array<int, 4> order{0, 1, 2, 3};
  std::sort(order.begin(), order.end(), [&](int a, int b) { return lam[a] > lam[b]; });
  Mat4 us;
  Eigen::Vector4d ls;
  for (int k = 0; k < 4; ++k) {
    us.col(k) = u.col(order[k]);
    ls[k] = std::max(lam[order[k]], 0.0);
  }
  double c = ls[0] - ls[1] - ls[2] - ls[3];
  if (c > tol_c) throw std::runtime_error("product_ensemble: input not separable");
  Mat4 xm = wm * us.conjugate();
  Eigen::Vector4d psi = close_polygon(ls);
  Mat4 h4;
  h4 << 1, 1, 1, 1, 1, -1, 1, -1, 1, 1, -1, -1, 1, -1, -1, 1;
  h4 *= 0.5;
  Mat4 zm = xm;
  for (int k = 0; k < 4; ++k) zm.col(k) *= std::polar(1.0, psi[k]);
  zm = (zm * h4).eval();
  std::vector<ProductTerm> terms;
  for (int k = 0; k < 4; ++k) {
    Vec4 z = magic_basis() * zm.col(k);
    double w = z.squaredNorm();
    if (w < 1e-14) continue;
    z /= std::sqrt(w);
    ProductTerm t;
    t.w = w;
    t.resid = factor_product(z, t.a, t.b);
    bool merged = false;
    for (auto& m : terms) {
      if (std::abs(std::abs(m.a.dot(t.a)) - 1.0) < 1e-10 &&
          std::abs(std::abs(m.b.dot(t.b)) - 1.0) < 1e-10) {
        m.w += t.w;
        merged = true;
        break;
      }
    }
    if (!merged) terms.push_back(t);
  }
  return terms;
}

namespace {

BondMember make_product_member(double prior, const Vec2& a, const Vec2& b) {
  BondMember m;
  m.prior = prior;
  m.entangled = false;
  m.a = a;
  m.b = b;
  m.psi.setZero();
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) m.diag[x][y] = std::norm(a[x]) * std::norm(b[y]);
  for (int x = 0; x < 2; ++x) {
    m.row[x] = m.diag[x][0] + m.diag[x][1];
    m.col[x] = m.diag[0][x] + m.diag[1][x];
  }
  return m;
}

BondMember make_entangled_member(double prior, const Vec4& psi) {
  BondMember m;
  m.prior = prior;
  m.entangled = true;
  m.psi = psi;
  m.a.setZero();
  m.b.setZero();
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) m.diag[x][y] = std::norm(psi[x + 2 * y]);
  for (int x = 0; x < 2; ++x) {
    m.row[x] = m.diag[x][0] + m.diag[x][1];
    m.col[x] = m.diag[0][x] + m.diag[1][x];
  }
  return m;
}

void finish_ensemble(BondEnsemble& e) {
  for (int x = 0; x < 2; ++x) {
    e.rho0_low[x] = e.bond(x, x).real() + e.bond(x + 2, x + 2).real();
    e.rho0_high[x] = e.bond(2 * x, 2 * x).real() + e.bond(2 * x + 1, 2 * x + 1).real();
  }
}

}  // namespace

BondEnsemble build_bond_ensemble(double beta, double theta, int di, int dj) {
  BondEnsemble e;
  e.bond = bond_operator(site_params(beta, theta, di), site_params(beta, theta, dj));
  Vec4 psi = t0_bond_state(theta, di, dj);
  e.pe = max_pe(e.bond, psi);
  if (e.pe > 1.0 - 1e-7) e.pe = 1.0;  // remainder weight below numerical resolution
  if (e.pe > 0.0) e.members.push_back(make_entangled_member(e.pe, psi));
  if (e.pe < 1.0 - 1e-12) {
    Mat4 rho_s = (e.bond - e.pe * (psi * psi.adjoint())) / (1.0 - e.pe);
    for (const auto& t : product_ensemble(rho_s))
      e.members.push_back(make_product_member((1.0 - e.pe) * t.w, t.a, t.b));
  }
  finish_ensemble(e);
  return e;
}

BondEnsemble bernoulli_bond_ensemble(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("bernoulli_bond_ensemble: p outside [0,1]");
  BondEnsemble e;
  // every member has a flat computational diagonal, so the sequential sampler's
  // posterior reduces to the priors and bond occupation is exactly Bernoulli(p)
  // on any graph, cycles included
  Vec4 cb;
  cb << 0.5, 0.5, 0.5, -0.5;
  Vec2 kp, km;
  kp << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  km << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  e.pe = p;
  if (p > 0.0) e.members.push_back(make_entangled_member(p, cb));
  if (p < 1.0) {
    e.members.push_back(make_product_member((1.0 - p) / 2.0, kp, kp));
    e.members.push_back(make_product_member((1.0 - p) / 2.0, km, km));
  }
  e.bond = reconstruct_ensemble(e);
  finish_ensemble(e);
  return e;
}

Mat4 reconstruct_ensemble(const BondEnsemble& e) {
  Mat4 out = Mat4::Zero();
  for (const auto& m : e.members) {
    if (m.entangled) {
      out += m.prior * (m.psi * m.psi.adjoint());
    } else {
      Vec4 v;
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) v[x + 2 * y] = m.a[x] * m.b[y];
      out += m.prior * (v * v.adjoint());
    }
  }
  return out;
}

}  // namespace thermo
