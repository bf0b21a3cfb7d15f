#include "thermocluster/thermal.hpp"

#include <cmath>
#include <stdexcept>

namespace thermo {

Mat2 single_site_thermal(double t, double theta) {
  return 0.5 * (id2() + t * std::cos(theta) * pauli_x() + t * std::sin(theta) * pauli_z());
}

Vec2 pure_site_state(double theta) {
  double a = M_PI / 4.0 - theta / 2.0;
  Vec2 v;
  v << std::cos(a), std::sin(a);
  return v;
}

Mat hamiltonian(const Graph& g, double theta) {
  long long dim = 1ll << g.n;
  Mat h = Mat::Zero(dim, dim);
  for (int i = 0; i < g.n; ++i) {
    h -= 0.5 * std::cos(theta) * stabilizer(g, i);
    h -= 0.5 * std::sin(theta) * op_on(pauli_z(), i, g.n);
  }
  return h;
}

Mat stabilizer(const Graph& g, int i) {
  std::vector<Mat2> ops(g.n, id2());
  ops[i] = pauli_x();
  for (int j : g.adj[i]) ops[j] = pauli_z();
  return nkron(ops);
}

Mat exact_thermal_state(const Graph& g, ModelParams p) {
  Mat2 m1 = single_site_thermal(p.t(), p.theta);
  Mat rho = Mat::Ones(1, 1);
  for (int i = 0; i < g.n; ++i) rho = kron_he(m1, rho);
  return cz_conjugate(g, rho);
}

EndParams site_params(double beta, double theta, int d) {
  if (d < 1) throw std::invalid_argument("site_params: degree must be positive");
  double t = std::tanh(beta / 2.0);
  double ts = t * std::sin(theta);
  if (ts >= 1.0) return t0_params(theta, d);
  double g = std::tanh(std::atanh(ts) / d);
  double ev = (std::pow(1.0 + g, d) + std::pow(1.0 - g, d)) / 2.0;
  double a = std::pow(t * std::cos(theta) * ev, 1.0 / d);
  return {a, g};
}

EndParams t0_params(double theta, int d) {
  double phi = std::atan(std::pow(std::tan(theta / 2.0 + M_PI / 4.0), 1.0 / d)) - M_PI / 4.0;
  return {std::cos(2.0 * phi), std::sin(2.0 * phi)};
}

Mat4 bond_operator(EndParams i, EndParams j) {
  Mat4 XZ = kron_he(pauli_z(), pauli_x());  // X on low-bit site, Z on high-bit site
  Mat4 ZX = kron_he(pauli_x(), pauli_z());
  Mat4 ZI = kron_he(id2(), pauli_z());
  Mat4 IZ = kron_he(pauli_z(), id2());
  Mat4 fi = Mat4::Identity() + i.alpha * XZ + i.gamma * ZI;
  Mat4 fj = Mat4::Identity() + j.alpha * ZX + j.gamma * IZ;
  return 0.25 * fi * fj;
}

Vec4 t0_bond_state(double theta, int di, int dj) {
  if (theta == 0.0) {
    Vec4 v;
    v << 0.5, 0.5, 0.5, -0.5;
    return v;
  }
  Mat4 b = bond_operator(t0_params(theta, di), t0_params(theta, dj));
  Eigen::SelfAdjointEigenSolver<Mat4> es(b);
  if (es.eigenvalues()[2] > 1e-10)
    throw std::runtime_error("t0_bond_state: zero-temperature bond not rank one");
  return es.eigenvectors().col(3);
}

Mat project_peps(const Graph& g, ModelParams p) {
  long long dim = 1ll << g.n;
  std::vector<Mat4> bonds;
  bonds.reserve(g.bonds.size());
  for (auto [i, j] : g.bonds)
    bonds.push_back(bond_operator(site_params(p.beta, p.theta, g.deg[i]),
                                  site_params(p.beta, p.theta, g.deg[j])));
  Mat2 m1 = single_site_thermal(p.t(), p.theta);
  Mat rho(dim, dim);
  for (long long z = 0; z < dim; ++z)
    for (long long zp = 0; zp < dim; ++zp) {
      cd v = 1.0;
      for (size_t b = 0; b < g.bonds.size(); ++b) {
        auto [i, j] = g.bonds[b];
        int r = static_cast<int>(((z >> i) & 1) + 2 * ((z >> j) & 1));
        int c = static_cast<int>(((zp >> i) & 1) + 2 * ((zp >> j) & 1));
        v *= bonds[b](r, c);
      }
      for (int s = 0; s < g.n; ++s)
        if (g.deg[s] == 0) v *= m1((z >> s) & 1, (zp >> s) & 1);
      rho(z, zp) = v;
    }
  cd tr = rho.trace();
  if (std::abs(tr) < 1e-300) throw std::runtime_error("project_peps: zero trace");
  return rho / tr;
}

}  // namespace thermo
