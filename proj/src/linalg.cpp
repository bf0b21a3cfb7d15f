#include "thermocluster/linalg.hpp"

#include <stdexcept>

namespace thermo {

Mat2 pauli_x() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}

Mat2 pauli_y() {
  Mat2 m;
  m << 0, cd(0, -1), cd(0, 1), 0;
  return m;
}

Mat2 pauli_z() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}

Mat2 id2() { return Mat2::Identity(); }

Mat kron_he(const Mat& high, const Mat& low) {
  Mat out(high.rows() * low.rows(), high.cols() * low.cols());
  for (Eigen::Index i = 0; i < high.rows(); ++i)
    for (Eigen::Index j = 0; j < high.cols(); ++j)
      out.block(i * low.rows(), j * low.cols(), low.rows(), low.cols()) = high(i, j) * low;
  return out;
}

Mat nkron(const std::vector<Mat2>& ops) {
  Mat out = Mat::Ones(1, 1);
  for (const auto& op : ops) out = kron_he(op, out);
  return out;
}

Mat op_on(const Mat2& op, int site, int n) {
  if (site < 0 || site >= n) throw std::invalid_argument("op_on: site out of range");
  std::vector<Mat2> ops(n, id2());
  ops[site] = op;
  return nkron(ops);
}

Eigen::VectorXd cz_diagonal(const Graph& g) {
  Eigen::VectorXd d = Eigen::VectorXd::Ones(1ll << g.n);
  for (auto [i, j] : g.bonds)
    for (long long z = 0; z < (1ll << g.n); ++z)
      if (((z >> i) & 1) && ((z >> j) & 1)) d[z] = -d[z];
  return d;
}

Mat cz_conjugate(const Graph& g, const Mat& rho) {
  Eigen::VectorXd d = cz_diagonal(g);
  Mat out = rho;
  for (Eigen::Index r = 0; r < out.rows(); ++r)
    for (Eigen::Index c = 0; c < out.cols(); ++c) out(r, c) *= d[r] * d[c];
  return out;
}

double trace_distance(const Mat& a, const Mat& b) {
  Mat d = a - b;
  Mat h = (d + d.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double min_eig_herm(const Mat& m) {
  Mat h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Mat4 partial_transpose_2nd(const Mat4& m) {
  // index a + 2b; transpose the b (second-site) factor
  Mat4 out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ap = 0; ap < 2; ++ap)
        for (int bp = 0; bp < 2; ++bp) out(a + 2 * bp, ap + 2 * b) = m(a + 2 * b, ap + 2 * bp);
  return out;
}

}  // namespace thermo
