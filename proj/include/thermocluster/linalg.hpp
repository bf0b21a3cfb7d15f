#pragma once
#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "thermocluster/lattice.hpp"

namespace thermo {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec2 = Eigen::Vector2cd;
using Vec4 = Eigen::Vector4cd;

// qubit order: site k lives at bit k of the basis index (site 0 least significant)

Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();
Mat2 id2();

// kron with `high` on the higher bits
Mat kron_he(const Mat& high, const Mat& low);
// tensor product of per-site 2x2 ops, ops[k] acting on site k
Mat nkron(const std::vector<Mat2>& ops);
// embed a 2x2 op on one site of an n-qubit register
Mat op_on(const Mat2& op, int site, int n);

// diagonal of the controlled-Z circuit over all graph bonds (+-1 entries)
Eigen::VectorXd cz_diagonal(const Graph& g);
// conjugate rho by the CZ circuit
Mat cz_conjugate(const Graph& g, const Mat& rho);

double trace_distance(const Mat& a, const Mat& b);
double min_eig_herm(const Mat& m);
Mat4 partial_transpose_2nd(const Mat4& m);

}  // namespace thermo
