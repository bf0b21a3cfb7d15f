#pragma once
#include <array>
#include <vector>

#include "thermocluster/linalg.hpp"
#include "thermocluster/thermal.hpp"

namespace thermo {

struct ProductTerm {
  double w;       // mixture weight
  Vec2 a, b;      // normalized single-site amplitudes, a on the low-bit site
  double resid;   // second singular value of the factored vector, 0 for exact products
};

// magic basis columns, computational index a + 2b
Mat4 magic_basis();

// symmetric factorization tau = U diag(lam) U^T with unitary U, lam >= 0 descending;
// `scale` anchors the rank threshold to the magnitude of the originating state
void takagi4(const Mat4& tau, double scale, Mat4& u_out, Eigen::Vector4d& lam_out);

double concurrence(const Mat4& rho);

// largest p with bond = p |psi><psi| + (1-p) separable
double max_pe(const Mat4& bond, const Vec4& psi);

// exact decomposition of a separable two-qubit state into at most 4 product terms
std::vector<ProductTerm> product_ensemble(const Mat4& rho, double tol_c = 1e-6);

struct BondMember {
  double prior;
  bool entangled;
  Vec4 psi;                          // entangled member amplitudes (index a + 2b)
  Vec2 a, b;                         // product member amplitudes
  std::array<std::array<double, 2>, 2> diag;  // |amp|^2 by (low-site bit, high-site bit)
  std::array<double, 2> row;         // diag summed over the high-site bit
  std::array<double, 2> col;         // diag summed over the low-site bit
};

struct BondEnsemble {
  Mat4 bond;
  double pe;
  std::vector<BondMember> members;   // members[0] is the entangled state when pe > 0
  std::array<double, 2> rho0_low;    // diagonal of the low-site marginal of `bond`
  std::array<double, 2> rho0_high;
};

BondEnsemble build_bond_ensemble(double beta, double theta, int di, int dj);
// ensemble with fixed entangled weight p and context-independent posteriors
BondEnsemble bernoulli_bond_ensemble(double p);

Mat4 reconstruct_ensemble(const BondEnsemble& e);

}  // namespace thermo
