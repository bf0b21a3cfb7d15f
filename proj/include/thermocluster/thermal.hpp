#pragma once
#include "thermocluster/linalg.hpp"

namespace thermo {

struct ModelParams {
  double beta = 1.0;   // inverse temperature, energy unit Delta = 1
  double theta = 0.0;  // field angle in [0, pi/2]
  double t() const { return std::tanh(beta / 2.0); }
};

// single-site factor in the bond-diagonal frame: (I + t cos(theta) X + t sin(theta) Z)/2
Mat2 single_site_thermal(double t, double theta);
// +1 eigenstate of cos(theta) X + sin(theta) Z
Vec2 pure_site_state(double theta);

// interaction graph Hamiltonian: -1/2 sum_i (cos(theta) K_i + sin(theta) Z_i),
// K_i = X_i prod_{j~i} Z_j
Mat hamiltonian(const Graph& g, double theta);
// Gibbs state of `hamiltonian`, computed in closed form
Mat exact_thermal_state(const Graph& g, ModelParams p);
// stabilizer generator K_i as a full matrix
Mat stabilizer(const Graph& g, int i);

struct EndParams {
  double alpha;
  double gamma;
};

// bond-network parameters for one end of a bond at a site of degree d
EndParams site_params(double beta, double theta, int d);
EndParams t0_params(double theta, int d);

// two-site bond operator; first factor acts on the low-bit site
Mat4 bond_operator(EndParams i, EndParams j);

// rank-1 zero-temperature bond, the entangled member of the bond ensemble
Vec4 t0_bond_state(double theta, int di, int dj);

// contract the bond network onto the physical register and normalize
Mat project_peps(const Graph& g, ModelParams p);

}  // namespace thermo
