#pragma once

#include "udw/qmatrix.hpp"

#include <string>
#include <vector>

namespace udw {

struct InvalidNu : Error { using Error::Error; };
struct IncompleteKraus : Error { using Error::Error; };
struct NegativeW : Error { using Error::Error; };

// Delta-coupled and gapless interactions produce the same channel up to a
// global phase and the smearing choice; the tag is metadata only.
enum class Regime { Delta, Gapless };

// nu = omega(e^{2i phi(f)}); axis is the Bloch direction n of the monopole
// mu = n.sigma. |nu| in (1, 1+1e-9] (quadrature drift) is renormalized to the
// boundary on construction; larger moduli are rejected.
struct ChannelParams {
  ChannelParams(Complex nu_in, const Eigen::Vector3d& axis_in,
                Regime regime_in = Regime::Delta);
  Complex nu;
  Eigen::Vector3d axis;
  Regime regime;
};

struct KrausSet {
  std::vector<Matrix> ops;  // 2x2 each
  std::vector<std::string> labels;
};

struct MixedUnitaryDecomposition {
  std::vector<double> probabilities;  // sums to 1, zero-weight terms dropped
  std::vector<Matrix> unitaries;
  std::vector<std::string> labels;
};

// One-parameter fixed-point family: Bloch line r = t*axis, t in [-1,1]
// (exactly the states commuting with mu, for complex nu too).
struct FixedPointFamily {
  Eigen::Vector3d axis;
  DensityMatrix sample(double t) const;
};

Matrix pauli_from_axis(const Eigen::Vector3d& n);  // n.sigma

Matrix bloch_state_matrix(const Eigen::Vector3d& r);  // (I + r.sigma)/2
Eigen::Vector3d bloch_vector(const Matrix& rho);

// Real nu: two-operator quasifree form A0 = sqrt((1+nu)/2) I,
// A1 = sqrt((1-nu)/2) mu. Complex nu: three operators with the K2 imaginary
// coefficient carrying sign(Im nu). Zero operators are dropped.
KrausSet build_channel(const ChannelParams& params);

DensityMatrix apply_channel(const KrausSet& k, const DensityMatrix& rho);
// Linear action on an arbitrary 2x2 matrix (basis checks, adjoint tests,
// recovery-map plumbing); skips density validation.
Matrix apply_channel_matrix(const KrausSet& k, const Matrix& m);

KrausSet adjoint_channel(const KrausSet& k);

// J = (1/2)(I (x) Psi)(|I><I|), a 4x4 state with first-factor marginal I/2.
DensityMatrix choi_matrix(const KrausSet& k);

// (||rho^Gamma||_1 - 1)/2, clamped at 0.
double negativity(const DensityMatrix& rho4);

// Ruskai criterion for this family: J(Psi) <= I_4/2.
bool is_entanglement_breaking(const KrausSet& k);

// p0 = p1 = (1-|nu|)/2, p2 = |nu|; |nu| = 0 degenerates to {1/2 I, 1/2 mu}.
MixedUnitaryDecomposition mixed_unitary_decomposition(
    const ChannelParams& params);

FixedPointFamily fixed_points(const ChannelParams& params);

// C_l1 = |omega(S_2f)|; quasifree states give exactly 0.
double cohering_power(Complex S2f);

// D_l1 = 1 - e^{-2W} for quasifree field states.
double decohering_power(double W);

}  // namespace udw
