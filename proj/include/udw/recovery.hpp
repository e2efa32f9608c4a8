#pragma once

#include <udw/channel.hpp>
#include <udw/qmatrix.hpp>

#include <vector>

namespace udw {

struct SupportViolation : Error { using Error::Error; };
struct InvalidBeta : Error { using Error::Error; };

// Petz recovery map for a channel E given in Kraus form:
//   R(rho) = sigma^{1/2} E†( E(sigma)^{-1/2} rho E(sigma)^{-1/2} ) sigma^{1/2},
// materialized as its own Kraus family { sigma^{1/2} K_j† E(sigma)^{-1/2} }
// so CP/TP can be certified with the same machinery as the forward channel.
// rotation_t != 0 wraps it as U_{sigma,t} . R . U_{E(sigma),-t} with
// U_{eta,t}(rho) = eta^{it} rho eta^{-it}; the Kraus operators become
// sigma^{it} R_j E(sigma)^{-it}. Inverses are support-restricted.
class PetzMap {
 public:
  PetzMap(DensityMatrix reference, KrausSet forward, double rotation_t = 0.0);

  const DensityMatrix& reference() const { return reference_; }
  const KrausSet& forward() const { return forward_; }
  double rotation_t() const { return rotation_t_; }
  const KrausSet& kraus() const { return kraus_; }

 private:
  DensityMatrix reference_;
  KrausSet forward_;
  double rotation_t_;
  KrausSet kraus_;
};

// Requires supp(rho) inside supp(reference). The Kraus sum must land within
// 1e-9 of unit trace (it does whenever the input came through the forward
// channel); the leftover rounding is normalized away.
DensityMatrix petz_apply(const PetzMap& map, const DensityMatrix& rho);

// Linear extension to arbitrary matrices; no support or trace checks.
Matrix petz_apply_matrix(const PetzMap& map, const Matrix& m);

struct GroundGapRow {
  double p;
  double entropy_diff;  // D(rho||I/2) - D(Psi rho||I/2), bits
  double bound;         // -log2 F(rho, (R.Psi)(rho)), composed-map numerics
};

struct ThermalGapRow {
  double p;
  double entropy_diff;
  double bound;
  double closed_form_diff;      // printed expression, log read as log2
  double closed_form_fidelity;  // printed expression
};

// Ground-state input diag(0,1) (lower level of h0 = diag(Omega, 0)),
// reference sigma = I/2, flip axis x. p values must lie in (1/2, 1].
std::vector<GroundGapRow> recovery_gap_ground(const std::vector<double>& p_grid);

// Gibbs input diag(1/(1+e^{bO}), 1/(1+e^{-bO})), same reference and axis.
// The closed-form columns are reported next to the numeric ones so any
// disagreement is visible in the table itself.
std::vector<ThermalGapRow> recovery_gap_thermal(
    double beta_omega, const std::vector<double>& p_grid);

// p(t) = (pi/2) / (cosh(pi t) + 1); even, integrates to 1.
double twirl_density(double t);

// True iff the rotated Petz map with reference I/2 acts identically
// (within 1e-10 on a full operator basis) to the t = 0 map for every t.
bool rotated_petz_collapse_check(const ChannelParams& params,
                                 const std::vector<double>& t_grid);

}  // namespace udw
