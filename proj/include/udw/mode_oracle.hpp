#pragma once

#include <udw/channel.hpp>
#include <udw/qmatrix.hpp>

namespace udw {

struct TruncationTooSmall : Error { using Error::Error; };

// Single bosonic mode on the first N Fock levels. a|n> = sqrt(n)|n-1>,
// x = (a+a†)/sqrt2, p = i(a†-a)/sqrt2. [x,p] = i holds only on the first
// N-2 levels, which is why every state that enters or leaves the evolution
// gets a tail-population check.
class TruncatedMode {
 public:
  explicit TruncatedMode(int dim);  // dim < 16 is TruncationTooSmall
  int dim() const { return dim_; }
  const Matrix& annihilation() const { return a_; }
  const Matrix& position() const { return x_; }
  const Matrix& momentum() const { return p_; }

 private:
  int dim_;
  Matrix a_, x_, p_;
};

enum class ModeStateKind { Vacuum, Thermal, Coherent, Squeezed };

// phi_f = r_f * x, so the mode-vacuum W(f,f) = r_f^2/2 and a probe
// phi_g = u*x + v*p pairs with it as E(f,g) = r_f*v (CCR commutator value).
struct OracleConfig {
  double r_f = 1.0;
  double probe_u = 0.0;
  double probe_v = 0.0;
  int truncation = 64;
  ModeStateKind state = ModeStateKind::Vacuum;
  double beta_mode = 1.0;    // Thermal only
  Complex coherent_z = 0.0;  // Coherent only
  double squeeze_r = 0.0;    // Squeezed only
};

// Initial mode state; thermal is truncated and renormalized, coherent and
// squeezed are built by exponentiating the displacement / squeeze generators
// so nothing here reuses the closed forms under test.
Matrix mode_state(const TruncatedMode& mode, const OracleConfig& cfg);

// exp(-i (n.sigma) ⊗ r_f x), dense 2N x 2N.
Matrix interaction_unitary(const TruncatedMode& mode, const OracleConfig& cfg,
                           const Eigen::Vector3d& axis);

// tr_mode( U (rho_d ⊗ rho_mode) U† ): the exact detector channel.
DensityMatrix oracle_channel(const OracleConfig& cfg, const DensityMatrix& rho_d,
                             const Eigen::Vector3d& axis);

// tr( rho'_mode exp(i(u x + v p)) ) on the post-interaction mode state.
// Arbiter for the modulation sign convention used by the field module.
Complex oracle_field_expectation(const OracleConfig& cfg,
                                 const DensityMatrix& rho_d,
                                 const Eigen::Vector3d& axis);

struct OracleEntropies {
  double S2_detector;
  double S2_mode;
};

// Renyi-2 of both reduced post-interaction states.
OracleEntropies oracle_entropies(const OracleConfig& cfg,
                                 const DensityMatrix& rho_d,
                                 const Eigen::Vector3d& axis);

// tr( rho_mode e^{2 i phi_f} ): the nu this mode state induces.
Complex oracle_nu(const OracleConfig& cfg);

}  // namespace udw
