#pragma once

#include "udw/channel.hpp"
#include "udw/qmatrix.hpp"

#include <limits>

namespace udw {

struct QuadratureNoConvergence : Error { using Error::Error; };
struct InconsistentSqueezing : Error { using Error::Error; };

enum class SpatialProfile { Pointlike, GaussianBall };

// Gaussian switching chi(tau) = e^{-tau^2/T^2}; beta = infinity means vacuum.
struct SmearingProfile {
  double coupling = 1.0;        // lambda
  double switching_width = 1.0; // T
  SpatialProfile spatial = SpatialProfile::Pointlike;
  double sigma_x = 0.0;         // GaussianBall width
  double mass = 0.0;
  double beta = std::numeric_limits<double>::infinity();
};

struct QuadratureConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;
};

struct WightmanResult {
  double value = 0.0;
  double error_estimate = 0.0;
  double cutoff_k = 0.0;
  int panels = 0;
};

// Radial reduction of the smeared two-point function:
//   W = lambda^2/(4 pi^2) * int_0^inf dk k^2/w |chi(w)|^2 |F(k)|^2 coth(beta w/2)
// with w = sqrt(k^2+m^2), |chi(w)|^2 = pi T^2 e^{-w^2 T^2/2} and
// |F(k)|^2 = e^{-k^2 sigma_x^2/2} for GaussianBall (1 for Pointlike).
// The thermal kernel uses the KMS form coth(beta w/2).
double smeared_wightman(const SmearingProfile& profile,
                        const QuadratureConfig& cfg = {});
WightmanResult smeared_wightman_detailed(const SmearingProfile& profile,
                                         const QuadratureConfig& cfg = {});

// Quasifree states: nu = e^{-2W}.
double nu_from_wightman(double W);

struct CoherentCoefficients {
  double C2;          // omega_alpha(C_f^2)
  double S2;          // omega_alpha(S_f^2)
  double SC;          // omega_alpha(S_f C_f)
  Complex nu_complex; // nu0 e^{2iE}, feeds ChannelParams
};

CoherentCoefficients coherent_channel_coefficients(double nu0,
                                                   double E_alpha_f);

enum class FieldKind { Vacuum, Thermal, Coherent, Squeezed, Custom };

struct FieldStateSpec {
  FieldKind kind = FieldKind::Vacuum;
  double W_ff = 0.0;         // reference quasifree W(f,f)
  double E_alpha_f = 0.0;    // coherent pairing E(alpha~, f)
  double E_zeta_f = 0.0;     // squeezed pairing E(zeta~, f)
  double W_zeta_zeta = 0.0;  // W0(zeta~, zeta~)
  double ReW_f_zeta = 0.0;   // Re W0(f, zeta~)
  double polarization = 0.0; // a = tr(mu rho_D)
  double beta = std::numeric_limits<double>::infinity();
};

// Bilinear expansion W0(h,h) with h = f + 2 E(zeta~,f) zeta~:
//   W_zeta = W_ff + 4 E ReW0(f,zeta~) + 4 E^2 W0(zeta~,zeta~).
double squeezed_wightman(const FieldStateSpec& spec);

// Pairings add under composed displacements.
double displacement_compose(const std::vector<double>& E_list);

// Post-interaction Weyl expectation. The exact conjugation gives
// base * (cos E - i a sin E); the sign and the imaginary coefficient on the
// polarization term are pinned by the finite-dimensional mode oracle.
// One-point functions stay real (= -aE) and the g=0 normalization is 1.
Complex evolved_weyl_expectation(Complex base, double E_fg, double a);

// W'(g,g) = W(g,g) + E(f,g)^2, independent of the detector polarization.
double updated_fluctuation(double W_gg, double E_fg);

struct MixednessWeights {
  double w1;  // (1+nu)/2
  double w2;  // (1-nu)/2, > 0 for nu < 1 certifies a mixed field state
};
MixednessWeights field_mixedness_weights(double nu);

// S2 of the post-interaction field state, tr(mu rho_D) = 0 case:
// 1 - log2(1 + e^{-4W}).
double field_renyi2(double W);

// Field-state -> channel parameter mapping used by the CLI.
ChannelParams to_channel_params(const FieldStateSpec& spec,
                                const Eigen::Vector3d& axis,
                                Regime regime = Regime::Delta);

}  // namespace udw
