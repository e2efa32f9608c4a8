#include "udw/field.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace udw {

namespace {

constexpr double kPi = 3.14159265358979323846;

// QUADPACK 15-point Kronrod / 7-point Gauss pair on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double integral;
  double err;
};

template <typename F>
Panel gk15(const F& f, double a, double b) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = h * kXgk[i];
    const double fv = i == 7 ? f(c) : f(c - dx) + f(c + dx);
    kron += kWgk[i] * fv;
    if (i % 2 == 1) gauss += kWg[i / 2] * fv;  // odd Kronrod slots are Gauss
  }
  return Panel{a, b, kron * h, std::abs(kron - gauss) * h};
}

// coth(x) for x > 0, series below 1e-4 to avoid 1/tanh blowup near 0.
double coth(double x) {
  if (x < 1e-4) return 1.0 / x + x / 3.0;
  if (x > 350.0) return 1.0;
  return 1.0 / std::tanh(x);
}

}  // namespace

WightmanResult smeared_wightman_detailed(const SmearingProfile& profile,
                                         const QuadratureConfig& cfg) {
  if (profile.coupling < 0.0) throw Error("coupling must be >= 0");
  if (profile.switching_width <= 0.0) throw Error("switching width must be > 0");
  if (profile.mass < 0.0) throw Error("mass must be >= 0");
  if (!(profile.beta > 0.0)) throw Error("inverse temperature must be > 0");
  if (cfg.rel_tol <= 0.0 || cfg.abs_tol <= 0.0)
    throw Error("quadrature tolerances must be > 0");

  const double T = profile.switching_width;
  const double m = profile.mass;
  const double beta = profile.beta;
  const double sx2 = profile.spatial == SpatialProfile::GaussianBall
                         ? profile.sigma_x * profile.sigma_x
                         : 0.0;
  const bool vacuum = std::isinf(beta);
  const double lam2 = profile.coupling * profile.coupling;

  // Gaussian factors underflow past exp(-691) ~ 1e-300.
  const double decay = 0.5 * (T * T + sx2);
  const double offset = 0.5 * m * m * T * T;
  WightmanResult res;
  if (offset > 691.0) return res;
  res.cutoff_k = std::sqrt((691.0 - offset) / decay);

  auto integrand = [&](double k) {
    const double w = std::hypot(k, m);
    const double gauss = kPi * T * T * std::exp(-0.5 * w * w * T * T) *
                         std::exp(-0.5 * k * k * sx2);
    double kernel;
    if (m == 0.0) {
      // k^2/w * coth(beta w/2) = k * coth(beta k/2): finite 2/beta limit at 0
      kernel = vacuum ? k
                      : (beta * k * 0.5 < 1e-4
                             ? 2.0 / beta + beta * k * k / 6.0
                             : k * coth(0.5 * beta * k));
    } else {
      kernel = k * k / w * (vacuum ? 1.0 : coth(0.5 * beta * w));
    }
    return kernel * gauss;
  };

  std::vector<Panel> panels;
  const int initial = 4;
  for (int i = 0; i < initial; ++i) {
    const double a = res.cutoff_k * i / initial;
    const double b = res.cutoff_k * (i + 1) / initial;
    panels.push_back(gk15(integrand, a, b));
  }

  int splits = 0;
  for (;;) {
    double total = 0.0, err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      total += panels[i].integral;
      err += panels[i].err;
      if (panels[i].err > panels[worst].err) worst = i;
    }
    if (err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
      res.value = lam2 / (4.0 * kPi * kPi) * total;
      res.error_estimate = lam2 / (4.0 * kPi * kPi) * err;
      res.panels = static_cast<int>(panels.size());
      return res;
    }
    if (++splits > cfg.max_subdivisions)
      throw QuadratureNoConvergence(
          "radial quadrature failed to reach tolerance");
    const Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    panels[worst] = gk15(integrand, p.a, mid);
    panels.push_back(gk15(integrand, mid, p.b));
  }
}

double smeared_wightman(const SmearingProfile& profile,
                        const QuadratureConfig& cfg) {
  return smeared_wightman_detailed(profile, cfg).value;
}

double nu_from_wightman(double W) {
  if (W < 0.0) throw NegativeW("W must be >= 0");
  return std::exp(-2.0 * W);
}

CoherentCoefficients coherent_channel_coefficients(double nu0,
                                                   double E_alpha_f) {
  if (nu0 < 0.0 || nu0 > 1.0) throw InvalidNu("reference nu must lie in [0,1]");
  const double c = std::cos(2.0 * E_alpha_f);
  const double s = std::sin(2.0 * E_alpha_f);
  CoherentCoefficients out;
  out.C2 = 0.5 * (1.0 + nu0 * c);
  out.S2 = 1.0 - out.C2;  // C2 + S2 = 1 exactly
  out.SC = 0.5 * nu0 * s;
  out.nu_complex = Complex(nu0 * c, nu0 * s);
  return out;
}

double squeezed_wightman(const FieldStateSpec& spec) {
  const double e = spec.E_zeta_f;
  double w = spec.W_ff + 4.0 * e * spec.ReW_f_zeta +
             4.0 * e * e * spec.W_zeta_zeta;
  if (w < -1e-10)
    throw InconsistentSqueezing(
        "bilinear form W0(h,h) is negative; pairings inconsistent");
  return std::max(w, 0.0);
}

double displacement_compose(const std::vector<double>& E_list) {
  double acc = 0.0;
  for (double e : E_list) acc += e;
  return acc;
}

Complex evolved_weyl_expectation(Complex base, double E_fg, double a) {
  if (std::abs(a) > 1.0 + 1e-12)
    throw Error("detector polarization |a| must be <= 1");
  return base * Complex(std::cos(E_fg), -a * std::sin(E_fg));
}

double updated_fluctuation(double W_gg, double E_fg) {
  if (W_gg < 0.0) throw NegativeW("W_gg must be >= 0");
  return W_gg + E_fg * E_fg;
}

MixednessWeights field_mixedness_weights(double nu) {
  if (nu < 0.0 || nu > 1.0) throw InvalidNu("nu must lie in [0,1]");
  return MixednessWeights{0.5 * (1.0 + nu), 0.5 * (1.0 - nu)};
}

double field_renyi2(double W) {
  if (W < 0.0) throw NegativeW("W must be >= 0");
  return 1.0 - std::log1p(std::exp(-4.0 * W)) / std::log(2.0);
}

ChannelParams to_channel_params(const FieldStateSpec& spec,
                                const Eigen::Vector3d& axis, Regime regime) {
  switch (spec.kind) {
    case FieldKind::Coherent: {
      const double nu0 = nu_from_wightman(spec.W_ff);
      return ChannelParams(
          coherent_channel_coefficients(nu0, spec.E_alpha_f).nu_complex, axis,
          regime);
    }
    case FieldKind::Squeezed:
      return ChannelParams(nu_from_wightman(squeezed_wightman(spec)), axis,
                           regime);
    case FieldKind::Vacuum:
    case FieldKind::Thermal:
    case FieldKind::Custom:
      return ChannelParams(nu_from_wightman(spec.W_ff), axis, regime);
  }
  throw Error("unknown field state kind");
}

}  // namespace udw
