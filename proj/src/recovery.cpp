#include <udw/recovery.hpp>

#include <array>
#include <cmath>
#include <utility>

namespace udw {

namespace {

constexpr double kTraceTol = 1e-9;
constexpr double kSupportLeakTol = 1e-10;
constexpr double kCollapseTol = 1e-10;

// eta^{it}: unitary on supp(eta), zero on the kernel.
Matrix power_it(const Matrix& eta, double t) {
  return matrix_function_complex(
      eta, [t](double x) { return std::exp(Complex(0.0, t * std::log(x))); },
      true);
}

DensityMatrix maximally_mixed() {
  return DensityMatrix(Matrix::Identity(2, 2) * 0.5);
}

DensityMatrix ground_state() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 1) = 1.0;
  return DensityMatrix(std::move(m));
}

const Eigen::Vector3d kFlipAxis(1.0, 0.0, 0.0);

void require_p(double p) {
  if (!(p > 0.5 && p <= 1.0)) throw DomainError("p must lie in (1/2, 1]");
}

struct GapCore {
  double entropy_diff;
  double bound;
};

// Both figures share the pipeline: flip channel at nu = 2p-1, reference I/2,
// bound from the fidelity against the Petz-recovered output.
GapCore gap_core(const DensityMatrix& rho, double p) {
  const DensityMatrix sigma = maximally_mixed();
  const ChannelParams params(Complex(2.0 * p - 1.0, 0.0), kFlipAxis);
  const KrausSet channel = build_channel(params);
  const DensityMatrix out = apply_channel(channel, rho);
  const double diff =
      relative_entropy(rho, sigma) - relative_entropy(out, sigma);
  const PetzMap petz(sigma, channel);
  const DensityMatrix recovered = petz_apply(petz, out);
  const double f = fidelity(rho, recovered);
  return {diff, std::max(0.0, -std::log2(f))};
}

}  // namespace

PetzMap::PetzMap(DensityMatrix reference, KrausSet forward, double rotation_t)
    : reference_(std::move(reference)),
      forward_(std::move(forward)),
      rotation_t_(rotation_t) {
  const Matrix& sigma = reference_.mat();
  const Matrix sigma_out = apply_channel_matrix(forward_, sigma);
  const Matrix sqrt_sigma =
      matrix_function(sigma, [](double x) { return std::sqrt(x); }, true);
  const Matrix inv_sqrt_out = matrix_function(
      sigma_out, [](double x) { return 1.0 / std::sqrt(x); }, true);

  Matrix left = sqrt_sigma;
  Matrix right = inv_sqrt_out;
  if (rotation_t_ != 0.0) {
    left = power_it(sigma, rotation_t_) * left;
    right = right * power_it(sigma_out, -rotation_t_);
  }
  kraus_.ops.reserve(forward_.ops.size());
  kraus_.labels.reserve(forward_.ops.size());
  for (std::size_t j = 0; j < forward_.ops.size(); ++j) {
    kraus_.ops.push_back(left * forward_.ops[j].adjoint() * right);
    kraus_.labels.push_back("petz(" + forward_.labels[j] + ")");
  }
}

DensityMatrix petz_apply(const PetzMap& map, const DensityMatrix& rho) {
  const Matrix& sigma = map.reference().mat();
  if (rho.dim() != sigma.rows())
    throw DimensionMismatch("petz_apply: input dimension mismatch");
  const Matrix proj =
      matrix_function(sigma, [](double) { return 1.0; }, true);
  const Matrix eye = Matrix::Identity(sigma.rows(), sigma.cols());
  const double leak = ((eye - proj) * rho.mat()).trace().real();
  if (leak > kSupportLeakTol)
    throw SupportViolation("petz_apply: input leaks outside supp(reference)");

  Matrix out = apply_channel_matrix(map.kraus(), rho.mat());
  const double tr = out.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol)
    throw Error("petz_apply: recovered trace " + std::to_string(tr));
  out /= tr;
  return DensityMatrix(std::move(out));
}

Matrix petz_apply_matrix(const PetzMap& map, const Matrix& m) {
  return apply_channel_matrix(map.kraus(), m);
}

std::vector<GroundGapRow> recovery_gap_ground(
    const std::vector<double>& p_grid) {
  const DensityMatrix rho = ground_state();
  std::vector<GroundGapRow> rows;
  rows.reserve(p_grid.size());
  for (double p : p_grid) {
    require_p(p);
    const GapCore core = gap_core(rho, p);
    rows.push_back({p, core.entropy_diff, core.bound});
  }
  return rows;
}

std::vector<ThermalGapRow> recovery_gap_thermal(
    double beta_omega, const std::vector<double>& p_grid) {
  // Past exp range the closed-form columns overflow; the Gibbs state is
  // numerically the ground state long before that anyway.
  if (!(beta_omega > 0.0) || beta_omega > 700.0)
    throw InvalidBeta("beta_omega must lie in (0, 700]");
  const double ebo = std::exp(beta_omega);
  Matrix g = Matrix::Zero(2, 2);
  g(0, 0) = 1.0 / (1.0 + ebo);
  g(1, 1) = 1.0 / (1.0 + std::exp(-beta_omega));
  const DensityMatrix rho(std::move(g));

  std::vector<ThermalGapRow> rows;
  rows.reserve(p_grid.size());
  for (double p : p_grid) {
    require_p(p);
    const GapCore core = gap_core(rho, p);

    const double cf_diff =
        (beta_omega * ebo +
         ((p - 1.0) * ebo - p) * std::log2(p - (p - 1.0) * ebo)) /
            (ebo + 1.0) +
        ((p - 1.0 - p * ebo) * std::log2(p * (ebo - 1.0) + 1.0)) / (ebo + 1.0);

    const double q = 2.0 * (p - 1.0) * p;
    const double root = std::exp(0.5 * beta_omega) * std::sqrt((q + 1.0) * ebo - q) +
                        std::sqrt(1.0 - q * (ebo - 1.0));
    const double cf_fid = (root / (ebo + 1.0)) * (root / (ebo + 1.0));

    rows.push_back({p, core.entropy_diff, core.bound, cf_diff, cf_fid});
  }
  return rows;
}

double twirl_density(double t) {
  const double pi = 3.14159265358979323846;
  return (pi / 2.0) / (std::cosh(pi * t) + 1.0);
}

bool rotated_petz_collapse_check(const ChannelParams& params,
                                 const std::vector<double>& t_grid) {
  const DensityMatrix sigma = maximally_mixed();
  const KrausSet channel = build_channel(params);
  const PetzMap base(sigma, channel, 0.0);

  std::array<Matrix, 4> basis;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      Matrix e = Matrix::Zero(2, 2);
      e(j, k) = 1.0;
      basis[static_cast<std::size_t>(2 * j + k)] = e;
    }

  for (double t : t_grid) {
    const PetzMap rotated(sigma, channel, t);
    for (const Matrix& e : basis) {
      const Matrix d = petz_apply_matrix(rotated, e) - petz_apply_matrix(base, e);
      if (d.cwiseAbs().maxCoeff() > kCollapseTol) return false;
    }
  }
  return true;
}

}  // namespace udw
