#include <udw/mode_oracle.hpp>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <utility>

namespace udw {

namespace {

constexpr double kTailTol = 1e-8;

// Sum of the two highest Fock populations: the truncation leak monitor.
void check_tail(const Matrix& rho_m, const char* where) {
  const Eigen::Index n = rho_m.rows();
  const double tail = rho_m(n - 1, n - 1).real() + rho_m(n - 2, n - 2).real();
  if (!(tail < kTailTol))
    throw TruncationTooSmall(std::string(where) +
                             ": tail population " + std::to_string(tail));
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

struct EvolvedState {
  TruncatedMode mode;
  Matrix rho_mode;   // initial, tail-checked
  Matrix rho_d_out;  // 2x2, trace-normalized
  Matrix rho_m_out;  // NxN, trace-normalized, tail-checked
};

EvolvedState evolve(const OracleConfig& cfg, const DensityMatrix& rho_d,
                    const Eigen::Vector3d& axis) {
  if (rho_d.dim() != 2) throw DimensionMismatch("oracle: detector must be 2x2");
  TruncatedMode mode(cfg.truncation);
  const int n = mode.dim();
  Matrix rho_m = mode_state(mode, cfg);
  check_tail(rho_m, "initial mode state");

  const Matrix u = interaction_unitary(mode, cfg, axis);
  const Matrix joint =
      Eigen::kroneckerProduct(rho_d.mat(), rho_m).eval();
  const Matrix out = u * joint * u.adjoint();

  Matrix d_out = Matrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < n; ++k) d_out(i, j) += out(i * n + k, j * n + k);

  Matrix m_out = Matrix::Zero(n, n);
  for (int i = 0; i < 2; ++i)
    m_out += out.block(i * n, i * n, n, n);

  d_out = hermitian_part(d_out);
  m_out = hermitian_part(m_out);
  d_out /= d_out.trace().real();
  m_out /= m_out.trace().real();
  check_tail(m_out, "evolved mode state");

  return {std::move(mode), std::move(rho_m), std::move(d_out),
          std::move(m_out)};
}

}  // namespace

TruncatedMode::TruncatedMode(int dim) : dim_(dim) {
  if (dim < 16)
    throw TruncationTooSmall("TruncatedMode: dim must be >= 16");
  a_ = Matrix::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) a_(k - 1, k) = std::sqrt(double(k));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  x_ = inv_sqrt2 * (a_ + a_.adjoint());
  p_ = Complex(0.0, inv_sqrt2) * (a_.adjoint() - a_);
}

Matrix mode_state(const TruncatedMode& mode, const OracleConfig& cfg) {
  const int n = mode.dim();
  switch (cfg.state) {
    case ModeStateKind::Vacuum: {
      Matrix m = Matrix::Zero(n, n);
      m(0, 0) = 1.0;
      return m;
    }
    case ModeStateKind::Thermal: {
      if (!(cfg.beta_mode > 0.0))
        throw DomainError("mode_state: beta_mode must be positive");
      Matrix m = Matrix::Zero(n, n);
      double total = 0.0;
      for (int k = 0; k < n; ++k) {
        const double w = std::exp(-cfg.beta_mode * k);
        m(k, k) = w;
        total += w;
      }
      return m / total;
    }
    case ModeStateKind::Coherent: {
      const Matrix& a = mode.annihilation();
      const Matrix gen =
          cfg.coherent_z * a.adjoint() - std::conj(cfg.coherent_z) * a;
      const Matrix d = gen.exp();
      const Eigen::VectorXcd psi = d.col(0);  // D(z)|0>
      return psi * psi.adjoint();
    }
    case ModeStateKind::Squeezed: {
      const Matrix& a = mode.annihilation();
      const Matrix a2 = a * a;
      const Matrix gen = 0.5 * cfg.squeeze_r * (a2 - a2.adjoint());
      const Matrix s = gen.exp();
      const Eigen::VectorXcd psi = s.col(0);  // S(r)|0>
      return psi * psi.adjoint();
    }
  }
  throw Error("mode_state: unknown state kind");
}

Matrix interaction_unitary(const TruncatedMode& mode, const OracleConfig& cfg,
                           const Eigen::Vector3d& axis) {
  const Matrix mu = pauli_from_axis(axis);
  const Matrix phi_f = cfg.r_f * mode.position();
  const Matrix gen =
      Complex(0.0, -1.0) * Eigen::kroneckerProduct(mu, phi_f).eval();
  return gen.exp();
}

DensityMatrix oracle_channel(const OracleConfig& cfg, const DensityMatrix& rho_d,
                             const Eigen::Vector3d& axis) {
  return DensityMatrix(evolve(cfg, rho_d, axis).rho_d_out);
}

Complex oracle_field_expectation(const OracleConfig& cfg,
                                 const DensityMatrix& rho_d,
                                 const Eigen::Vector3d& axis) {
  const EvolvedState ev = evolve(cfg, rho_d, axis);
  const Matrix gen = Complex(0.0, 1.0) * (cfg.probe_u * ev.mode.position() +
                                          cfg.probe_v * ev.mode.momentum());
  const Matrix weyl = gen.exp();
  return (ev.rho_m_out * weyl).trace();
}

OracleEntropies oracle_entropies(const OracleConfig& cfg,
                                 const DensityMatrix& rho_d,
                                 const Eigen::Vector3d& axis) {
  const EvolvedState ev = evolve(cfg, rho_d, axis);
  return {renyi_entropy(DensityMatrix(ev.rho_d_out), 2.0),
          renyi_entropy(DensityMatrix(ev.rho_m_out), 2.0)};
}

Complex oracle_nu(const OracleConfig& cfg) {
  TruncatedMode mode(cfg.truncation);
  const Matrix rho_m = mode_state(mode, cfg);
  check_tail(rho_m, "initial mode state");
  const Matrix gen = Complex(0.0, 2.0 * cfg.r_f) * mode.position();
  return (rho_m * gen.exp()).trace();
}

}  // namespace udw
