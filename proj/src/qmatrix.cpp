#include "udw/qmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace udw {

namespace {

double herm_deviation(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void require_hermitian(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("matrix not square");
  if (herm_deviation(m) > kHermTol)
    throw NonHermitian("Hermiticity deviation exceeds 1e-12");
}

Spectrum eig2_closed_form(const Matrix& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const Complex b = m(0, 1);
  const double ab = std::abs(b);
  const double mean = 0.5 * (a + d);
  const double delta = 0.5 * (a - d);
  const double r = std::hypot(delta, ab);

  Spectrum s;
  s.eigenvalues.resize(2);
  s.eigenvalues << mean + r, mean - r;
  s.eigenvectors = Matrix::Zero(2, 2);
  if (ab == 0.0) {
    if (a >= d) {
      s.eigenvectors(0, 0) = 1.0;
      s.eigenvectors(1, 1) = 1.0;
    } else {
      s.eigenvectors(1, 0) = 1.0;
      s.eigenvectors(0, 1) = 1.0;
    }
    return s;
  }
  // v+ = (b, r - delta); for delta > 0 the difference cancels, so use the
  // equivalent quotient form r - delta = |b|^2 / (r + delta).
  const double rmd = delta > 0.0 ? ab * ab / (r + delta) : r - delta;
  Eigen::Vector2cd vp;
  vp << b, Complex(rmd, 0.0);
  vp.normalize();
  Eigen::Vector2cd vm;
  vm << -std::conj(vp(1)), std::conj(vp(0));
  s.eigenvectors.col(0) = vp;
  s.eigenvectors.col(1) = vm;
  return s;
}

// Eigenvalues clamped for entropy-style consumers: [-1e-12, 0) -> 0.
Eigen::VectorXd clamped_eigenvalues(const DensityMatrix& rho) {
  Eigen::VectorXd ev = eig_hermitian(rho.mat()).eigenvalues;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < 0.0) {
      if (ev(i) < -kHermTol) throw NotPositive("eigenvalue below -1e-12");
      ev(i) = 0.0;
    }
  }
  return ev;
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix m) : m_(std::move(m)) {
  require_hermitian(m_);
  if (std::abs(m_.trace().real() - 1.0) > 1e-12 ||
      std::abs(m_.trace().imag()) > 1e-12)
    throw Error("density matrix trace differs from 1 beyond 1e-12");
  const Eigen::VectorXd ev = eig_hermitian(m_).eigenvalues;
  if (ev.minCoeff() < -kHermTol)
    throw NotPositive("density matrix has eigenvalue below -1e-12");
}

Spectrum eig_hermitian(const Matrix& m) {
  require_hermitian(m);
  if (m.rows() == 2) return eig2_closed_form(m);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw Error("Hermitian eigensolver failed to converge");
  const Eigen::Index n = m.rows();
  Spectrum s;
  s.eigenvalues.resize(n);
  s.eigenvectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {  // ascending -> descending
    s.eigenvalues(i) = solver.eigenvalues()(n - 1 - i);
    s.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return s;
}

Matrix matrix_function_complex(const Matrix& m,
                               const std::function<Complex(double)>& f,
                               bool support_only) {
  const Spectrum s = eig_hermitian(m);
  Eigen::VectorXcd fv(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) {
    const double ev = s.eigenvalues(i);
    if (support_only && ev <= kSupportTol) {
      fv(i) = 0.0;
      continue;
    }
    const Complex v = f(ev);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw DomainError("scalar function undefined on a retained eigenvalue");
    fv(i) = v;
  }
  return s.eigenvectors * fv.asDiagonal() * s.eigenvectors.adjoint();
}

Matrix matrix_function(const Matrix& m, const std::function<double(double)>& f,
                       bool support_only) {
  return matrix_function_complex(
      m, [&f](double x) { return Complex(f(x), 0.0); }, support_only);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw DimensionMismatch("fidelity dimension mismatch");
  auto clamped_sqrt = [](double x) { return std::sqrt(std::max(x, 0.0)); };
  const Matrix a = matrix_function(rho.mat(), clamped_sqrt, true);
  const Matrix b = matrix_function(sigma.mat(), clamped_sqrt, true);
  Eigen::JacobiSVD<Matrix> svd(a * b);
  const double root = svd.singularValues().sum();
  return std::clamp(root * root, 0.0, 1.0);
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw DimensionMismatch("relative_entropy dimension mismatch");
  const Spectrum sr = eig_hermitian(rho.mat());
  const Spectrum ss = eig_hermitian(sigma.mat());
  const Eigen::Index n = rho.dim();

  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = std::max(sr.eigenvalues(i), 0.0);
    if (p <= kSupportTol) continue;
    acc += p * std::log2(p);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double q = ss.eigenvalues(j);
      const double overlap =
          std::norm(sr.eigenvectors.col(i).dot(ss.eigenvectors.col(j)));
      const double weight = p * overlap;
      if (q <= kSupportTol) {
        if (weight > 1e-10) return std::numeric_limits<double>::infinity();
        continue;
      }
      acc -= weight * std::log2(q);
    }
  }
  return std::max(acc, 0.0);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const Eigen::VectorXd ev = clamped_eigenvalues(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 0.0) s -= ev(i) * std::log2(ev(i));
  return std::max(s, 0.0);
}

double renyi_entropy(const DensityMatrix& rho, double alpha) {
  if (alpha <= 0.0 || alpha == 1.0)
    throw InvalidAlpha("alpha must lie in (0,1) or (1,inf)");
  const Eigen::VectorXd ev = clamped_eigenvalues(rho);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 0.0) acc += std::pow(ev(i), alpha);
  return std::max(std::log2(acc) / (1.0 - alpha), 0.0);
}

double trace_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

Matrix partial_transpose(const Matrix& m) {
  if (m.rows() != 4 || m.cols() != 4)
    throw DimensionMismatch("partial_transpose expects a 4x4 matrix");
  Matrix out(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int ip = 0; ip < 2; ++ip)
        for (int kp = 0; kp < 2; ++kp)
          out(2 * i + k, 2 * ip + kp) = m(2 * i + kp, 2 * ip + k);
  return out;
}

bool majorizes(const DensityMatrix& sigma, const DensityMatrix& rho) {
  if (rho.dim() != sigma.dim())
    throw DimensionMismatch("majorizes dimension mismatch");
  const Eigen::VectorXd a = eig_hermitian(sigma.mat()).eigenvalues;
  const Eigen::VectorXd b = eig_hermitian(rho.mat()).eigenvalues;
  constexpr double tol = 1e-10;
  if (std::abs(a.sum() - b.sum()) > tol) return false;
  double ca = 0.0, cb = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    ca += a(k);
    cb += b(k);
    if (ca < cb - tol) return false;
  }
  return true;
}

}  // namespace udw
