#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>

namespace udw {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonHermitian : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct NotPositive : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct InvalidAlpha : Error { using Error::Error; };

// Hermiticity assertions use max-abs deviation <= this everywhere.
inline constexpr double kHermTol = 1e-12;
// Spectral support cutoff: eigenvalues <= this count as kernel.
inline constexpr double kSupportTol = 1e-12;

// Validated qubit-side state (2x2 or 4x4): Hermitian within 1e-12,
// unit trace within 1e-12, eigenvalues >= -1e-12.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m);
  const Matrix& mat() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  Matrix m_;
};

struct Spectrum {
  Eigen::VectorXd eigenvalues;  // descending
  Matrix eigenvectors;          // unitary, columns match eigenvalues
};

// Closed-form solve for 2x2, iterative Hermitian solver otherwise.
Spectrum eig_hermitian(const Matrix& m);

// f on the spectrum; support_only applies f to eigenvalues > 1e-12 and
// keeps the kernel at zero (needed for sigma^{1/2}, E(sigma)^{-1/2}).
Matrix matrix_function(const Matrix& m, const std::function<double(double)>& f,
                       bool support_only = false);
Matrix matrix_function_complex(const Matrix& m,
                               const std::function<Complex(double)>& f,
                               bool support_only = false);

// Squared convention: F = ||sqrt(rho) sqrt(sigma)||_1^2. For pure rho this is
// <psi|sigma|psi>, and F = 1 iff rho = sigma.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// D(rho||sigma) in bits; +infinity when supp(rho) is not inside supp(sigma).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

double von_neumann_entropy(const DensityMatrix& rho);  // bits

// S_alpha = -1/(alpha-1) * log2 tr(rho^alpha), alpha in (0,1) or (1,inf).
double renyi_entropy(const DensityMatrix& rho, double alpha);

double trace_norm(const Matrix& m);  // singular-value sum

// Transpose on the second factor of a 2 (x) 2 system; involutive.
Matrix partial_transpose(const Matrix& m);

// True iff every descending partial sum of sigma's spectrum dominates rho's
// (tolerance 1e-10) and the totals agree.
bool majorizes(const DensityMatrix& sigma, const DensityMatrix& rho);

}  // namespace udw
