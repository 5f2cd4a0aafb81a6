#pragma once

#include <optional>
#include <string>
#include <vector>

#include "andlab/hamiltonian.hpp"

namespace andlab {

// Project-wide solver tolerances (fixed; see module contracts).
inline constexpr double kEigTol = 1e-8;
inline constexpr double kLinTol = 1e-10;
inline constexpr long long kDenseLimit = 4096;   // dense resolvent route
inline constexpr long long kDenseEigLimit = 1500;  // automatic dense eig route

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;  // l2-normalized
};

enum class Which { Smallest, Largest };

/// k extremal eigenpairs.  Dense symmetric eigendecomposition for small
/// matrices, shift-invert Lanczos (full reorthogonalization, inner CG)
/// beyond kDenseEigLimit.  Residual guarantee ||Hv - lambda v|| <= kEigTol;
/// throws on non-convergence with the residual in the message.
std::vector<EigenPair> eig_extremal(const HamiltonianMatrix& H, int k, Which which);

/// Fixed-route variants: the dense one serves as the oracle for the
/// iterative one in tests, and vice versa for large cubes.
std::vector<EigenPair> eig_extremal_dense(const HamiltonianMatrix& H, int k, Which which);
std::vector<EigenPair> eig_extremal_iterative(const HamiltonianMatrix& H, int k, Which which);

/// All eigenvalues, ascending (dense only).
std::vector<double> full_spectrum(const HamiltonianMatrix& H);

/// x with (H - lambda) x = e_b, relative residual <= kLinTol.
/// Dense LDLT on small cubes; MINRES beyond.
LatticeField resolvent_column(const HamiltonianMatrix& H, double lambda, Site b);

/// Operator norm of (H - lambda)^{-1} = 1 / dist(lambda, spec H).
double resolvent_norm(const HamiltonianMatrix& H, double lambda);

/// Eigenvalue nearest to lambda (dense route or shift-invert Lanczos).
double nearest_eigenvalue(const HamiltonianMatrix& H, double lambda);

struct LambdaGoodResult {
  bool good = false;
  bool sampled = false;          // true when only 64 columns were checked
  long long pairs_checked = 0;
  // worst pair: largest |G(b,b')| / bound ratio
  Site worst_b{}, worst_bp{};
  double worst_ratio = 0.0;      // > 1 means bad
  double worst_entry = 0.0;
  double worst_bound = 0.0;
};

/// lambda-good test: |(H_Q - lambda)^{-1}(b,b')| <= exp(L^{1-rate} - rate|b-b'|)
/// for all checked pairs, L the cube scale (side - 1).  All pairs when
/// |Q| <= kDenseLimit, else 64 columns spread by stride over the
/// lexicographic order.
LambdaGoodResult classify_lambda_good(const Cube& Q, const Potential& V,
                                      double lambda, double rate);

/// Solves (H - lambda) x = rhs by MINRES (works for indefinite shifts).
/// Returns nullopt if the iteration cap is exceeded.
std::optional<std::vector<double>> shifted_solve(const HamiltonianMatrix& H,
                                                 double lambda,
                                                 const std::vector<double>& rhs,
                                                 double rel_tol = kLinTol,
                                                 long long max_iter = -1);

}  // namespace andlab
