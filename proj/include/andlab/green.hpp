#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "andlab/field.hpp"
#include "andlab/lattice.hpp"

namespace andlab {

/// Lattice Green's function of -Delta on Z^3:
///   G(a) = (2 pi)^{-3} Int_{[-pi,pi]^3} cos(k.a) / (6 - 2 sum cos k_j) dk.
/// Tensor Gauss-Legendre panels over a dyadic shell decomposition toward the
/// k = 0 singularity; the innermost cube subtracts the 1/|k|^2 model, whose
/// integral over [0,h]^3 scales linearly in h and is computed once by the
/// self-similarity J = 2 * Int_{[0,1]^3 \ [0,1/2]^3} dq/|q|^2.
/// Absolute error <= 1e-6 for |a| <= 30 at resolution >= 64.
double green_function(Site a, int resolution = 64);

/// Table on a radius cap, built on the fundamental domain 0 <= x <= y <= z
/// and looked up through the 48 signed permutations.
class GreenTable {
 public:
  GreenTable() = default;
  static GreenTable build(long long radius_cap, int resolution = 64);

  double operator()(Site a) const;
  bool has(Site a) const;
  long long radius_cap() const { return cap_; }
  int resolution() const { return resolution_; }

  /// Versioned text format: header line then "x y z G" rows.
  std::string to_text() const;
  static std::optional<GreenTable> from_text(const std::string& text);

 private:
  long long cap_ = 0;
  int resolution_ = 0;
  std::map<std::array<long long, 3>, double> data_;  // 0 <= x <= y <= z
};

struct LifshitzPair {
  LatticeField u;          // 1 + G(0) - G(a) - eps_d R^{-d} |a|^2
  LatticeField u0;         // impurity-shifted minimum
  double eq_b3_residual;   // max | -Delta u - (-delta_0 + 2 d eps_d R^{-d}) |
  double u0_min, u0_max;
};

/// Test-function pair of the principal-eigenvalue lower bound; requires
/// u > 0 on |a| < 3R (throws otherwise) and V-bar with impurities.
LifshitzPair lifshitz_test_function(const GreenTable& G, double R, double eps_d,
                                    const Cube& domain, const Potential& Vbar);

struct PrincipalBounds {
  double lambda0 = 0.0;        // computed principal eigenvalue
  double upper_rayleigh = 0.0; // Rayleigh quotient of phi = 1 - Vbar
  double upper_formula = 0.0;  // 8 d R^{-d} + 4 d / n
  double lambda0_R3 = 0.0;     // scaling report
  bool density_ok = false;     // every site within R of an impurity
};

PrincipalBounds principal_eigenvalue_bounds(const Cube& Qn, const Potential& Vbar,
                                            double R);

/// Impurities on the lattice ceil(R) Z^3 inside the cube.
Potential periodic_impurities(const Cube& Qn, double R);

struct BaseCaseTrial {
  std::uint64_t trial = 0;
  bool norm_ok = false;      // ||(H'-lambda)^{-1}|| <= exp(n^{2 delta})
  bool entry_ok = false;     // sampled-column entrywise bound
  bool pass = false;
  double resolvent_norm = 0.0;
  double norm_bound = 0.0;
};

struct BaseCaseResult {
  std::vector<BaseCaseTrial> trials;
  long long failures = 0;
  double failure_frequency = 0.0;
  double wilson_low = 0.0, wilson_high = 0.0;
  long long fills_per_trial = 0;
  long long sampled_columns = 0;
};

/// Monte Carlo probe of the resolvent base case: Bernoulli V on the
/// ceil(1/eps) Z^3 sub-grid, adversarial off-grid fills V' in {0,1}
/// (both extremes plus random fills), bounds checked per trial.
BaseCaseResult base_case_probe(long long n, double delta, double eps, double lambda,
                               long long trials, std::uint64_t seed,
                               long long random_fills = 8,
                               long long sampled_columns = 4);

/// Wilson 95% score interval for a binomial proportion.
std::pair<double, double> wilson_interval(long long successes, long long total);

}  // namespace andlab
