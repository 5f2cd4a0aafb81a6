#pragma once

#include <string>
#include <vector>

#include "andlab/field.hpp"
#include "andlab/graded.hpp"
#include "andlab/lattice.hpp"

namespace andlab {

inline constexpr double kThetaAlpha = 1.251;  // recursion exponent > 5/4

struct ThetaOptions {
  long long N0 = 4;         // base-case threshold; the proof needs N0 > 1e8
  bool paper_mode = false;  // enforce |Theta| >= beta (n/m)^alpha and strict
                            // containment of recursion cubes
};

/// Output of the recursive construction; conclusions are re-verified by
/// verify_theta, never trusted from the construction path.
struct ThetaSet {
  std::vector<Site> points;
  long long n = 0;
  long long m = 0;
  double K = 0.0;
  double magnitude_floor = 0.0;  // (K+11)^{-12 n} |u(0)|
  double ratio = 0.0;            // |Theta| / (n/m)^alpha
  long long shrink_events = 0;   // recursion cubes clamped into their slabs
};

/// Recursive point-set construction: chains at depths +-n/2 and +-n/4 split
/// Q_n into four even-cuboid cells plus gap slabs; the two cases of the gap
/// sum place extra chains and the recursion unions the results.
ThetaSet theta_construct(const LatticeField& u, const Potential& V,
                         const Cube& Qn, long long m, double K,
                         const ThetaOptions& opt = {});

/// Variant for Dirichlet eigenvectors of H_{Q_n}: u is zero-extended and
/// V - lambda plays the potential role; K must dominate ||V - lambda||_inf.
ThetaSet theta_construct_eigen(const LatticeField& u, const Potential& V,
                               const Cube& Qn, double lambda, long long m,
                               double K, const ThetaOptions& opt = {});

/// Independent checker for the three conclusions: magnitude floor,
/// pairwise Q_m-disjointness, Q_m-containment.  Empty string = pass.
std::string verify_theta(const ThetaSet& theta, const LatticeField& u, const Cube& Qn);

std::string theta_to_csv(const ThetaSet& theta);

enum class DucMode { Linear, Cubic };

struct DucStatistic {
  long long count = 0;
  double threshold = 0.0;  // exp(-C n) |u(0)| or exp(-C n^3) |u(0)|
  long long n = 0;
  long long removed = 0;   // sites of Q_n inside E
};

/// Count of {a in Q_n \ E : |u(a)| >= threshold}.
DucStatistic duc_statistic(const LatticeField& u, const Cube& Qn,
                           const GradedSet& E, double C, DucMode mode);

struct DucBatch {
  std::vector<long long> ns;
  std::vector<long long> counts;
  double fitted_exponent = 0.0;  // least-squares slope of log count vs log n
  double p_reference = kThetaAlpha / 3.0 + 13.0 / 12.0;
};

DucBatch duc_batch(const LatticeField& u, const std::vector<long long>& ns,
                   const GradedSet& E, double C, DucMode mode);

}  // namespace andlab
