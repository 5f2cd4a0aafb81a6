#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "andlab/lattice.hpp"

namespace andlab {

/// One open ball of a scattered family.
struct Ball {
  Vec3Q center;
  double radius = 0.0;
  int group = 1;  // t in 1..N

  bool contains(Site a) const;  // strict (open ball), exact when radius^2 is integral
};

/// (N, l, eps)-scattered set: N groups of open radius-l balls, pairwise
/// center distance >= l^{1+eps} + 2l within each group.
struct ScatteredSet {
  int N = 1;
  double l = 1.0;
  double eps = 0.1;
  std::vector<Ball> balls;

  std::string check_invariants() const;  // empty = ok
};

/// Graded set E = E_0 u E_1 u ... u E_d: E_0 unit balls with integer centers
/// pairwise C apart, levels E_i scattered with eps-geometric lengths.
struct GradedSet {
  double C = 10.0;
  double eps = 0.1;
  std::vector<Ball> unit_balls;       // E_0, radius 1
  std::vector<ScatteredSet> levels;   // E_1 .. E_d

  std::vector<double> scale_lengths() const;
  bool contains(Site a) const;
  long long count_inside(const std::vector<Site>& sites) const;
  std::string check_invariants() const;  // empty = ok

  static GradedSet empty() { return GradedSet{}; }
};

struct GradedParams {
  int N = 1;
  std::vector<double> lengths;   // l_1 .. l_d (eps-geometric enforced)
  double C = 10.0;
  double eps = 0.1;
  long long unit_count = 0;      // balls in E_0
  long long balls_per_level = 0; // per (level, group)
  Cube region{};                 // placement region for centers
};

/// Rejection sampler; integer centers.  Throws when the requested counts do
/// not fit the region under the separation constraints.
GradedSet graded_sample(const GradedParams& params, std::uint64_t seed);

/// (Cbar, epsbar)-normality of E in the cube A:
/// E_0 meets A => Cbar <= diam(A); E_i meets A => l_i <= diam(A)^{1-epsbar/2}.
bool is_normal(const GradedSet& E, const Cube& A, double Cbar, double epsbar);

/// Same test against an arbitrary convex region given by its site set
/// (used for tetrahedra, where A is not a cube).
bool is_normal_in_sites(const GradedSet& E, const std::vector<Site>& sites,
                        double Cbar, double epsbar);

}  // namespace andlab
