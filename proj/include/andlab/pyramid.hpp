#pragma once

#include <optional>
#include <string>
#include <vector>

#include "andlab/field.hpp"
#include "andlab/graded.hpp"
#include "andlab/lattice.hpp"

namespace andlab {

/// Regular tetrahedron frame: basement side midpoint a, size r, apex
/// t_r(a) = a + (r, r, 2r).  Face constants K_tau = apex . lambdabar_tau;
/// the lambda_1 face is the basement triangle with 2r+1 points per side.
struct TetraFrame {
  Site a{};
  long long r = 0;

  Site apex() const { return a + Site{r, r, 2 * r}; }
  long long K(int tau) const { return apex().dot(lambda_bar(tau)); }
  long long base_level() const { return a.dot(lambda_dir(1)); }
  long long apex_level() const { return base_level() + 4 * r; }  // = K2+K3+K4

  bool tetra_contains(Site b) const;
  bool tetra_contains(const Vec3Q& c) const;
  bool basement_contains(Site b) const;           // closed triangle T_{a,r}
  bool basement_interior_contains(Site b) const;  // 2D interior
  std::vector<Site> tetra_sites() const;
  Cuboid bounding_box() const;
};

/// Inset level: face at lambda_1-level h with lateral inset f; describes the
/// truncated tetrahedron {c . lambda_1 >= h, c . lambdabar_tau <= K_tau - f}.
struct InsetLevel {
  long long h = 0;
  long long f = 0;
  Site witness{};  // a point b of Gamma realizing (h, f)
};

long long f_value(const TetraFrame& frame, Site b);  // min_tau (K_tau - b.lambdabar_tau)

/// Face triangle of the truncated tetrahedron at (h, f): edge tau carries
/// (apex_f_level - h)/2 + 1 lattice points, vertices are integral.
struct TruncFace {
  TetraFrame frame;
  long long h = 0, f = 0;

  long long apex_f_level() const { return frame.apex_level() - 3 * f; }
  bool degenerate() const { return apex_f_level() < h; }
  Site vertex(int tau) const;                 // v_{a,r,b,tau}, tau in 2..4
  std::vector<Site> edge_sites(int tau) const;  // L_{a,r,b,tau} cap Z^3
  long long edge_point_count() const { return (apex_f_level() - h) / 2 + 1; }
  bool face_contains(Site c) const;           // T_{a,r,b} membership
};

bool truncated_membership(const TetraFrame& frame, Site b, const Vec3Q& c);

/// hset_subset((h,f),(h',f')): the half-space-minus-tetra set of (h,f) is
/// contained in that of (h',f').  Derived closed form, validated against a
/// point oracle in the tests.
bool hset_subset(const TetraFrame& frame, long long h, long long f,
                 long long hp, long long fp);

/// Pyramid P_{a,r,Gamma}: maximal inset levels ordered by increasing h;
/// levels[0] is (base_level, 0) with witness a.
struct Pyramid {
  TetraFrame frame;
  std::vector<InsetLevel> levels;

  long long top_level() const { return frame.apex_level() - 3 * levels.back().f; }
};

/// Requires a in Gamma and no Gamma point in the open basement triangle.
Pyramid pyramid_build(const TetraFrame& frame, const std::vector<Site>& Gamma);

enum class PyramidClass { Outside, Boundary, BasementInterior, Interior };

/// Exact rational classification; interior is decided by membership of the
/// point and its 14 perturbations by (1/8) d, d in {+-e_i} u {(+-1,+-1,+-1)}
/// (every facet of the pyramid is orthogonal to one of these directions).
bool pyramid_member(const Pyramid& P, const Vec3Q& c);
PyramidClass pyramid_membership(const Pyramid& P, const Vec3Q& c);
/// Integer fast path for lattice points (identical results; all perturbed
/// membership tests work on coordinates scaled by 8).
PyramidClass pyramid_membership(const Pyramid& P, Site b);
std::vector<Site> boundary_sites(const Pyramid& P);

/// Projection pi onto the basement plane; on the pyramid boundary it is
/// bi-Lipschitz: |b1-b2|/10 <= |pi(b1)-pi(b2)| <= |b1-b2|.
Vec3Q pyramid_project(const Pyramid& P, Site b);

/// JSON line: frame plus level list.
std::string pyramid_to_json(const Pyramid& P);
/// CSV "x,y,z" of the boundary lattice points.
std::string boundary_to_csv(const Pyramid& P);

// ---------------------------------------------------------------------------
// basement finder (least-weight path through level-set triangles and
// inflated graded-set balls)

struct BasementTriangle {
  Site a{};        // representative point in (P_{1,k} u P_{1,k+1}) cap Q_{n/2}
  long long r = 0; // maximal quiet radius r(a)
  long long s = 0; // gap index I(a)
};

struct BasementOptions {
  double ball_inflation_exponent = 2.0 / 3.0;  // radius l^{1 + exponent*eps}
  double unit_inflation = -1.0;                // eps^{-2/3} when negative
  bool paper_mode = false;                     // enforce sum (r_i+1) >= n/100
};

struct BasementResult {
  std::vector<BasementTriangle> triangles;
  double sum_radii_plus_one = 0.0;
  bool sum_condition_met = false;      // conclusion 1
  bool overlap_condition_met = false;  // conclusion 3 (<= 2-fold overlap)
  bool normality_met = false;          // conclusion 4 (E normal in each tetra)
  std::string failure;                 // nonempty on verification failure
};

/// Lemma-5.4 style construction. gaps g_1 <= ... <= g_m (m ~ 100 n) with
/// g_i <= g_{i+1} exp(-D n); a0 on the plane P_{1,k} inside Q_{n/4}.
BasementResult find_basements(const LatticeField& u, const Cube& Qn, long long k,
                              Site a0, const std::vector<double>& gaps, double D,
                              const GradedSet& E, const BasementOptions& opt = {});

// ---------------------------------------------------------------------------
// boundary counting statistics

struct BoundaryCountStatistic {
  long long r = 0;
  double threshold = 0.0;        // exp(C10 n) g
  long long count = 0;           // boundary sites above threshold, not in E
  long long count_with_E = 0;    // boundary sites above threshold (E ignored)
  long long boundary_total = 0;
  long long graded_on_boundary = 0;  // |E cap boundary cap Z^3|
  double bound_tetra = 0.0;      // C9 (r^2+1)
  double bound_pmt = 0.0;        // C9' (r^2+1)
  double bound_graded = 0.0;     // (C9'/2)(r^2+1)
  bool hyp_a_in_gamma = false;       // a in Gamma cap Q_{n/2}
  bool hyp_quiet_basement = false;   // |u| < g on the open basement triangles
  bool hyp_band_in_E = false;        // condition 4 of the tetra variant
  bool hyp_interior_bound = false;   // condition 3 of the pmt variant
  bool vacuous = false;
  bool pass = false;  // count meets bound_tetra under valid hypotheses
};

struct BoundaryCountOptions {
  double C9 = 1e-3;
  double C9_prime = 2e-3;
  double C10 = 1.0;
};

BoundaryCountStatistic boundary_count_statistic(const LatticeField& u,
                                                const Pyramid& P, double g,
                                                long long n,
                                                const BoundaryCountOptions& opt,
                                                const GradedSet* E = nullptr);

}  // namespace andlab
