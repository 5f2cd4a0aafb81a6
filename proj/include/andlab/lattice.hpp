#pragma once

#include <array>
#include <boost/rational.hpp>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace andlab {

using Rat = boost::rational<long long>;

/// Lattice point of Z^3.  Everything downstream orders sites
/// lexicographically (x, then y, then z); this fixes matrix indexing and all
/// tie-breaking.
struct Site {
  long long x = 0, y = 0, z = 0;

  friend Site operator+(Site a, Site b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Site operator-(Site a, Site b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Site operator*(long long k, Site a) { return {k * a.x, k * a.y, k * a.z}; }
  friend bool operator==(Site a, Site b) { return a.x == b.x && a.y == b.y && a.z == b.z; }
  friend bool operator!=(Site a, Site b) { return !(a == b); }
  friend bool operator<(Site a, Site b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
  }

  long long dot(Site b) const { return x * b.x + y * b.y + z * b.z; }
  long long norm2() const { return x * x + y * y + z * z; }
  long long norm1() const { return std::llabs(x) + std::llabs(y) + std::llabs(z); }
  long long norm_inf() const;
  long long coord(int axis) const { return axis == 1 ? x : (axis == 2 ? y : z); }
};

double norm(Site a);  // Euclidean, for reporting only

/// Rational point of R^3, used where the paper's geometry leaves Z^3
/// (projections, pyramid facets, perturbed membership tests).
struct Vec3Q {
  Rat x, y, z;

  static Vec3Q of(Site a) { return {Rat(a.x), Rat(a.y), Rat(a.z)}; }
  friend Vec3Q operator+(const Vec3Q& a, const Vec3Q& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3Q operator-(const Vec3Q& a, const Vec3Q& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend bool operator==(const Vec3Q& a, const Vec3Q& b) { return a.x == b.x && a.y == b.y && a.z == b.z; }
  Rat dot(Site b) const { return x * b.x + y * b.y + z * b.z; }
  Rat norm2() const { return x * x + y * y + z * z; }
};

inline const std::array<Site, 6> kNeighborSteps = {
    Site{1, 0, 0}, Site{-1, 0, 0}, Site{0, 1, 0},
    Site{0, -1, 0}, Site{0, 0, 1}, Site{0, 0, -1}};

inline Site unit(int axis, int sign = 1) {
  Site e{};
  (axis == 1 ? e.x : axis == 2 ? e.y : e.z) = sign;
  return e;
}

/// Axis-aligned cube Q_r(c) = c + ([-r,r] cap Z)^3.  The radius is kept as an
/// exact rational so that containment tests for half-integer scales (Q_{n/2},
/// Q_{n/4}, ...) never round.
struct Cube {
  Site center{};
  Rat radius{0};

  Cube() = default;
  Cube(Site c, Rat r) : center(c), radius(r) {}
  Cube(Site c, long long r) : center(c), radius(Rat(r)) {}

  long long site_radius() const {  // floor(radius)
    return static_cast<long long>(radius.numerator() / radius.denominator());
  }
  long long side_count() const { return 2 * site_radius() + 1; }
  long long site_count() const {
    long long s = side_count();
    return s * s * s;
  }
  bool contains(Site a) const {
    auto in = [&](long long d) { return Rat(std::llabs(d)) <= radius; };
    return in(a.x - center.x) && in(a.y - center.y) && in(a.z - center.z);
  }
  friend bool operator==(const Cube& a, const Cube& b) {
    return a.center == b.center && a.radius == b.radius;
  }
};

/// Lexicographically ordered list of the cube's lattice points.
std::vector<Site> cube_sites(const Cube& q);

/// Linear index of a site in cube_sites order; -1 if outside.
long long cube_index(const Cube& q, Site a);
Site cube_site_at(const Cube& q, long long index);

/// Axis-aligned integer box, lower[t] <= coord <= upper[t].
struct Cuboid {
  std::array<long long, 3> lower{}, upper{};

  static Cuboid of_cube(const Cube& q);
  static std::optional<Cuboid> hull(const Cuboid& a, const Cuboid& b);

  bool valid() const {
    return lower[0] <= upper[0] && lower[1] <= upper[1] && lower[2] <= upper[2];
  }
  bool contains(Site a) const {
    return lower[0] <= a.x && a.x <= upper[0] && lower[1] <= a.y &&
           a.y <= upper[1] && lower[2] <= a.z && a.z <= upper[2];
  }
  bool contains(const Cuboid& b) const;
  bool disjoint(const Cuboid& b) const;
  bool even() const {
    for (int t = 0; t < 3; ++t)
      if (lower[t] % 2 != 0 || upper[t] % 2 != 0) return false;
    return true;
  }
  long long p_plus() const { return upper[0]; }
  long long p_minus() const { return lower[0]; }
  long long q_plus() const { return upper[1]; }
  long long q_minus() const { return lower[1]; }
  std::vector<Site> sites() const;
};

/// Diagonal directions lambda_1..lambda_4 and the normalized companions
/// lambdabar_2 = lambda_2, lambdabar_3 = lambda_3, lambdabar_4 = -lambda_4,
/// so that lambda_1 . lambdabar_tau = 1 and lambdabar_tau . lambdabar_tau' = -1.
Site lambda_dir(int tau);      // tau in 1..4
Site lambda_bar(int tau);      // tau in 2..4

/// Cone C_a^tau and its sections (membership is an exact integer predicate).
bool cone_membership(Site a, int tau, Site b);
std::vector<Site> cone_section(Site a, int tau, long long k);

/// Sites of the diagonal plane {b . lambda_tau = k} inside a cube.
std::vector<Site> plane_sites(int tau, long long k, const Cube& within);

/// Orthogonal projection onto the plane {x . lambda_1 = k}; exact rationals.
Vec3Q project_lambda1(Site a, long long k);
Vec3Q project_lambda1(const Vec3Q& a, long long k);

bool is_power_of_two(long long v);

/// All dyadic 2L-cubes Q_L(a), a in (L/2)Z^3, with center inside the region;
/// ordered by center.  L must be a power of two.
std::vector<Cube> dyadic_cubes(long long L, const Cube& region);

/// Covering selection in the spirit of the dyadic covering lemma: given
/// defect L2-cubes inside an L0-cube Q and the scale chain
/// L0 >= alpha*L1 >= L1 >= alpha*L2, pick a dyadic L3 in [L1, alpha*L1] and
/// pairwise disjoint L3-cubes inside Q so that every defect sits in one of
/// them with margin >= L3/8.  Greedy per candidate L3, scanned ascending.
struct CoveringResult {
  long long L3 = 0;
  std::vector<Cube> cubes;                 // pairwise disjoint, inside Q
  std::vector<std::size_t> assignment;     // defect i -> index into cubes
};
std::optional<CoveringResult> select_covering(const Cube& Q,
                                              const std::vector<Cube>& defects,
                                              long long alpha, long long L1);

std::string site_to_string(Site a);                   // "x,y,z"
std::optional<Site> site_from_string(const std::string& s);
std::string cube_to_csv(const Cube& q);               // "cx,cy,cz,r"

struct SiteHash {
  std::size_t operator()(Site a) const {
    std::uint64_t h = static_cast<std::uint64_t>(a.x) * 0x9e3779b97f4a7c15ULL;
    h ^= static_cast<std::uint64_t>(a.y) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(a.z) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace andlab
