#include "andlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace andlab {

long long Site::norm_inf() const {
  return std::max({std::llabs(x), std::llabs(y), std::llabs(z)});
}

double norm(Site a) { return std::sqrt(static_cast<double>(a.norm2())); }

std::vector<Site> cube_sites(const Cube& q) {
  const long long r = q.site_radius();
  std::vector<Site> out;
  out.reserve(static_cast<std::size_t>(q.site_count()));
  for (long long x = -r; x <= r; ++x)
    for (long long y = -r; y <= r; ++y)
      for (long long z = -r; z <= r; ++z)
        out.push_back({q.center.x + x, q.center.y + y, q.center.z + z});
  return out;
}

long long cube_index(const Cube& q, Site a) {
  const long long r = q.site_radius();
  const long long s = 2 * r + 1;
  const long long dx = a.x - q.center.x, dy = a.y - q.center.y, dz = a.z - q.center.z;
  if (std::llabs(dx) > r || std::llabs(dy) > r || std::llabs(dz) > r) return -1;
  return ((dx + r) * s + (dy + r)) * s + (dz + r);
}

Site cube_site_at(const Cube& q, long long index) {
  const long long r = q.site_radius();
  const long long s = 2 * r + 1;
  const long long dz = index % s;
  const long long dy = (index / s) % s;
  const long long dx = index / (s * s);
  return {q.center.x + dx - r, q.center.y + dy - r, q.center.z + dz - r};
}

Cuboid Cuboid::of_cube(const Cube& q) {
  const long long r = q.site_radius();
  Cuboid b;
  b.lower = {q.center.x - r, q.center.y - r, q.center.z - r};
  b.upper = {q.center.x + r, q.center.y + r, q.center.z + r};
  return b;
}

std::optional<Cuboid> Cuboid::hull(const Cuboid& a, const Cuboid& b) {
  if (!a.valid() || !b.valid()) return std::nullopt;
  Cuboid h;
  for (int t = 0; t < 3; ++t) {
    h.lower[t] = std::min(a.lower[t], b.lower[t]);
    h.upper[t] = std::max(a.upper[t], b.upper[t]);
  }
  return h;
}

bool Cuboid::contains(const Cuboid& b) const {
  for (int t = 0; t < 3; ++t)
    if (b.lower[t] < lower[t] || b.upper[t] > upper[t]) return false;
  return true;
}

bool Cuboid::disjoint(const Cuboid& b) const {
  for (int t = 0; t < 3; ++t)
    if (upper[t] < b.lower[t] || b.upper[t] < lower[t]) return true;
  return false;
}

std::vector<Site> Cuboid::sites() const {
  std::vector<Site> out;
  if (!valid()) return out;
  for (long long x = lower[0]; x <= upper[0]; ++x)
    for (long long y = lower[1]; y <= upper[1]; ++y)
      for (long long z = lower[2]; z <= upper[2]; ++z) out.push_back({x, y, z});
  return out;
}

Site lambda_dir(int tau) {
  switch (tau) {
    case 1: return {1, 1, 1};
    case 2: return {-1, 1, 1};
    case 3: return {1, -1, 1};
    case 4: return {-1, -1, 1};
    default: throw std::invalid_argument("lambda_dir: tau must be in 1..4");
  }
}

Site lambda_bar(int tau) {
  switch (tau) {
    case 2: return {-1, 1, 1};
    case 3: return {1, -1, 1};
    case 4: return {1, 1, -1};
    default: throw std::invalid_argument("lambda_bar: tau must be in 2..4");
  }
}

bool cone_membership(Site a, int tau, Site b) {
  const Site d = b - a;
  const long long along = std::llabs(d.coord(tau));
  return along >= d.norm1() - std::llabs(d.coord(tau));
}

std::vector<Site> cone_section(Site a, int tau, long long k) {
  // |k| bounds the two transverse offsets by |u|+|v| <= |k|
  std::vector<Site> out;
  const long long m = std::llabs(k);
  for (long long u = -m; u <= m; ++u)
    for (long long v = -(m - std::llabs(u)); v <= m - std::llabs(u); ++v) {
      Site d{};
      switch (tau) {
        case 1: d = {k, u, v}; break;
        case 2: d = {u, k, v}; break;
        case 3: d = {u, v, k}; break;
        default: throw std::invalid_argument("cone_section: tau must be in 1..3");
      }
      out.push_back(a + d);
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Site> plane_sites(int tau, long long k, const Cube& within) {
  const Site lam = lambda_dir(tau);
  std::vector<Site> out;
  const long long r = within.site_radius();
  const Site c = within.center;
  for (long long x = c.x - r; x <= c.x + r; ++x)
    for (long long y = c.y - r; y <= c.y + r; ++y) {
      // solve x*lx + y*ly + z = k for z (lz = 1 for all four directions)
      const long long z = k - x * lam.x - y * lam.y;
      if (std::llabs(z - c.z) <= r) out.push_back({x, y, z});
    }
  std::sort(out.begin(), out.end());
  return out;
}

Vec3Q project_lambda1(Site a, long long k) {
  return project_lambda1(Vec3Q::of(a), k);
}

Vec3Q project_lambda1(const Vec3Q& a, long long k) {
  const Site lam = lambda_dir(1);
  const Rat t = (Rat(k) - a.dot(lam)) / Rat(3);
  return {a.x + t, a.y + t, a.z + t};
}

bool is_power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

std::vector<Cube> dyadic_cubes(long long L, const Cube& region) {
  if (!is_power_of_two(L)) throw std::invalid_argument("dyadic_cubes: L must be a power of two");
  const long long half = L / 2;
  std::vector<Cube> out;
  const long long r = region.site_radius();
  const Site c = region.center;
  auto lo = [&](long long v) {
    // smallest multiple of `half` that is >= v  (half == 0 means L == 1: grid is Z/2, use 1)
    const long long h = std::max<long long>(half, 1);
    long long q = v / h;
    if (q * h < v) ++q;
    return q * h;
  };
  const long long h = std::max<long long>(half, 1);
  for (long long x = lo(c.x - r); x <= c.x + r; x += h)
    for (long long y = lo(c.y - r); y <= c.y + r; y += h)
      for (long long z = lo(c.z - r); z <= c.z + r; z += h)
        out.push_back(Cube{{x, y, z}, Rat(L)});
  return out;  // loop order is already sorted by center
}

namespace {

// Per-axis margin of `inner` inside `cube`, measured only against the part of
// the boundary that is interior to Q (faces shared with Q count as infinite).
bool margin_ok(const Cuboid& Q, const Cuboid& cube, const Cuboid& inner, long long need8) {
  for (int t = 0; t < 3; ++t) {
    // margins scaled by 8 to stay integral: need8 = L3 (i.e. 8 * L3/8)
    if (cube.lower[t] > Q.lower[t] && 8 * (inner.lower[t] - cube.lower[t]) < need8) return false;
    if (cube.upper[t] < Q.upper[t] && 8 * (cube.upper[t] - inner.upper[t]) < need8) return false;
  }
  return true;
}

}  // namespace

std::optional<CoveringResult> select_covering(const Cube& Q,
                                              const std::vector<Cube>& defects,
                                              long long alpha, long long L1) {
  if (!is_power_of_two(alpha) || !is_power_of_two(L1))
    throw std::invalid_argument("select_covering: alpha and L1 must be dyadic");
  const Cuboid qb = Cuboid::of_cube(Q);
  for (long long L3 = L1; L3 <= alpha * L1; L3 *= 2) {
    const long long r3 = L3 / 2;
    if (2 * r3 + 1 > Q.side_count()) break;
    // greedily merge defects into candidate cubes
    std::vector<Cuboid> chosen;
    std::vector<std::size_t> assign(defects.size(), SIZE_MAX);
    bool ok = true;
    for (std::size_t i = 0; i < defects.size() && ok; ++i) {
      if (assign[i] != SIZE_MAX) continue;
      // cluster: every defect within 2*L3 of defect i shares its cube
      Cuboid hull = Cuboid::of_cube(defects[i]);
      std::vector<std::size_t> members{i};
      for (std::size_t j = i + 1; j < defects.size(); ++j) {
        if (assign[j] != SIZE_MAX) continue;
        if ((defects[j].center - defects[i].center).norm_inf() <= 2 * L3) {
          hull = *Cuboid::hull(hull, Cuboid::of_cube(defects[j]));
          members.push_back(j);
        }
      }
      // place an L3-cube centered on the hull, clamped into Q; margins are
      // re-checked below with the Q-face exemption
      Cuboid cand;
      for (int t = 0; t < 3; ++t) {
        long long lo = (hull.lower[t] + hull.upper[t]) / 2 - r3;
        lo = std::max(lo, qb.lower[t]);
        lo = std::min(lo, qb.upper[t] - 2 * r3);
        cand.lower[t] = lo;
        cand.upper[t] = lo + 2 * r3;
      }
      if (!qb.contains(cand) || !cand.contains(hull) ||
          !margin_ok(qb, cand, hull, L3)) {
        ok = false;
        break;
      }
      for (auto& c : chosen)
        if (!c.disjoint(cand)) { ok = false; break; }
      if (!ok) break;
      for (std::size_t j : members) assign[j] = chosen.size();
      chosen.push_back(cand);
    }
    if (ok) {
      CoveringResult res;
      res.L3 = L3;
      for (auto& c : chosen) {
        Site ctr{(c.lower[0] + c.upper[0]) / 2, (c.lower[1] + c.upper[1]) / 2,
                 (c.lower[2] + c.upper[2]) / 2};
        res.cubes.push_back(Cube{ctr, Rat(r3)});
      }
      res.assignment = assign;
      return res;
    }
  }
  return std::nullopt;
}

std::string site_to_string(Site a) {
  std::ostringstream os;
  os << a.x << ',' << a.y << ',' << a.z;
  return os.str();
}

std::optional<Site> site_from_string(const std::string& s) {
  std::istringstream is(s);
  Site a;
  char c1 = 0, c2 = 0;
  if (!(is >> a.x >> c1 >> a.y >> c2 >> a.z) || c1 != ',' || c2 != ',')
    return std::nullopt;
  return a;
}

std::string cube_to_csv(const Cube& q) {
  std::ostringstream os;
  os << q.center.x << ',' << q.center.y << ',' << q.center.z << ',';
  if (q.radius.denominator() == 1)
    os << q.radius.numerator();
  else
    os << q.radius.numerator() << '/' << q.radius.denominator();
  return os.str();
}

}  // namespace andlab
