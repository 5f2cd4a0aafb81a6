#include "andlab/pyramid.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "andlab/io.hpp"

namespace andlab {

namespace {

const std::array<Site, 14> kFacetDirections = {
    Site{1, 0, 0},  Site{-1, 0, 0},  Site{0, 1, 0},   Site{0, -1, 0},
    Site{0, 0, 1},  Site{0, 0, -1},  Site{1, 1, 1},   Site{-1, 1, 1},
    Site{1, -1, 1}, Site{1, 1, -1},  Site{-1, -1, 1}, Site{-1, 1, -1},
    Site{1, -1, -1}, Site{-1, -1, -1}};

}  // namespace

bool TetraFrame::tetra_contains(Site b) const {
  if (b.dot(lambda_dir(1)) < base_level()) return false;
  for (int tau = 2; tau <= 4; ++tau)
    if (b.dot(lambda_bar(tau)) > K(tau)) return false;
  return true;
}

bool TetraFrame::tetra_contains(const Vec3Q& c) const {
  if (c.dot(lambda_dir(1)) < Rat(base_level())) return false;
  for (int tau = 2; tau <= 4; ++tau)
    if (c.dot(lambda_bar(tau)) > Rat(K(tau))) return false;
  return true;
}

bool TetraFrame::basement_contains(Site b) const {
  return b.dot(lambda_dir(1)) == base_level() && tetra_contains(b);
}

bool TetraFrame::basement_interior_contains(Site b) const {
  if (b.dot(lambda_dir(1)) != base_level()) return false;
  for (int tau = 2; tau <= 4; ++tau)
    if (b.dot(lambda_bar(tau)) >= K(tau)) return false;
  return true;
}

Cuboid TetraFrame::bounding_box() const {
  // basement vertices and apex span the tetrahedron
  TruncFace base{*this, base_level(), 0};
  Cuboid bb;
  std::array<Site, 4> pts = {base.vertex(2), base.vertex(3), base.vertex(4), apex()};
  for (int t = 0; t < 3; ++t) {
    bb.lower[t] = bb.upper[t] = pts[0].coord(t + 1);
    for (const Site& p : pts) {
      bb.lower[t] = std::min(bb.lower[t], p.coord(t + 1));
      bb.upper[t] = std::max(bb.upper[t], p.coord(t + 1));
    }
  }
  return bb;
}

std::vector<Site> TetraFrame::tetra_sites() const {
  std::vector<Site> out;
  for (Site b : bounding_box().sites())
    if (tetra_contains(b)) out.push_back(b);
  return out;
}

long long f_value(const TetraFrame& frame, Site b) {
  long long best = frame.K(2) - b.dot(lambda_bar(2));
  for (int tau = 3; tau <= 4; ++tau)
    best = std::min(best, frame.K(tau) - b.dot(lambda_bar(tau)));
  if (best < 0)
    throw std::invalid_argument("f_value: point outside the tetrahedron");
  return best;
}

Site TruncFace::vertex(int tau) const {
  const long long k2 = frame.K(2) - f, k3 = frame.K(3) - f, k4 = frame.K(4) - f;
  switch (tau) {
    case 2: return {(k3 + k4) / 2, (h - k3) / 2, (h - k4) / 2};
    case 3: return {(h - k2) / 2, (k2 + k4) / 2, (h - k4) / 2};
    case 4: return {(h - k2) / 2, (h - k3) / 2, (k2 + k3) / 2};
    default: throw std::invalid_argument("TruncFace::vertex: tau in 2..4");
  }
}

std::vector<Site> TruncFace::edge_sites(int tau) const {
  // edge tau joins the two vertices with indices != tau
  std::array<int, 2> others;
  int at = 0;
  for (int t = 2; t <= 4; ++t)
    if (t != tau) others[static_cast<std::size_t>(at++)] = t;
  const Site v0 = vertex(others[0]);
  const Site v1 = vertex(others[1]);
  const long long steps = edge_point_count() - 1;
  std::vector<Site> out;
  out.push_back(v0);
  if (steps > 0) {
    const Site d{(v1.x - v0.x) / steps, (v1.y - v0.y) / steps, (v1.z - v0.z) / steps};
    for (long long i = 1; i <= steps; ++i) out.push_back(v0 + i * d);
  }
  return out;
}

bool TruncFace::face_contains(Site c) const {
  if (c.dot(lambda_dir(1)) != h) return false;
  for (int tau = 2; tau <= 4; ++tau)
    if (c.dot(lambda_bar(tau)) > frame.K(tau) - f) return false;
  return true;
}

bool truncated_membership(const TetraFrame& frame, Site b, const Vec3Q& c) {
  const long long f = f_value(frame, b);
  if (c.dot(lambda_dir(1)) < Rat(b.dot(lambda_dir(1)))) return false;
  for (int tau = 2; tau <= 4; ++tau)
    if (c.dot(lambda_bar(tau)) > Rat(frame.K(tau) - f)) return false;
  return true;
}

bool hset_subset(const TetraFrame& frame, long long h, long long f,
                 long long hp, long long fp) {
  // hset(h,f) = closure({c.l1 > h} \ T(f));  T(f) apex sits at level S - 3f
  if (hp > h) return false;
  if (fp >= f) return true;
  return frame.apex_level() - 3 * fp <= h;
}

Pyramid pyramid_build(const TetraFrame& frame, const std::vector<Site>& Gamma) {
  bool has_a = false;
  for (Site b : Gamma) {
    if (b == frame.a) has_a = true;
    if (frame.basement_interior_contains(b))
      throw std::invalid_argument("pyramid_build: Gamma meets the open basement");
  }
  if (!has_a) throw std::invalid_argument("pyramid_build: a must belong to Gamma");

  // distinct (h, f) pairs with lexicographically-smallest witness
  std::map<std::pair<long long, long long>, Site> pairs;
  for (Site b : Gamma) {
    if (!frame.tetra_contains(b)) continue;
    const auto key = std::make_pair(b.dot(lambda_dir(1)), f_value(frame, b));
    auto it = pairs.find(key);
    if (it == pairs.end() || b < it->second) pairs[key] = b;
  }

  std::vector<InsetLevel> alive;
  for (const auto& [key, witness] : pairs)
    alive.push_back(InsetLevel{key.first, key.second, witness});

  std::vector<InsetLevel> maximal;
  for (const auto& cand : alive) {
    bool dominated = false;
    for (const auto& other : maximal) {
      // skip self comparisons handled by identical (h, f)
      if (other.h == cand.h && other.f == cand.f) continue;
      if (hset_subset(frame, cand.h, cand.f, other.h, other.f) &&
          !hset_subset(frame, other.h, other.f, cand.h, cand.f)) {
        dominated = true;
        break;
      }
    }
    if (dominated) continue;
    // drop previously kept levels that the candidate dominates
    std::vector<InsetLevel> kept;
    bool duplicate = false;
    for (const auto& other : maximal) {
      const bool o_in_c = hset_subset(frame, other.h, other.f, cand.h, cand.f);
      const bool c_in_o = hset_subset(frame, cand.h, cand.f, other.h, other.f);
      if (o_in_c && c_in_o) duplicate = true;  // identical hsets
      if (!(o_in_c && !c_in_o)) kept.push_back(other);
    }
    maximal = std::move(kept);
    if (!duplicate) maximal.push_back(cand);
  }

  std::sort(maximal.begin(), maximal.end(),
            [](const InsetLevel& x, const InsetLevel& y) { return x.h < y.h; });
  if (maximal.empty() || maximal.front().h != frame.base_level() ||
      maximal.front().f != 0)
    throw std::logic_error("pyramid_build: base level missing (expected (a.l1, 0) maximal)");

  Pyramid P;
  P.frame = frame;
  P.levels = std::move(maximal);
  return P;
}

bool pyramid_member(const Pyramid& P, const Vec3Q& c) {
  const Site l1 = lambda_dir(1);
  const Rat cl1 = c.dot(l1);
  const std::size_t m = P.levels.size();
  for (std::size_t i = 0; i < m; ++i) {
    const auto& lev = P.levels[i];
    if (cl1 < Rat(lev.h)) continue;
    if (i + 1 < m && cl1 > Rat(P.levels[i + 1].h)) continue;
    bool inside = true;
    for (int tau = 2; tau <= 4; ++tau)
      if (c.dot(lambda_bar(tau)) > Rat(P.frame.K(tau) - lev.f)) { inside = false; break; }
    if (inside) return true;
  }
  return false;
}

PyramidClass pyramid_membership(const Pyramid& P, const Vec3Q& c) {
  if (!pyramid_member(P, c)) return PyramidClass::Outside;
  const Site l1 = lambda_dir(1);
  // basement-interior: on the base plane, strictly inside the base triangle
  if (c.dot(l1) == Rat(P.frame.base_level())) {
    bool strict = true;
    for (int tau = 2; tau <= 4; ++tau)
      if (c.dot(lambda_bar(tau)) >= Rat(P.frame.K(tau))) { strict = false; break; }
    if (strict) return PyramidClass::BasementInterior;
    return PyramidClass::Boundary;
  }
  // interior iff all 14 facet-direction perturbations by 1/8 stay inside
  const Rat eighth(1, 8);
  for (const Site& d : kFacetDirections) {
    const Vec3Q p{c.x + eighth * d.x, c.y + eighth * d.y, c.z + eighth * d.z};
    if (!pyramid_member(P, p)) return PyramidClass::Boundary;
  }
  return PyramidClass::Interior;
}

namespace {

// membership of a point with coordinates scaled by `scale` (pure integers)
bool member_scaled(const Pyramid& P, Site c, long long scale) {
  const Site l1 = lambda_dir(1);
  const long long cl1 = c.dot(l1);
  const std::size_t m = P.levels.size();
  for (std::size_t i = 0; i < m; ++i) {
    const auto& lev = P.levels[i];
    if (cl1 < scale * lev.h) continue;
    if (i + 1 < m && cl1 > scale * P.levels[i + 1].h) continue;
    bool inside = true;
    for (int tau = 2; tau <= 4; ++tau)
      if (c.dot(lambda_bar(tau)) > scale * (P.frame.K(tau) - lev.f)) {
        inside = false;
        break;
      }
    if (inside) return true;
  }
  return false;
}

}  // namespace

PyramidClass pyramid_membership(const Pyramid& P, Site b) {
  const Site b8 = 8 * b;
  if (!member_scaled(P, b8, 8)) return PyramidClass::Outside;
  const Site l1 = lambda_dir(1);
  if (b.dot(l1) == P.frame.base_level()) {
    bool strict = true;
    for (int tau = 2; tau <= 4; ++tau)
      if (b.dot(lambda_bar(tau)) >= P.frame.K(tau)) { strict = false; break; }
    return strict ? PyramidClass::BasementInterior : PyramidClass::Boundary;
  }
  for (const Site& d : kFacetDirections)
    if (!member_scaled(P, b8 + d, 8)) return PyramidClass::Boundary;
  return PyramidClass::Interior;
}

std::vector<Site> boundary_sites(const Pyramid& P) {
  std::vector<Site> out;
  for (Site b : P.frame.bounding_box().sites())
    if (pyramid_membership(P, b) == PyramidClass::Boundary) out.push_back(b);
  return out;
}

Vec3Q pyramid_project(const Pyramid& P, Site b) {
  return project_lambda1(b, P.frame.base_level());
}

std::string pyramid_to_json(const Pyramid& P) {
  JsonObject o;
  o.put("a", site_to_string(P.frame.a));
  o.put("r", P.frame.r);
  std::string levels = "[";
  for (std::size_t i = 0; i < P.levels.size(); ++i) {
    if (i) levels += ",";
    JsonObject lv;
    lv.put("h", P.levels[i].h);
    lv.put("f", P.levels[i].f);
    lv.put("witness", site_to_string(P.levels[i].witness));
    levels += lv.str();
  }
  levels += "]";
  o.put_raw("levels", levels);
  return o.str();
}

std::string boundary_to_csv(const Pyramid& P) {
  std::ostringstream os;
  os << "x,y,z\n";
  for (Site b : boundary_sites(P)) os << b.x << ',' << b.y << ',' << b.z << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// basement finder

namespace {

// Closed plane triangle at level k with bounds M_tau = 3 * (c.lbar_tau + 2 rho)
// kept as integers (centers are lattice points projected, so thirds).
struct PlaneTriangle {
  long long level = 0;           // plane index (c . lambda_1)
  std::array<long long, 3> M{};  // scaled bounds for tau = 2, 3, 4
};

PlaneTriangle make_plane_triangle(const Vec3Q& c, long long level, long long rho) {
  PlaneTriangle T;
  T.level = level;
  for (int tau = 2; tau <= 4; ++tau) {
    const Rat m = c.dot(lambda_bar(tau)) + Rat(tau == 4 ? 0 : 2 * rho);
    const Rat scaled = m * 3;
    if (scaled.denominator() != 1)
      throw std::logic_error("plane triangle bound not integral after scaling");
    T.M[static_cast<std::size_t>(tau - 2)] = scaled.numerator();
  }
  return T;
}

bool triangles_intersect(const PlaneTriangle& A, const PlaneTriangle& B) {
  if (A.level != B.level) return false;
  long long s = 0;
  for (int i = 0; i < 3; ++i) s += std::min(A.M[static_cast<std::size_t>(i)], B.M[static_cast<std::size_t>(i)]);
  return s >= 3 * A.level;
}

bool triangle_contains_scaled(const PlaneTriangle& T, const std::array<long long, 3>& w3) {
  for (int i = 0; i < 3; ++i)
    if (w3[static_cast<std::size_t>(i)] > T.M[static_cast<std::size_t>(i)]) return false;
  return true;
}

std::array<long long, 3> scaled_coords(const Vec3Q& p) {
  std::array<long long, 3> w{};
  for (int tau = 2; tau <= 4; ++tau) {
    const Rat v = p.dot(lambda_bar(tau)) * 3;
    if (v.denominator() != 1) throw std::logic_error("scaled plane coordinate not integral");
    w[static_cast<std::size_t>(tau - 2)] = v.numerator();
  }
  return w;
}

struct P3 {
  double x, y, z;
};

P3 triangle_vertex_d(const PlaneTriangle& T, int tau) {
  const double m2 = static_cast<double>(T.M[0]) / 3.0;
  const double m3 = static_cast<double>(T.M[1]) / 3.0;
  const double m4 = static_cast<double>(T.M[2]) / 3.0;
  const double k = static_cast<double>(T.level);
  switch (tau) {
    case 2: return {(m3 + m4) / 2, (k - m3) / 2, (k - m4) / 2};
    case 3: return {(k - m2) / 2, (m2 + m4) / 2, (k - m4) / 2};
    default: return {(k - m2) / 2, (k - m3) / 2, (m2 + m3) / 2};
  }
}

// lattice points of the triangle with bounds M at the given plane level
std::vector<Site> plane_triangle_sites(const PlaneTriangle& T, bool open) {
  // bounding box from the three (rational) vertices
  double xs_min = 1e300, xs_max = -1e300, ys_min = 1e300, ys_max = -1e300;
  for (int tau = 2; tau <= 4; ++tau) {
    const P3 v = triangle_vertex_d(T, tau);
    xs_min = std::min(xs_min, v.x);
    xs_max = std::max(xs_max, v.x);
    ys_min = std::min(ys_min, v.y);
    ys_max = std::max(ys_max, v.y);
  }
  xs_min = std::floor(xs_min) - 1;
  xs_max = std::ceil(xs_max) + 1;
  ys_min = std::floor(ys_min) - 1;
  ys_max = std::ceil(ys_max) + 1;

  std::vector<Site> out;
  for (long long x = static_cast<long long>(xs_min); x <= static_cast<long long>(xs_max); ++x)
    for (long long y = static_cast<long long>(ys_min); y <= static_cast<long long>(ys_max); ++y) {
      const Site b{x, y, T.level - x - y};
      bool ok = true;
      for (int tau = 2; tau <= 4; ++tau) {
        const long long w = 3 * b.dot(lambda_bar(tau));
        const long long M = T.M[static_cast<std::size_t>(tau - 2)];
        if (open ? (w >= M) : (w > M)) { ok = false; break; }
      }
      if (ok) out.push_back(b);
    }
  std::sort(out.begin(), out.end());
  return out;
}

struct Disc {
  double cx = 0, cy = 0, cz = 0;  // center in the plane (3D coords)
  double radius = 0;              // < 0 means empty
};

Disc ball_plane_disc(const Vec3Q& center, double radius, long long level) {
  Disc d;
  const double cl1 = boost::rational_cast<double>(center.dot(lambda_dir(1)));
  const double h = (cl1 - static_cast<double>(level));
  const double d2 = radius * radius - h * h / 3.0;
  if (d2 <= 0) {
    d.radius = -1;
    return d;
  }
  const Vec3Q p = project_lambda1(center, level);
  d.cx = boost::rational_cast<double>(p.x);
  d.cy = boost::rational_cast<double>(p.y);
  d.cz = boost::rational_cast<double>(p.z);
  d.radius = std::sqrt(d2);
  return d;
}

double dist_point_triangle(P3 p, P3 a, P3 b, P3 c) {
  auto sub = [](P3 u, P3 v) { return P3{u.x - v.x, u.y - v.y, u.z - v.z}; };
  auto dot = [](P3 u, P3 v) { return u.x * v.x + u.y * v.y + u.z * v.z; };
  const P3 ab = sub(b, a), ac = sub(c, a), ap = sub(p, a);
  const double d1 = dot(ab, ap), d2 = dot(ac, ap);
  auto dist = [&](P3 q) {
    const P3 d = sub(p, q);
    return std::sqrt(dot(d, d));
  };
  if (d1 <= 0 && d2 <= 0) return dist(a);
  const P3 bp = sub(p, b);
  const double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0 && d4 <= d3) return dist(b);
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) {
    const double v = d1 / (d1 - d3);
    return dist(P3{a.x + v * ab.x, a.y + v * ab.y, a.z + v * ab.z});
  }
  const P3 cp = sub(p, c);
  const double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0 && d5 <= d6) return dist(c);
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) {
    const double w = d2 / (d2 - d6);
    return dist(P3{a.x + w * ac.x, a.y + w * ac.y, a.z + w * ac.z});
  }
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return dist(P3{b.x + w * (c.x - b.x), b.y + w * (c.y - b.y), b.z + w * (c.z - b.z)});
  }
  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  return dist(P3{a.x + ab.x * v + ac.x * w, a.y + ab.y * v + ac.y * w,
                 a.z + ab.z * v + ac.z * w});
}

bool triangle_disc_intersect(const PlaneTriangle& T, const Disc& D) {
  if (D.radius < 0) return false;
  const P3 p{D.cx, D.cy, D.cz};
  const double d = dist_point_triangle(p, triangle_vertex_d(T, 2),
                                       triangle_vertex_d(T, 3), triangle_vertex_d(T, 4));
  return d <= D.radius;
}

bool disc_disc_intersect(const Disc& A, const Disc& B) {
  if (A.radius < 0 || B.radius < 0) return false;
  const double dx = A.cx - B.cx, dy = A.cy - B.cy, dz = A.cz - B.cz;
  return std::sqrt(dx * dx + dy * dy + dz * dz) <= A.radius + B.radius;
}

}  // namespace

BasementResult find_basements(const LatticeField& u, const Cube& Qn, long long k,
                              Site a0, const std::vector<double>& gaps, double D,
                              const GradedSet& E, const BasementOptions& opt) {
  BasementResult res;
  const long long n = Qn.site_radius();
  if (gaps.size() < 2) { res.failure = "need at least two gap levels"; return res; }
  if (gaps.front() <= 0.0) { res.failure = "gap levels must be positive"; return res; }
  for (std::size_t i = 0; i + 1 < gaps.size(); ++i)
    if (!(gaps[i] <= gaps[i + 1] * std::exp(-D * static_cast<double>(n)))) {
      res.failure = "gap levels violate g_i <= g_{i+1} exp(-Dn)";
      return res;
    }
  if (a0.dot(lambda_dir(1)) != k + Qn.center.dot(lambda_dir(1))) {
    res.failure = "a0 not on the plane P_{1,k}";
    return res;
  }
  Cube quarter(Qn.center, Qn.radius / 4);
  if (!quarter.contains(a0)) { res.failure = "a0 outside Q_{n/4}"; return res; }
  if (!(std::fabs(u(a0)) > gaps.back())) {
    res.failure = "gap levels must stay below |u(a0)|";
    return res;
  }

  const double boost_factor = std::exp(D * static_cast<double>(n));
  const long long abs_k = k + Qn.center.dot(lambda_dir(1));
  Cube half(Qn.center, Qn.radius / 2);

  auto in_R = [&](Site b) {
    if (!half.contains(b)) return false;
    const long long l1 = b.dot(lambda_dir(1));
    if (l1 != abs_k && l1 != abs_k + 1) return false;
    return std::fabs(u(b)) >= boost_factor * gaps.front();
  };
  auto gap_index = [&](Site b) {  // I(a), 1-based
    const double v = std::fabs(u(b));
    long long best = 0;
    for (std::size_t i = 0; i < gaps.size(); ++i)
      if (v >= boost_factor * gaps[i]) best = static_cast<long long>(i) + 1;
    return best;
  };
  const long long r_cap = std::max<long long>(0, (n + 31) / 32 - 1);  // r < n/32
  auto quiet_radius = [&](Site b) {
    const long long idx = gap_index(b);
    const double g = gaps[static_cast<std::size_t>(idx - 1)];
    long long r = 0;
    while (r + 1 <= r_cap) {
      bool quiet = true;
      for (long long lvl = abs_k; lvl <= abs_k + 1 && quiet; ++lvl) {
        const auto T = make_plane_triangle(project_lambda1(b, lvl), lvl, r + 1);
        for (Site c : plane_triangle_sites(T, /*open=*/true))
          if (u.has(c) && std::fabs(u(c)) >= g) { quiet = false; break; }
      }
      if (!quiet) break;
      ++r;
    }
    return r;
  };

  if (!in_R(a0)) { res.failure = "a0 violates the membership threshold for R"; return res; }

  const long long r0 = quiet_radius(a0);
  if (100 * r0 >= n) {
    res.triangles.push_back({a0, r0, gap_index(a0)});
  } else {
    // escape walk toward the boundary of Q_{n/2}
    std::vector<Site> walk{a0};
    Site cur = a0;
    Site a_inf = a0;
    for (long long step = 0; step <= 100 * n; ++step) {
      const long long rc = quiet_radius(cur);
      Site best{};
      double best_abs = -1.0;
      bool found = false;
      for (long long lvl = abs_k; lvl <= abs_k + 1; ++lvl) {
        const auto Tout = make_plane_triangle(project_lambda1(cur, lvl), lvl, rc + 1);
        const auto Tin = make_plane_triangle(project_lambda1(cur, lvl), lvl, rc);
        for (Site c : plane_triangle_sites(Tout, /*open=*/true)) {
          // annulus: inside the open (rc+1)-triangle, outside the open rc-triangle
          const auto w = scaled_coords(Vec3Q::of(c));
          bool in_inner = true;
          for (int i = 0; i < 3 && in_inner; ++i)
            if (w[static_cast<std::size_t>(i)] >= Tin.M[static_cast<std::size_t>(i)]) in_inner = false;
          if (in_inner) continue;
          if (!u.has(c)) continue;
          const double val = std::fabs(u(c));
          if (!found || val > best_abs || (val == best_abs && c < best)) {
            best = c;
            best_abs = val;
            found = true;
          }
        }
      }
      if (!found) { res.failure = "escape walk: empty annulus"; return res; }
      if (!in_R(best)) { a_inf = cur; break; }
      cur = best;
      walk.push_back(cur);
      a_inf = cur;
    }

    // vertex set: triangles for every a in R, then inflated graded balls
    std::vector<Site> Rset;
    for (long long lvl = abs_k; lvl <= abs_k + 1; ++lvl)
      for (Site b : plane_sites(1, lvl, half))
        if (in_R(b)) Rset.push_back(b);
    std::sort(Rset.begin(), Rset.end());

    struct Vertex {
      PlaneTriangle tri{};
      Disc disc{};
      bool is_triangle = false;
      Site rep{};
      long long weight = 1;
    };
    std::vector<Vertex> verts;
    for (Site b : Rset) {
      Vertex v;
      v.is_triangle = true;
      v.rep = b;
      v.tri = make_plane_triangle(project_lambda1(b, abs_k), abs_k, quiet_radius(b) + 1);
      v.weight = 2;
      verts.push_back(v);
    }
    const std::size_t tri_count = verts.size();
    const double unit_inflation =
        opt.unit_inflation > 0 ? opt.unit_inflation : std::pow(E.eps, -2.0 / 3.0);
    for (const auto& b : E.unit_balls) {
      Vertex v;
      v.disc = ball_plane_disc(b.center, unit_inflation, abs_k);
      if (v.disc.radius < 0) continue;
      verts.push_back(v);
    }
    for (const auto& lev : E.levels) {
      const double infl = std::pow(lev.l, 1.0 + opt.ball_inflation_exponent * E.eps);
      for (const auto& b : lev.balls) {
        Vertex v;
        v.disc = ball_plane_disc(b.center, infl, abs_k);
        if (v.disc.radius < 0) continue;
        verts.push_back(v);
      }
    }

    auto adjacent = [&](const Vertex& x, const Vertex& y) {
      if (x.is_triangle && y.is_triangle) return triangles_intersect(x.tri, y.tri);
      if (x.is_triangle) return triangle_disc_intersect(x.tri, y.disc);
      if (y.is_triangle) return triangle_disc_intersect(y.tri, x.disc);
      return disc_disc_intersect(x.disc, y.disc);
    };
    auto contains_site_projection = [&](const Vertex& v, Site b) {
      const Vec3Q p = project_lambda1(b, abs_k);
      if (v.is_triangle) return triangle_contains_scaled(v.tri, scaled_coords(p));
      const double dx = boost::rational_cast<double>(p.x) - v.disc.cx;
      const double dy = boost::rational_cast<double>(p.y) - v.disc.cy;
      const double dz = boost::rational_cast<double>(p.z) - v.disc.cz;
      return v.disc.radius >= 0 &&
             std::sqrt(dx * dx + dy * dy + dz * dz) <= v.disc.radius;
    };

    // Dijkstra on vertex weights, deterministic tie-break by vertex index
    const std::size_t V = verts.size();
    std::vector<long long> dist(V, LLONG_MAX);
    std::vector<std::size_t> prev(V, SIZE_MAX);
    using QItem = std::pair<long long, std::size_t>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
    for (std::size_t i = 0; i < V; ++i)
      if (contains_site_projection(verts[i], a0)) {
        dist[i] = verts[i].weight;
        pq.push({dist[i], i});
      }
    while (!pq.empty()) {
      auto [d0, i] = pq.top();
      pq.pop();
      if (d0 > dist[i]) continue;
      for (std::size_t j = 0; j < V; ++j) {
        if (j == i || !adjacent(verts[i], verts[j])) continue;
        const long long nd = d0 + verts[j].weight;
        if (nd < dist[j]) {
          dist[j] = nd;
          prev[j] = i;
          pq.push({nd, j});
        }
      }
    }
    std::size_t target = SIZE_MAX;
    for (std::size_t i = 0; i < V; ++i) {
      if (dist[i] == LLONG_MAX || !contains_site_projection(verts[i], a_inf)) continue;
      if (target == SIZE_MAX || dist[i] < dist[target]) target = i;
    }
    if (target == SIZE_MAX) {
      res.failure = "endpoints disconnected in the triangle/ball graph";
      return res;
    }
    std::vector<std::size_t> path;
    for (std::size_t v = target; v != SIZE_MAX; v = prev[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    for (std::size_t v : path)
      if (verts[v].is_triangle) {
        const Site b = verts[v].rep;
        res.triangles.push_back({b, quiet_radius(b), gap_index(b)});
      }
    (void)tri_count;
  }

  // post-hoc verification of the conclusions
  for (const auto& bt : res.triangles) {
    res.sum_radii_plus_one += static_cast<double>(bt.r + 1);
    const double g = gaps[static_cast<std::size_t>(bt.s - 1)];
    if (!(std::fabs(u(bt.a)) >= boost_factor * g)) {
      res.failure = "conclusion 2 fails: |u(a_i)| below exp(Dn) g_{s_i}";
      return res;
    }
    for (long long lvl = abs_k; lvl <= abs_k + 1; ++lvl) {
      const auto T = make_plane_triangle(project_lambda1(bt.a, lvl), lvl, bt.r);
      for (Site c : plane_triangle_sites(T, /*open=*/true))
        if (u.has(c) && !(std::fabs(u(c)) < g)) {
          res.failure = "conclusion 2 fails: open basement triangle not quiet";
          return res;
        }
    }
  }
  // conclusion 3: no three triangles share a plane point
  res.overlap_condition_met = true;
  std::vector<PlaneTriangle> tris;
  for (const auto& bt : res.triangles)
    tris.push_back(make_plane_triangle(project_lambda1(bt.a, abs_k), abs_k, bt.r));
  for (std::size_t i = 0; i < tris.size() && res.overlap_condition_met; ++i)
    for (std::size_t j = i + 1; j < tris.size() && res.overlap_condition_met; ++j)
      for (std::size_t l = j + 1; l < tris.size(); ++l) {
        long long s = 0;
        for (int t = 0; t < 3; ++t)
          s += std::min({tris[i].M[static_cast<std::size_t>(t)],
                         tris[j].M[static_cast<std::size_t>(t)],
                         tris[l].M[static_cast<std::size_t>(t)]});
        if (s >= 3 * abs_k) { res.overlap_condition_met = false; break; }
      }
  // conclusion 4: normality of E in each tetrahedron
  res.normality_met = true;
  for (const auto& bt : res.triangles) {
    TetraFrame fr{bt.a, bt.r};
    if (!is_normal_in_sites(E, fr.tetra_sites(), std::pow(E.eps, -0.5), E.eps)) {
      res.normality_met = false;
      break;
    }
  }
  res.sum_condition_met = 100.0 * res.sum_radii_plus_one >= static_cast<double>(n);
  if (opt.paper_mode && !res.sum_condition_met)
    res.failure = "paper mode: sum (r_i + 1) < n/100";
  return res;
}

// ---------------------------------------------------------------------------

BoundaryCountStatistic boundary_count_statistic(const LatticeField& u,
                                                const Pyramid& P, double g,
                                                long long n,
                                                const BoundaryCountOptions& opt,
                                                const GradedSet* E) {
  BoundaryCountStatistic st;
  st.r = P.frame.r;
  st.threshold = std::exp(opt.C10 * static_cast<double>(n)) * g;
  const double gamma_threshold = std::exp(3.0 * opt.C10 * static_cast<double>(n)) * g;

  const auto bdry = boundary_sites(P);
  st.boundary_total = static_cast<long long>(bdry.size());
  for (Site b : bdry) {
    if (!u.has(b)) continue;
    const bool in_E = E != nullptr && E->contains(b);
    if (in_E) ++st.graded_on_boundary;
    if (std::fabs(u(b)) >= st.threshold) {
      ++st.count_with_E;
      if (!in_E) ++st.count;
    }
  }
  const double r2p1 = static_cast<double>(st.r * st.r + 1);
  st.bound_tetra = opt.C9 * r2p1;
  st.bound_pmt = opt.C9_prime * r2p1;
  st.bound_graded = 0.5 * opt.C9_prime * r2p1;

  // hypothesis 1: a in Gamma cap Q_{n/2}
  const Site a = P.frame.a;
  Cube half(u.domain().center, u.domain().radius / 2);
  st.hyp_a_in_gamma = u.has(a) && std::fabs(u(a)) >= gamma_threshold && half.contains(a);

  // hypothesis 2: open basement triangles are quiet (below g); the middle
  // triangle always, plus one of the two shifted ones
  const long long h0 = P.frame.base_level();
  auto quiet_at = [&](const Vec3Q& center, long long lvl, long long rho) {
    const auto T = make_plane_triangle(center, lvl, rho);
    for (Site c : plane_triangle_sites(T, /*open=*/true))
      if (u.has(c) && !(std::fabs(u(c)) < g)) return false;
    return true;
  };
  const Rat third(1, 3);
  const Vec3Q ca = Vec3Q::of(a);
  const Vec3Q up{ca.x + third, ca.y + third, ca.z + third};
  const Vec3Q dn{ca.x - third, ca.y - third, ca.z - third};
  st.hyp_quiet_basement = quiet_at(ca, h0, P.frame.r) &&
                          (quiet_at(dn, h0 - 1, P.frame.r) || quiet_at(up, h0 + 1, P.frame.r));

  // hypothesis 4 (tetra variant): the magnitude band [g, e^{3 C10 n} g] above
  // the base plane is contained in E
  st.hyp_band_in_E = true;
  if (E != nullptr) {
    const Cube& dom = u.domain();
    for (long long i = 0; i < dom.site_count(); ++i) {
      const Site b = cube_site_at(dom, i);
      if (b.dot(lambda_dir(1)) < h0) continue;
      const double v = std::fabs(u.values()[static_cast<std::size_t>(i)]);
      if (v >= g && v <= gamma_threshold && !E->contains(b)) {
        st.hyp_band_in_E = false;
        break;
      }
    }
  }

  // hypothesis 3 (pmt variant): interior magnitudes up to the level h where
  // face edges still carry >= r/4 lattice points
  long long h_cut = h0;
  std::vector<Site> interior;
  for (Site b : P.frame.bounding_box().sites())
    if (pyramid_membership(P, b) == PyramidClass::Interior) interior.push_back(b);
  for (Site b : interior) {
    const long long fb = f_value(P.frame, b);
    TruncFace face{P.frame, b.dot(lambda_dir(1)), fb};
    if (4 * face.edge_point_count() >= P.frame.r)
      h_cut = std::max(h_cut, b.dot(lambda_dir(1)));
  }
  st.hyp_interior_bound = true;
  for (Site b : interior)
    if (b.dot(lambda_dir(1)) <= h_cut && u.has(b) &&
        !(std::fabs(u(b)) <= st.threshold)) {
      st.hyp_interior_bound = false;
      break;
    }

  st.vacuous = !(st.hyp_a_in_gamma && st.hyp_quiet_basement);
  st.pass = !st.vacuous && static_cast<double>(st.count) >= st.bound_tetra;
  return st;
}

}  // namespace andlab
