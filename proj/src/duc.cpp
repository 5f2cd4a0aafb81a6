#include "andlab/duc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "andlab/cone_chains.hpp"
#include "andlab/io.hpp"

namespace andlab {

namespace {

// Coordinate view along a horizontal axis (1 or 2) with a sign, so the two
// gap cases of the recursion run the same code under reflection.
struct View {
  int axis = 1;  // primary axis (1 or 2)
  int sign = 1;

  int secondary() const { return axis == 1 ? 2 : 1; }
  long long coord(Site a) const { return sign * a.coord(axis); }
  long long hi(const Cuboid& b) const {
    return sign > 0 ? b.upper[axis - 1] : -b.lower[axis - 1];
  }
  long long lo(const Cuboid& b) const {
    return sign > 0 ? b.lower[axis - 1] : -b.upper[axis - 1];
  }
  // cuboid with primary view-interval [plo, phi], secondary |.| <= w,
  // tertiary (e3) interval [zlo, zhi], all relative to a center c
  Cuboid slab(Site c, long long plo, long long phi, long long w,
              long long zlo, long long zhi) const {
    Cuboid b;
    const long long alo = sign > 0 ? plo : -phi;
    const long long ahi = sign > 0 ? phi : -plo;
    b.lower[axis - 1] = c.coord(axis) + alo;
    b.upper[axis - 1] = c.coord(axis) + ahi;
    b.lower[secondary() - 1] = c.coord(secondary()) - w;
    b.upper[secondary() - 1] = c.coord(secondary()) + w;
    b.lower[2] = c.z + zlo;
    b.upper[2] = c.z + zhi;
    return b;
  }
};

struct Builder {
  const LatticeField& u;
  long long m;
  double K;
  ThetaOptions opt;
  long long shrink_events = 0;

  // chain endpoint from `from` at signed depth in {target, target+1} along axis
  Site pick(const Cube& Qn, Site from, int axis, long long target) {
    long long k;
    int iota;
    if (target >= 0) {
      iota = 1;
      k = target + 1;
    } else {
      iota = -1;
      k = -target;
    }
    Chain c = build_chain_unchecked(u, Qn, from, axis, iota, k, K);
    return c.end();
  }

  // even cuboid E with Q_r(a) subset E subset Q_{r+1}(a); smallest corners
  static Cuboid even_cuboid(Site a, long long r) {
    Cuboid b;
    for (int t = 0; t < 3; ++t) {
      long long lo = a.coord(t + 1) - r - 1;  // smallest even in [a-r-1, a-r]
      if (lo % 2 != 0) ++lo;
      long long hi = a.coord(t + 1) + r;  // smallest even in [a+r, a+r+1]
      if (hi % 2 != 0) ++hi;
      b.lower[t] = lo;
      b.upper[t] = hi;
    }
    return b;
  }

  // clamp a recursion radius so Q_r(c) fits inside the region
  long long fit_radius(Site c, long long want, const Cuboid& region) {
    long long r = want;
    for (int t = 0; t < 3; ++t) {
      r = std::min(r, c.coord(t + 1) - region.lower[t]);
      r = std::min(r, region.upper[t] - c.coord(t + 1));
    }
    if (r < want) {
      if (opt.paper_mode)
        throw std::runtime_error(
            "theta_construct: recursion cube leaves its slab (paper mode)");
      ++shrink_events;
    }
    return r;
  }

  void recurse(Site center, long long nu, std::vector<Site>& out) {
    const long long n = 8 * (nu / 8);
    if (nu <= opt.N0 * m + 7 || n < 16 || n / 4 - 3 < m) {
      out.push_back(center);
      return;
    }
    const Cube Qn(center, n);
    // everything below works in center-relative coordinates, so "even
    // cuboid" means bounds even relative to the current origin
    auto rel = [&](Site s) { return s - center; };

    const Site a1 = pick(Qn, center, 3, n / 2);
    const Site a2 = pick(Qn, center, 3, -(n / 2) - 1);
    const Cuboid Q1 = even_cuboid(rel(a1), n / 2 - 2);
    const Cuboid Q2 = even_cuboid(rel(a2), n / 2 - 2);

    const std::array<Site, 4> cells = {
        pick(Qn, a1, 3, n / 4 - 1), pick(Qn, a1, 3, -(n / 4)),
        pick(Qn, a2, 3, n / 4 - 1), pick(Qn, a2, 3, -(n / 4))};
    std::array<Cuboid, 4> cell_boxes;
    for (std::size_t i = 0; i < 4; ++i)
      cell_boxes[i] = even_cuboid(rel(cells[i]), n / 4 - 3);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j)
        if (!cell_boxes[i].disjoint(cell_boxes[j]))
          throw std::runtime_error(
              "theta_construct: cell cuboids overlap (hypothesis violation)");
    for (const Site& c : cells) recurse(c, n / 4 - 3, out);

    const Cuboid B = *Cuboid::hull(Q1, Q2);
    const Cuboid B1 = *Cuboid::hull(cell_boxes[0], cell_boxes[1]);
    const Cuboid B2 = *Cuboid::hull(cell_boxes[2], cell_boxes[3]);

    // gap sums along e1 and e2; the axis with the larger sum hosts the
    // extra chains
    auto gap_sum = [&](int axis) {
      const int t = axis - 1;
      long long s = (n - B.upper[t]) + (B.lower[t] + n);
      s += (Q1.upper[t] - B1.upper[t]) + (B1.lower[t] - Q1.lower[t]);
      s += (Q2.upper[t] - B2.upper[t]) + (B2.lower[t] - Q2.lower[t]);
      return s;
    };
    View v;
    v.axis = gap_sum(1) >= gap_sum(2) ? 1 : 2;

    struct Branch {
      Site a;  // relative chain endpoint
      Cuboid Q, B;
    };
    Branch first{rel(a1), Q1, B1}, second{rel(a2), Q2, B2};
    v.sign = 1;
    if (v.coord(first.a) > v.coord(second.a)) std::swap(first, second);

    const bool case1_direct = v.hi(second.B) <= v.hi(first.Q);
    const bool case1_mirror = v.lo(first.B) >= v.lo(second.Q);

    if (case1_direct || case1_mirror) {
      if (!case1_direct) {
        // mirror the view; the branch order flips under reflection
        v.sign = -1;
        std::swap(first, second);
      }
      const long long pminus = v.lo(first.Q), pplus = v.hi(first.Q);
      const Cuboid Ul = v.slab(center, -n + 1, pminus - 1, n - 1, -n + 1, n - 1);
      const Cuboid Ur = v.slab(center, pplus + 1, n - 1, n - 1, -n + 1, n - 1);
      const Site c1 = pick(Qn, center, v.axis, v.sign * ((pminus - n) / 2));
      const Site c2 = pick(Qn, center, v.axis, v.sign * ((pplus + n) / 2));
      const long long I1 = (pminus + n) / 2 - 2;
      const long long I2 = (n - pplus) / 2 - 2;
      if (I1 > m) recurse(c1, fit_radius(c1, I1, Ul), out);
      if (I2 > m) recurse(c2, fit_radius(c2, I2, Ur), out);
    } else {
      // case 2: both cell columns overhang; four slabs catch the gaps
      const Cuboid U1 = v.slab(center, -n + 1, v.lo(first.B) - 1, n - 1, -n + 1, n - 1);
      const Cuboid U2 = v.slab(center, v.hi(second.B) + 1, n - 1, n - 1, -n + 1, n - 1);
      const bool first_up = first.a.z >= second.a.z;
      const Cuboid U3 = v.slab(center, v.hi(first.B) + 1, v.hi(first.Q) - 1, n - 1,
                               first_up ? 1 : -n + 1, first_up ? n - 1 : -1);
      const Cuboid U4 = v.slab(center, v.lo(second.Q) + 1, v.lo(second.B) - 1, n - 1,
                               first_up ? -n + 1 : 1, first_up ? -1 : n - 1);

      const Site c1 = pick(Qn, center, v.axis, v.sign * ((v.lo(first.B) - n) / 2));
      const Site c2 = pick(Qn, center, v.axis, v.sign * ((v.hi(second.B) + n) / 2));
      const Site c3_from = first.a + center;
      const Site c4_from = second.a + center;
      const Site c3 = pick(Qn, c3_from, v.axis,
                           v.sign * ((v.hi(first.B) + v.hi(first.Q)) / 2 -
                                     v.coord(first.a)));
      const Site c4 = pick(Qn, c4_from, v.axis,
                           v.sign * ((v.lo(second.B) + v.lo(second.Q)) / 2 -
                                     v.coord(second.a)));
      const long long J1 = (v.lo(first.B) + n) / 2 - 2;
      const long long J2 = (n - v.hi(second.B)) / 2 - 2;
      const long long J3 = (v.hi(first.Q) - v.hi(first.B)) / 2 - 2;
      const long long J4 = (v.lo(second.B) - v.lo(second.Q)) / 2 - 2;
      if (J1 > m) recurse(c1, fit_radius(c1, J1, U1), out);
      if (J2 > m) recurse(c2, fit_radius(c2, J2, U2), out);
      if (J3 > m) recurse(c3, fit_radius(c3, J3, U3), out);
      if (J4 > m) recurse(c4, fit_radius(c4, J4, U4), out);
    }
  }
};

}  // namespace

namespace {

ThetaSet theta_core(const LatticeField& u, const Cube& Qn, long long m, double K,
                    const ThetaOptions& opt);

}  // namespace

ThetaSet theta_construct(const LatticeField& u, const Potential& V,
                         const Cube& Qn, long long m, double K,
                         const ThetaOptions& opt) {
  const double res = solution_residual(u, V, Qn, 0.0);
  if (res > 1e-9)
    throw std::invalid_argument("theta_construct: Delta u = Vu fails (residual " +
                                format_double(res) + ")");
  return theta_core(u, Qn, m, K, opt);
}

ThetaSet theta_construct_eigen(const LatticeField& u, const Potential& V,
                               const Cube& Qn, double lambda, long long m,
                               double K, const ThetaOptions& opt) {
  LatticeField uz = u;
  uz.set_zero_extension(true);
  const double res = eigen_equation_residual(u, V, Qn, -lambda);
  if (res > 1e-7)
    throw std::invalid_argument(
        "theta_construct_eigen: H_Q u = lambda u fails (residual " +
        format_double(res) + ")");
  return theta_core(uz, Qn, m, K, opt);
}

namespace {

ThetaSet theta_core(const LatticeField& u, const Cube& Qn, long long m, double K,
                    const ThetaOptions& opt) {
  if (m < 1 || m > Qn.site_radius())
    throw std::invalid_argument("theta_construct: need 1 <= m <= n");
  if (opt.N0 < 4) throw std::invalid_argument("theta_construct: N0 >= 4 required");
  if (std::fabs(u(Qn.center)) == 0.0)
    throw std::invalid_argument("theta_construct: u(0) = 0");

  const long long n = Qn.site_radius();
  Builder b{u, m, K, opt, 0};
  std::vector<Site> pts;
  b.recurse(Qn.center, n, pts);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  ThetaSet theta;
  theta.points = std::move(pts);
  theta.n = n;
  theta.m = m;
  theta.K = K;
  theta.magnitude_floor =
      std::pow(K + 11.0, -12.0 * static_cast<double>(n)) * std::fabs(u(Qn.center));
  theta.ratio = static_cast<double>(theta.points.size()) /
                std::pow(static_cast<double>(n) / static_cast<double>(m), kThetaAlpha);
  theta.shrink_events = b.shrink_events;

  if (opt.paper_mode) {
    const double beta = std::pow(static_cast<double>(opt.N0) + 7.0, -kThetaAlpha);
    if (static_cast<double>(theta.points.size()) <
        beta * std::pow(static_cast<double>(n) / static_cast<double>(m), kThetaAlpha))
      throw std::runtime_error("theta_construct: cardinality bound fails in paper mode");
  }
  return theta;
}

}  // namespace

std::string verify_theta(const ThetaSet& theta, const LatticeField& u, const Cube& Qn) {
  const double floorerr = theta.magnitude_floor * (1.0 - 1e-12);
  for (Site b : theta.points) {
    if (std::fabs(u(b)) < floorerr)
      return "magnitude floor fails at " + site_to_string(b);
    const Site d = b - Qn.center;
    if (d.norm_inf() + theta.m > Qn.site_radius())
      return "Q_m containment fails at " + site_to_string(b);
  }
  for (std::size_t i = 0; i < theta.points.size(); ++i)
    for (std::size_t j = i + 1; j < theta.points.size(); ++j)
      if ((theta.points[i] - theta.points[j]).norm_inf() <= 2 * theta.m)
        return "Q_m cubes overlap for " + site_to_string(theta.points[i]) + " and " +
               site_to_string(theta.points[j]);
  return {};
}

std::string theta_to_csv(const ThetaSet& theta) {
  std::ostringstream os;
  os << "x,y,z\n";
  for (Site b : theta.points) os << b.x << ',' << b.y << ',' << b.z << '\n';
  return os.str();
}

DucStatistic duc_statistic(const LatticeField& u, const Cube& Qn,
                           const GradedSet& E, double C, DucMode mode) {
  const double u0 = std::fabs(u(Qn.center));
  if (u0 == 0.0) throw std::invalid_argument("duc_statistic: u(0) = 0");
  const double n = static_cast<double>(Qn.site_radius());
  const double expo = (mode == DucMode::Linear) ? C * n : C * n * n * n;
  DucStatistic st;
  st.n = Qn.site_radius();
  st.threshold = std::exp(-expo) * u0;
  for (Site a : cube_sites(Qn)) {
    if (E.contains(a)) {
      ++st.removed;
      continue;
    }
    if (std::fabs(u(a)) >= st.threshold) ++st.count;
  }
  return st;
}

DucBatch duc_batch(const LatticeField& u, const std::vector<long long>& ns,
                   const GradedSet& E, double C, DucMode mode) {
  DucBatch batch;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (long long n : ns) {
    const Cube qn(u.domain().center, n);
    const auto st = duc_statistic(u, qn, E, C, mode);
    batch.ns.push_back(n);
    batch.counts.push_back(st.count);
    const double x = std::log(static_cast<double>(n));
    const double y = std::log(std::max<double>(1.0, static_cast<double>(st.count)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(ns.size());
  batch.fitted_exponent = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return batch;
}

}  // namespace andlab
