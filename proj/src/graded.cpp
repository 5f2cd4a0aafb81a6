#include "andlab/graded.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "andlab/prng.hpp"

namespace andlab {

namespace {

double dist_centers(const Ball& a, const Ball& b) {
  const Vec3Q d = a.center - b.center;
  return std::sqrt(boost::rational_cast<double>(d.norm2()));
}

double ball_gap(const Ball& a, const Ball& b) {
  return dist_centers(a, b) - a.radius - b.radius;
}

double diam_of_sites(const std::vector<Site>& sites) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < sites.size(); ++i)
    for (std::size_t j = i + 1; j < sites.size(); ++j)
      d2 = std::max(d2, static_cast<double>((sites[i] - sites[j]).norm2()));
  return std::sqrt(d2);
}

bool ball_meets_sites(const Ball& b, const std::vector<Site>& sites) {
  for (Site a : sites)
    if (b.contains(a)) return true;
  return false;
}

}  // namespace

bool Ball::contains(Site a) const {
  const Vec3Q d = Vec3Q::of(a) - center;
  return boost::rational_cast<double>(d.norm2()) < radius * radius;
}

std::string ScatteredSet::check_invariants() const {
  for (const auto& b : balls) {
    if (b.radius != l) return "scattered: ball radius differs from l";
    if (b.group < 1 || b.group > N) return "scattered: group out of range";
  }
  const double need = std::pow(l, 1.0 + eps);
  for (std::size_t i = 0; i < balls.size(); ++i)
    for (std::size_t j = i + 1; j < balls.size(); ++j) {
      if (balls[i].group != balls[j].group) continue;
      if (ball_gap(balls[i], balls[j]) < need)
        return "scattered: same-group balls closer than l^{1+eps}";
    }
  return {};
}

std::vector<double> GradedSet::scale_lengths() const {
  std::vector<double> out;
  for (const auto& s : levels) out.push_back(s.l);
  return out;
}

bool GradedSet::contains(Site a) const {
  for (const auto& b : unit_balls)
    if (b.contains(a)) return true;
  for (const auto& s : levels)
    for (const auto& b : s.balls)
      if (b.contains(a)) return true;
  return false;
}

long long GradedSet::count_inside(const std::vector<Site>& sites) const {
  long long n = 0;
  for (Site a : sites)
    if (contains(a)) ++n;
  return n;
}

std::string GradedSet::check_invariants() const {
  for (const auto& b : unit_balls) {
    if (b.radius != 1.0) return "graded: E_0 ball radius != 1";
    if (b.center.x.denominator() != 1 || b.center.y.denominator() != 1 ||
        b.center.z.denominator() != 1)
      return "graded: E_0 center not integral";
  }
  for (std::size_t i = 0; i < unit_balls.size(); ++i)
    for (std::size_t j = i + 1; j < unit_balls.size(); ++j)
      if (ball_gap(unit_balls[i], unit_balls[j]) < C)
        return "graded: E_0 balls closer than C";
  double prev = 1.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i].l <= 1.0) return "graded: scale length must exceed 1";
    if (i >= 1 && std::pow(prev, 1.0 + 2.0 * eps) > levels[i].l)
      return "graded: lengths not eps-geometric";
    prev = levels[i].l;
    auto err = levels[i].check_invariants();
    if (!err.empty()) return err;
  }
  return {};
}

GradedSet graded_sample(const GradedParams& params, std::uint64_t seed) {
  for (std::size_t i = 1; i < params.lengths.size(); ++i)
    if (std::pow(params.lengths[i - 1], 1.0 + 2.0 * params.eps) > params.lengths[i])
      throw std::invalid_argument("graded_sample: lengths not eps-geometric");

  SplitMix64 rng(hash_u64(seed, 0x67726164ULL));
  const long long r = params.region.site_radius();
  auto draw_site = [&]() {
    auto pick = [&](long long c) {
      return c - r + static_cast<long long>(rng.next() % static_cast<std::uint64_t>(2 * r + 1));
    };
    return Site{pick(params.region.center.x), pick(params.region.center.y),
                pick(params.region.center.z)};
  };

  GradedSet E;
  E.C = params.C;
  E.eps = params.eps;

  const long long max_tries = 4000;
  for (long long i = 0; i < params.unit_count; ++i) {
    bool placed = false;
    for (long long t = 0; t < max_tries && !placed; ++t) {
      Ball b{Vec3Q::of(draw_site()), 1.0, 1};
      bool ok = true;
      for (const auto& o : E.unit_balls)
        if (ball_gap(o, b) < params.C) { ok = false; break; }
      if (ok) {
        E.unit_balls.push_back(b);
        placed = true;
      }
    }
    if (!placed) throw std::runtime_error("graded_sample: cannot place E_0 balls (infeasible parameters)");
  }

  for (double l : params.lengths) {
    ScatteredSet S;
    S.N = params.N;
    S.l = l;
    S.eps = params.eps;
    const double need = std::pow(l, 1.0 + params.eps);
    for (int g = 1; g <= params.N; ++g) {
      for (long long i = 0; i < params.balls_per_level; ++i) {
        bool placed = false;
        for (long long t = 0; t < max_tries && !placed; ++t) {
          Ball b{Vec3Q::of(draw_site()), l, g};
          bool ok = true;
          for (const auto& o : S.balls)
            if (o.group == g && ball_gap(o, b) < need) { ok = false; break; }
          if (ok) {
            S.balls.push_back(b);
            placed = true;
          }
        }
        if (!placed)
          throw std::runtime_error("graded_sample: cannot place scattered balls (infeasible parameters)");
      }
    }
    E.levels.push_back(std::move(S));
  }

  auto err = E.check_invariants();
  if (!err.empty()) throw std::runtime_error("graded_sample: " + err);
  return E;
}

bool is_normal(const GradedSet& E, const Cube& A, double Cbar, double epsbar) {
  if (A.site_count() <= 0) return true;
  const double r = static_cast<double>(A.site_radius());
  const double diam = 2.0 * r * std::sqrt(3.0);
  // nearest site of A to a ball center, by per-axis clamped rounding
  auto meets = [&](const Ball& b) {
    auto clamp_round = [&](const Rat& v, long long c) {
      const long long lo = c - A.site_radius(), hi = c + A.site_radius();
      long long n = static_cast<long long>(std::llround(boost::rational_cast<double>(v)));
      return std::min(hi, std::max(lo, n));
    };
    const Site nearest{clamp_round(b.center.x, A.center.x),
                       clamp_round(b.center.y, A.center.y),
                       clamp_round(b.center.z, A.center.z)};
    return b.contains(nearest);
  };
  for (const auto& b : E.unit_balls)
    if (meets(b) && Cbar > diam) return false;
  for (const auto& s : E.levels)
    for (const auto& b : s.balls)
      if (meets(b) && s.l > std::pow(diam, 1.0 - epsbar / 2.0)) return false;
  return true;
}

bool is_normal_in_sites(const GradedSet& E, const std::vector<Site>& sites,
                        double Cbar, double epsbar) {
  if (sites.empty()) return true;
  const double diam = diam_of_sites(sites);
  for (const auto& b : E.unit_balls)
    if (ball_meets_sites(b, sites) && Cbar > diam) return false;
  for (const auto& s : E.levels)
    for (const auto& b : s.balls)
      if (ball_meets_sites(b, sites) && s.l > std::pow(diam, 1.0 - epsbar / 2.0))
        return false;
  return true;
}

}  // namespace andlab
