#include "andlab/green.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "andlab/hamiltonian.hpp"
#include "andlab/io.hpp"
#include "andlab/prng.hpp"
#include "andlab/solvers.hpp"

namespace andlab {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1], computed once per order by
// Newton iteration on the Legendre recurrence.
struct GLRule {
  std::vector<double> x, w;
};

const GLRule& gl_rule(int order) {
  static std::map<int, GLRule> cache;
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  GLRule r;
  r.x.resize(static_cast<std::size_t>(order));
  r.w.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= order; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      const double dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= order; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    const double dp = order * (x * p1 - p0) / (x * x - 1.0);
    r.x[static_cast<std::size_t>(i)] = x;
    r.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  cache[order] = std::move(r);
  return cache[order];
}

// integral of f over the box [lo, hi]^3 by a tensor GL rule
template <class F>
double gl_box(const F& f, const std::array<double, 3>& lo,
              const std::array<double, 3>& hi, int order) {
  const GLRule& r = gl_rule(order);
  double total = 0.0;
  for (int i = 0; i < order; ++i) {
    const double kx = 0.5 * (hi[0] + lo[0]) + 0.5 * (hi[0] - lo[0]) * r.x[static_cast<std::size_t>(i)];
    for (int j = 0; j < order; ++j) {
      const double ky = 0.5 * (hi[1] + lo[1]) + 0.5 * (hi[1] - lo[1]) * r.x[static_cast<std::size_t>(j)];
      double inner = 0.0;
      for (int l = 0; l < order; ++l) {
        const double kz = 0.5 * (hi[2] + lo[2]) + 0.5 * (hi[2] - lo[2]) * r.x[static_cast<std::size_t>(l)];
        inner += r.w[static_cast<std::size_t>(l)] * f(kx, ky, kz);
      }
      total += r.w[static_cast<std::size_t>(i)] * r.w[static_cast<std::size_t>(j)] * inner;
    }
  }
  return total * 0.125 * (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]);
}

// the 7 boxes of [0,L]^3 \ [0,L/2]^3
template <class F>
double gl_shell(const F& f, double L, int order) {
  const double h = 0.5 * L;
  double total = 0.0;
  for (int bx = 0; bx < 2; ++bx)
    for (int by = 0; by < 2; ++by)
      for (int bz = 0; bz < 2; ++bz) {
        if (bx == 0 && by == 0 && bz == 0) continue;
        const std::array<double, 3> lo{bx * h, by * h, bz * h};
        const std::array<double, 3> hi{lo[0] + h, lo[1] + h, lo[2] + h};
        total += gl_box(f, lo, hi, order);
      }
  return total;
}

// J = Int_{[0,1]^3} dq / |q|^2, via self-similarity J = 2 * (shell integral)
double inverse_square_box_integral(int order) {
  static std::map<int, double> cache;
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  const double shell = gl_shell(
      [](double x, double y, double z) { return 1.0 / (x * x + y * y + z * z); },
      1.0, order);
  cache[order] = 2.0 * shell;
  return cache[order];
}

}  // namespace

double green_function(Site a, int resolution) {
  if (resolution < 64)
    throw std::invalid_argument("green_function: resolution must be >= 64 panels per axis");
  // even symmetry reduces the cube to [0,pi]^3 with a cosine-product kernel
  const double ax = static_cast<double>(a.x), ay = static_cast<double>(a.y),
               az = static_cast<double>(a.z);
  auto kernel = [&](double kx, double ky, double kz) {
    const double D = 6.0 - 2.0 * (std::cos(kx) + std::cos(ky) + std::cos(kz));
    return std::cos(kx * ax) * std::cos(ky * ay) * std::cos(kz * az) / D;
  };
  const int order = std::max(8, resolution / 8);
  const int shells = 14;

  double total = 0.0;
  double L = M_PI;
  for (int s = 0; s < shells; ++s) {
    total += gl_shell(kernel, L, order);
    L *= 0.5;
  }
  // innermost cube [0,h]^3: subtract the 1/|k|^2 model and add it back in
  // closed form via the self-similar box integral
  const double h = L;
  auto corrected = [&](double kx, double ky, double kz) {
    const double k2 = kx * kx + ky * ky + kz * kz;
    return kernel(kx, ky, kz) - 1.0 / k2;
  };
  total += gl_box(corrected, {0.0, 0.0, 0.0}, {h, h, h}, order);
  total += h * inverse_square_box_integral(order);

  return total / (M_PI * M_PI * M_PI);
}

GreenTable GreenTable::build(long long radius_cap, int resolution) {
  GreenTable t;
  t.cap_ = radius_cap;
  t.resolution_ = resolution;
  for (long long x = 0; x <= radius_cap; ++x)
    for (long long y = x; y <= radius_cap; ++y)
      for (long long z = y; z <= radius_cap; ++z) {
        if (x * x + y * y + z * z > radius_cap * radius_cap) continue;
        t.data_[{x, y, z}] = green_function({x, y, z}, resolution);
      }
  return t;
}

bool GreenTable::has(Site a) const {
  std::array<long long, 3> k{std::llabs(a.x), std::llabs(a.y), std::llabs(a.z)};
  std::sort(k.begin(), k.end());
  return data_.count(k) > 0;
}

double GreenTable::operator()(Site a) const {
  std::array<long long, 3> k{std::llabs(a.x), std::llabs(a.y), std::llabs(a.z)};
  std::sort(k.begin(), k.end());
  auto it = data_.find(k);
  if (it == data_.end())
    throw std::out_of_range("GreenTable: site beyond the radius cap");
  return it->second;
}

std::string GreenTable::to_text() const {
  std::ostringstream os;
  os << "# green-table v1 cap=" << cap_ << " resolution=" << resolution_ << "\n";
  for (const auto& [k, v] : data_)
    os << k[0] << ' ' << k[1] << ' ' << k[2] << ' ' << format_double(v) << '\n';
  return os.str();
}

std::optional<GreenTable> GreenTable::from_text(const std::string& text) {
  std::istringstream is(text);
  std::string header;
  if (!std::getline(is, header)) return std::nullopt;
  GreenTable t;
  if (header.rfind("# green-table v1 ", 0) != 0) return std::nullopt;
  if (std::sscanf(header.c_str(), "# green-table v1 cap=%lld resolution=%d",
                  &t.cap_, &t.resolution_) != 2)
    return std::nullopt;
  long long x, y, z;
  double g;
  while (is >> x >> y >> z >> g) t.data_[{x, y, z}] = g;
  if (t.data_.empty()) return std::nullopt;
  return t;
}

LifshitzPair lifshitz_test_function(const GreenTable& G, double R, double eps_d,
                                    const Cube& domain, const Potential& Vbar) {
  const int d = 3;
  const double g0 = G({0, 0, 0});
  auto u_of = [&](Site a) {
    return 1.0 + g0 - G(a) - eps_d * std::pow(R, -d) * static_cast<double>(a.norm2());
  };
  // positivity on |a| < 3R
  const long long reach = static_cast<long long>(std::ceil(3.0 * R));
  for (Site a : cube_sites(Cube{{0, 0, 0}, reach}))
    if (static_cast<double>(a.norm2()) < 9.0 * R * R && G.has(a) && u_of(a) <= 0.0)
      throw std::invalid_argument("lifshitz_test_function: u <= 0 inside |a| < 3R (R too small)");

  LifshitzPair out;
  out.u = LatticeField::from_function(domain, u_of);

  // Eq B.3 residual: -Delta u = -delta_0 + 2 d eps_d R^{-d}, up to table error
  out.eq_b3_residual = 0.0;
  const double rhs_const = 2.0 * d * eps_d * std::pow(R, -d);
  const long long rcheck = domain.site_radius() - 1;
  for (Site a : cube_sites(Cube{domain.center, std::max<long long>(0, rcheck)})) {
    bool ok = true;
    for (Site dn : kNeighborSteps)
      if (!G.has(a + dn - domain.center)) ok = false;
    if (!ok) continue;
    const double lhs = -laplacian_apply(out.u, a);
    const double rhs = (a == domain.center ? -1.0 : 0.0) + rhs_const;
    out.eq_b3_residual = std::max(out.eq_b3_residual, std::fabs(lhs - rhs));
  }

  // u0(a) = min over impurities b with |a-b| < 3R of u(a-b)
  std::vector<Site> impurities;
  for (Site b : cube_sites(Vbar.domain()))
    if (Vbar(b) == 1.0) impurities.push_back(b);
  if (impurities.empty())
    throw std::invalid_argument("lifshitz_test_function: no impurities in Vbar");
  out.u0 = LatticeField::from_function(domain, [&](Site a) {
    double best = 1e300;
    for (Site b : impurities) {
      const Site dvec = a - b;
      if (static_cast<double>(dvec.norm2()) < 9.0 * R * R && G.has(dvec))
        best = std::min(best, u_of(dvec));
    }
    return best == 1e300 ? 1.0 + g0 : best;
  });
  out.u0_min = 1e300;
  out.u0_max = -1e300;
  for (double v : out.u0.values()) {
    out.u0_min = std::min(out.u0_min, v);
    out.u0_max = std::max(out.u0_max, v);
  }
  return out;
}

Potential periodic_impurities(const Cube& Qn, double R) {
  const long long step = static_cast<long long>(std::ceil(R));
  return Potential::explicit_field(LatticeField::from_function(Qn, [step](Site a) {
    return (a.x % step == 0 && a.y % step == 0 && a.z % step == 0) ? 1.0 : 0.0;
  }));
}

PrincipalBounds principal_eigenvalue_bounds(const Cube& Qn, const Potential& Vbar,
                                            double R) {
  const int d = 3;
  PrincipalBounds out;

  std::vector<Site> impurities;
  for (Site b : cube_sites(Qn))
    if (Vbar(b) == 1.0) impurities.push_back(b);

  out.density_ok = true;
  for (Site a : cube_sites(Qn)) {
    bool near = false;
    for (Site b : impurities)
      if (static_cast<double>((a - b).norm2()) < R * R) { near = true; break; }
    if (!near) { out.density_ok = false; break; }
  }
  if (!out.density_ok)
    throw std::invalid_argument("principal_eigenvalue_bounds: impurities not R-dense");

  auto H = assemble(Qn, Vbar);
  out.lambda0 = eig_extremal(H, 1, Which::Smallest)[0].value;

  // Rayleigh quotient of phi = 1 - Vbar
  std::vector<double> phi(static_cast<std::size_t>(H.dim()));
  for (long long i = 0; i < H.dim(); ++i)
    phi[static_cast<std::size_t>(i)] = 1.0 - Vbar(H.site_of(i));
  const auto hphi = H.multiply(phi);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    num += phi[i] * hphi[i];
    den += phi[i] * phi[i];
  }
  out.upper_rayleigh = den > 0.0 ? num / den : 13.0;
  out.upper_formula = 8.0 * d * std::pow(R, -d) +
                      4.0 * d / static_cast<double>(Qn.site_radius());
  out.lambda0_R3 = out.lambda0 * R * R * R;
  return out;
}

std::pair<double, double> wilson_interval(long long successes, long long total) {
  if (total <= 0) return {0.0, 1.0};
  const double z = 1.959963984540054;  // 95%
  const double n = static_cast<double>(total);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

BaseCaseResult base_case_probe(long long n, double delta, double eps, double lambda,
                               long long trials, std::uint64_t seed,
                               long long random_fills, long long sampled_columns) {
  if (!(delta > 0.0 && delta < 0.1))
    throw std::invalid_argument("base_case_probe: need 0 < delta < 1/10");
  if (!(eps > 0.0)) throw std::invalid_argument("base_case_probe: eps must be positive");
  const Cube Qn{{0, 0, 0}, n};
  const long long grid = static_cast<long long>(std::ceil(1.0 / eps));
  const double nn = static_cast<double>(n);
  const double norm_bound = std::exp(std::pow(nn, 2.0 * delta));
  const double entry_base = std::pow(nn, 2.0 * delta);
  const double entry_rate = std::pow(nn, -delta);

  BaseCaseResult res;
  res.fills_per_trial = 2 + random_fills;
  res.sampled_columns = sampled_columns;

  for (long long trial = 0; trial < trials; ++trial) {
    SplitMix64 base_rng = trial_stream(seed, static_cast<std::uint64_t>(trial));
    const std::uint64_t vseed = base_rng.next();

    BaseCaseTrial tr;
    tr.trial = static_cast<std::uint64_t>(trial);
    tr.norm_ok = true;
    tr.entry_ok = true;
    double worst_norm = 0.0;

    for (long long fill = 0; fill < res.fills_per_trial; ++fill) {
      // on-grid: Bernoulli(vseed); off-grid: fill pattern
      const std::uint64_t fseed = hash_u64(seed, 0xf111ULL, static_cast<std::uint64_t>(trial),
                                           static_cast<std::uint64_t>(fill));
      auto V = Potential::explicit_field(LatticeField::from_function(Qn, [&](Site a) {
        const bool on_grid = (a.x % grid == 0) && (a.y % grid == 0) && (a.z % grid == 0);
        if (on_grid)
          return (hash_u64(vseed, static_cast<std::uint64_t>(a.x),
                           static_cast<std::uint64_t>(a.y),
                           static_cast<std::uint64_t>(a.z)) >> 63)
                     ? 1.0
                     : 0.0;
        if (fill == 0) return 0.0;
        if (fill == 1) return 1.0;
        return (hash_u64(fseed, static_cast<std::uint64_t>(a.x),
                         static_cast<std::uint64_t>(a.y),
                         static_cast<std::uint64_t>(a.z)) >> 63)
                   ? 1.0
                   : 0.0;
      }));
      auto H = assemble(Qn, V);
      // H is monotone in V, so the all-zero fill minimizes lambda_min and
      // maximizes the resolvent norm over all fills: one eigensolve suffices
      if (fill == 0) {
        const double lmin = eig_extremal(H, 1, Which::Smallest)[0].value;
        const double dist = std::fabs(lmin - lambda);
        const double rnorm = dist > 1e-14 ? 1.0 / dist : 1e300;
        worst_norm = std::max(worst_norm, rnorm);
        if (rnorm > norm_bound) tr.norm_ok = false;
      }

      // sampled-column entrywise bound
      const long long stride = std::max<long long>(1, H.dim() / std::max<long long>(1, sampled_columns));
      for (long long c = 0; c < sampled_columns && tr.entry_ok; ++c) {
        const Site bsite = H.site_of(std::min(H.dim() - 1, c * stride));
        const auto col = resolvent_column(H, lambda, bsite);
        for (long long i = 0; i < H.dim(); ++i) {
          const Site asite = H.site_of(i);
          const double bound = entry_base * std::exp(-entry_rate * norm(asite - bsite));
          if (std::fabs(col.values()[static_cast<std::size_t>(i)]) > bound) {
            tr.entry_ok = false;
            break;
          }
        }
      }
      if (!tr.norm_ok) break;
    }
    tr.resolvent_norm = worst_norm;
    tr.norm_bound = norm_bound;
    tr.pass = tr.norm_ok && tr.entry_ok;
    if (!tr.pass) ++res.failures;
    res.trials.push_back(tr);
  }
  res.failure_frequency =
      trials > 0 ? static_cast<double>(res.failures) / static_cast<double>(trials) : 0.0;
  auto [lo, hi] = wilson_interval(res.failures, trials);
  res.wilson_low = lo;
  res.wilson_high = hi;
  return res;
}

}  // namespace andlab
