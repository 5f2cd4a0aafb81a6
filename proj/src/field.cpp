#include "andlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "andlab/io.hpp"

namespace andlab {

LatticeField LatticeField::from_function(const Cube& domain,
                                         const std::function<double(Site)>& f) {
  LatticeField u(domain);
  const long long n = domain.site_count();
  for (long long i = 0; i < n; ++i)
    u.values_[static_cast<std::size_t>(i)] = f(cube_site_at(domain, i));
  return u;
}

double LatticeField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::fabs(v));
  return m;
}

double LatticeField::max_abs(const Cube& sub) const {
  double m = 0.0;
  for (Site a : cube_sites(sub)) m = std::max(m, std::fabs((*this)(a)));
  return m;
}

double laplacian_apply(const LatticeField& u, Site a) {
  double s = -6.0 * u(a);
  for (Site d : kNeighborSteps) s += u(a + d);
  return s;
}

Potential Potential::bernoulli(const Cube& domain, std::uint64_t seed) {
  Potential p;
  p.field_ = LatticeField::from_function(domain, [seed](Site a) {
    return (hash_u64(seed, static_cast<std::uint64_t>(a.x),
                     static_cast<std::uint64_t>(a.y),
                     static_cast<std::uint64_t>(a.z)) >> 63)
               ? 1.0
               : 0.0;
  });
  p.kind_ = PotentialKind::Bernoulli;
  p.seed_ = seed;
  return p;
}

Potential Potential::constant(const Cube& domain, double v) {
  if (v < 0.0 || v > 1.0) throw std::invalid_argument("Potential: values must be in [0,1]");
  Potential p;
  p.field_ = LatticeField(domain, v);
  return p;
}

Potential Potential::explicit_field(LatticeField f) {
  for (double v : f.values())
    if (v < 0.0 || v > 1.0) throw std::invalid_argument("Potential: values must be in [0,1]");
  Potential p;
  p.field_ = std::move(f);
  return p;
}

std::string Potential::provenance() const {
  if (kind_ == PotentialKind::Bernoulli) return "bernoulli(" + std::to_string(seed_) + ")";
  return "explicit";
}

double solution_residual(const LatticeField& u, const Potential& V,
                         const Cube& cube, double shift) {
  double worst = 0.0;
  double scale = std::max(u.max_abs(), 1e-300);
  for (Site a : cube_sites(cube)) {
    if (!u.zero_extended()) {
      bool interior = true;
      for (Site d : kNeighborSteps)
        if (!u.has(a + d)) { interior = false; break; }
      if (!interior) continue;
    }
    const double r = laplacian_apply(u, a) - (V(a) + shift) * u(a);
    worst = std::max(worst, std::fabs(r) / scale);
  }
  return worst;
}

double eigen_equation_residual(const LatticeField& u, const Potential& V,
                               const Cube& cube, double shift) {
  LatticeField uz = u;
  uz.set_zero_extension(true);
  double r2 = 0.0, u2 = 0.0;
  for (Site a : cube_sites(cube)) {
    const double r = laplacian_apply(uz, a) - (V(a) + shift) * uz(a);
    r2 += r * r;
    const double v = uz(a);
    u2 += v * v;
  }
  return std::sqrt(r2 / std::max(u2, 1e-300));
}

double sharp_example_rate() { return std::log(3.0 + 2.0 * std::sqrt(2.0)); }

LatticeField sharp_example_field(const Cube& domain) {
  const double s = sharp_example_rate();
  return LatticeField::from_function(domain, [s](Site a) {
    if (a.x != a.y) return 0.0;
    const double sign = (a.x % 2 == 0) ? 1.0 : -1.0;
    return sign * std::exp(s * static_cast<double>(a.z));
  });
}

std::string field_to_csv(const LatticeField& u) {
  std::ostringstream os;
  os << "x,y,z,value\n";
  const Cube& q = u.domain();
  for (long long i = 0; i < q.site_count(); ++i) {
    const Site a = cube_site_at(q, i);
    os << a.x << ',' << a.y << ',' << a.z << ',' << format_double(u.values()[static_cast<std::size_t>(i)])
       << '\n';
  }
  return os.str();
}

}  // namespace andlab
