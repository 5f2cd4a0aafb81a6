#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "andlab/lattice.hpp"
#include "andlab/prng.hpp"

namespace andlab {

/// Real-valued function on the sites of a cube.  Values are stored in
/// cube_sites order.  Out-of-domain evaluation throws unless zero-extension
/// is enabled (the Dirichlet convention reads exactly as zero outside).
class LatticeField {
 public:
  LatticeField() = default;
  LatticeField(Cube domain, double init = 0.0)
      : domain_(domain), values_(static_cast<std::size_t>(domain.site_count()), init) {}

  static LatticeField from_function(const Cube& domain,
                                    const std::function<double(Site)>& f);

  const Cube& domain() const { return domain_; }
  bool zero_extended() const { return zero_ext_; }
  void set_zero_extension(bool on) { zero_ext_ = on; }
  bool has(Site a) const { return cube_index(domain_, a) >= 0; }

  double operator()(Site a) const {
    const long long i = cube_index(domain_, a);
    if (i < 0) {
      if (zero_ext_) return 0.0;
      throw std::out_of_range("LatticeField: site outside domain " + site_to_string(a));
    }
    return values_[static_cast<std::size_t>(i)];
  }
  void set(Site a, double v) {
    const long long i = cube_index(domain_, a);
    if (i < 0) throw std::out_of_range("LatticeField::set: site outside domain");
    values_[static_cast<std::size_t>(i)] = v;
  }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double max_abs() const;
  double max_abs(const Cube& sub) const;

 private:
  Cube domain_{};
  std::vector<double> values_;
  bool zero_ext_ = false;
};

/// Discrete Laplacian Delta u(a) = -6 u(a) + sum of the six neighbor values.
double laplacian_apply(const LatticeField& u, Site a);

enum class PotentialKind { Bernoulli, Explicit };

/// Potential with values in [0,1].  The Bernoulli sampler draws V(a) in {0,1}
/// from a hash of (seed, a), so the same seed gives consistent values on any
/// cube containing a.
class Potential {
 public:
  Potential() = default;

  static Potential bernoulli(const Cube& domain, std::uint64_t seed);
  static Potential constant(const Cube& domain, double v);
  static Potential explicit_field(LatticeField f);

  const LatticeField& field() const { return field_; }
  const Cube& domain() const { return field_.domain(); }
  double operator()(Site a) const { return field_(a); }
  PotentialKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  std::string provenance() const;

 private:
  LatticeField field_;
  PotentialKind kind_ = PotentialKind::Explicit;
  std::uint64_t seed_ = 0;
};

/// Largest relative violation of Delta u = (V + shift) u over the interior
/// sites of `cube` (sites whose six neighbors stay inside u's domain, or all
/// sites when u is zero-extended).  Used as the precondition gate for every
/// chain / DUC routine.
double solution_residual(const LatticeField& u, const Potential& V,
                         const Cube& cube, double shift = 0.0);

/// l2 residual ||Delta u - (V + shift) u|| / ||u|| over the cube with zero
/// extension; this is the Dirichlet eigen-equation residual when
/// shift = -lambda, and the gate used by the *_eigen entry points.
double eigen_equation_residual(const LatticeField& u, const Potential& V,
                               const Cube& cube, double shift);

/// Field of the two-dimensional sharp example u(x,y,z) = (-1)^x e^{s z} 1_{x=y}
/// with e^s + e^{-s} = 6; harmonic on all of Z^3 and supported on {x = y}.
double sharp_example_rate();  // s = ln(3 + 2 sqrt 2)
LatticeField sharp_example_field(const Cube& domain);

/// CSV export "x,y,z,value" in lexicographic site order.
std::string field_to_csv(const LatticeField& u);

}  // namespace andlab
