#include "andlab/cone_chains.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "andlab/io.hpp"

namespace andlab {

namespace {

constexpr double kSolutionTol = 1e-9;

// the six successor offsets (iota e_tau + {0,+-e_1,+-e_2,+-e_3}) \ {0}
std::vector<Site> successor_offsets(int tau, int iota) {
  const Site v = unit(tau, iota);
  std::vector<Site> out;
  out.push_back(v);
  for (Site d : kNeighborSteps) {
    const Site s = v + d;
    if (s == Site{0, 0, 0}) continue;
    out.push_back(s);
  }
  return out;
}

void require_solution(const LatticeField& u, const Potential& V, const Cube& Qn,
                      double shift, const char* who) {
  const double r = solution_residual(u, V, Qn, shift);
  if (r > kSolutionTol)
    throw std::invalid_argument(std::string(who) +
                                ": Delta u = Vu fails on the cube (relative residual " +
                                format_double(r) + ")");
}

Chain greedy_chain(const LatticeField& u, const Cube& Qn, Site a, int tau,
                   int iota, long long k, double K, bool clip_to_cube) {
  if (k < 0) throw std::invalid_argument("build_chain: k must be nonnegative");
  Chain chain;
  chain.tau = tau;
  chain.iota = iota;
  chain.k = k;
  chain.ratio_bound = 1.0 / (K + 11.0);
  chain.points.push_back(a);

  const auto offsets = successor_offsets(tau, iota);
  Site cur = a;
  while ((cur - a).coord(tau) * iota < k - 1) {
    Site best{};
    double best_abs = -1.0;
    bool found = false;
    for (Site d : offsets) {
      const Site b = cur + d;
      if (clip_to_cube && !Qn.contains(b)) continue;
      const double val = std::fabs(u(b));
      if (!found || val > best_abs || (val == best_abs && b < best)) {
        // lexicographically smallest among maxima
        if (!found || val > best_abs || (val == best_abs && b < best)) {
          best = b;
          best_abs = val;
          found = true;
        }
      }
    }
    if (!found)
      throw std::runtime_error("build_chain: empty successor candidate set");
    const double prev = std::fabs(u(cur));
    chain.ratios.push_back(prev > 0.0 ? best_abs / prev
                                      : (best_abs > 0.0 ? 1e300 : 1.0));
    chain.points.push_back(best);
    cur = best;
  }
  return chain;
}

}  // namespace

std::string verify_chain(const Chain& chain, const LatticeField& u) {
  if (chain.points.empty()) return "chain is empty";
  const Site a = chain.start();
  const auto offsets = successor_offsets(chain.tau, chain.iota);
  for (std::size_t i = 1; i < chain.points.size(); ++i) {
    const Site step = chain.points[i] - chain.points[i - 1];
    bool ok = false;
    for (Site d : offsets)
      if (d == step) { ok = true; break; }
    if (!ok) return "step " + std::to_string(i) + " outside the allowed step set";
    if (!cone_membership(a, chain.tau, chain.points[i]))
      return "point " + std::to_string(i) + " leaves the cone";
    const double prev = std::fabs(u(chain.points[i - 1]));
    const double curv = std::fabs(u(chain.points[i]));
    if (curv + 1e-300 < chain.ratio_bound * prev * (1.0 - 1e-12))
      return "ratio bound fails at step " + std::to_string(i);
  }
  const long long d = chain.depth();
  if (chain.k == 0) {
    if (chain.points.size() != 1) return "k = 0 chain must be the single start point";
  } else if (d != chain.k && d != chain.k - 1) {
    return "endpoint depth " + std::to_string(d) + " outside {k-1, k}";
  }
  return {};
}

LocalStep local_step(const LatticeField& u, Site a, Site v, double K) {
  if (v.norm1() != 1) throw std::invalid_argument("local_step: v must be a unit step");
  int tau = 1, iota = 1;
  if (v.x != 0) { tau = 1; iota = v.x > 0 ? 1 : -1; }
  else if (v.y != 0) { tau = 2; iota = v.y > 0 ? 1 : -1; }
  else { tau = 3; iota = v.z > 0 ? 1 : -1; }

  Site best{};
  double best_abs = -1.0;
  bool found = false;
  for (Site d : successor_offsets(tau, iota)) {
    const Site b = a + d;
    const double val = std::fabs(u(b));
    if (!found || val > best_abs || (val == best_abs && b < best)) {
      best = b;
      best_abs = val;
      found = true;
    }
  }
  LocalStep out;
  out.b = best;
  const double ua = std::fabs(u(a));
  out.ratio = ua > 0.0 ? best_abs / ua : (best_abs > 0.0 ? 1e300 : 1.0);
  (void)K;
  return out;
}

Chain build_chain(const LatticeField& u, const Potential& V, const Cube& Qn,
                  Site a, int tau, int iota, long long k, double K) {
  require_solution(u, V, Qn, 0.0, "build_chain");
  const Rat r2 = Qn.radius - Rat(2);
  Cube inner(Qn.center, r2 < Rat(0) ? Rat(0) : r2);
  if (!inner.contains(a))
    throw std::invalid_argument("build_chain: start must lie in Q_{n-2}");
  for (Site b : cone_section(a, tau, iota * k))
    if (!Qn.contains(b))
      throw std::invalid_argument("build_chain: cone section leaves the cube");
  return greedy_chain(u, Qn, a, tau, iota, k, K, /*clip=*/false);
}

Chain build_chain_dirichlet(const LatticeField& u, const Potential& V,
                            const Cube& Qn, double lambda, Site a, int tau,
                            int iota, long long k, double K) {
  if (std::fabs(lambda) > K - 1.0)
    throw std::invalid_argument("build_chain_dirichlet: need |lambda| <= K-1 so that ||V - lambda|| <= K");
  // Dirichlet eigenvector: Delta u = (V - lambda) u with zero extension;
  // gate on the l2 eigen-equation residual at solver precision
  LatticeField uz = u;
  uz.set_zero_extension(true);
  const double eres = eigen_equation_residual(u, V, Qn, -lambda);
  if (eres > 1e-7)
    throw std::invalid_argument("build_chain_dirichlet: H_Q u = lambda u fails (residual " +
                                format_double(eres) + ")");
  bool hit = false;
  for (Site b : cone_section(a, tau, iota * k))
    if (Qn.contains(b)) { hit = true; break; }
  if (!hit)
    throw std::invalid_argument("build_chain_dirichlet: cone section misses the cube");
  Chain chain = greedy_chain(uz, Qn, a, tau, iota, k, K, /*clip=*/true);
  // endpoint guarantee (K+11)^{-k}|u(a)| holds because w <= k
  return chain;
}

Chain build_chain_unchecked(const LatticeField& u, const Cube& Qn, Site a,
                            int tau, int iota, long long k, double K) {
  return greedy_chain(u, Qn, a, tau, iota, k, K, /*clip=*/false);
}

namespace {

std::optional<PlaneAnchors> anchor_search(const LatticeField& u, const Cube& Qn,
                                          double K);

}  // namespace

std::optional<PlaneAnchors> find_plane_anchors(const LatticeField& u,
                                               const Potential& V,
                                               const Cube& Qn, double K) {
  require_solution(u, V, Qn, 0.0, "find_plane_anchors");
  return anchor_search(u, Qn, K);
}

std::optional<PlaneAnchors> find_plane_anchors_eigen(const LatticeField& u,
                                                     const Potential& V,
                                                     const Cube& Qn, double lambda,
                                                     double K) {
  LatticeField uz = u;
  uz.set_zero_extension(true);
  const double eres = eigen_equation_residual(u, V, Qn, -lambda);
  if (eres > 1e-7)
    throw std::invalid_argument("find_plane_anchors_eigen: H_Q u = lambda u fails (residual " +
                                format_double(eres) + ")");
  return anchor_search(uz, Qn, K);
}

namespace {

std::optional<PlaneAnchors> anchor_search(const LatticeField& u, const Cube& Qn,
                                          double K) {
  const double u0 = std::fabs(u(Qn.center));
  if (u0 == 0.0) throw std::invalid_argument("find_plane_anchors: u(0) = 0");
  const long long n = Qn.site_radius();
  const long long imax = n / 10;
  const double floor_value = std::pow(K + 11.0, -static_cast<double>(n)) * u0;
  Cube search(Qn.center, n / 10 + 1);

  for (int tau = 1; tau <= 4; ++tau) {
    PlaneAnchors pa;
    pa.tau = tau;
    pa.floor_value = floor_value;
    bool ok = true;
    for (long long i = 0; i <= imax && ok; ++i) {
      Site best{};
      double best_abs = -1.0;
      for (long long kk = i; kk <= i + 1; ++kk) {
        for (Site b : plane_sites(tau, kk + Qn.center.dot(lambda_dir(tau)), search)) {
          if (!cone_membership(Qn.center, 3, b)) continue;
          const double val = std::fabs(u(b));
          if (val > best_abs || (val == best_abs && b < best)) {
            best = b;
            best_abs = val;
          }
        }
      }
      if (best_abs >= floor_value) {
        pa.anchors.push_back(best);
        pa.values.push_back(best_abs);
      } else {
        ok = false;
      }
    }
    if (ok) return pa;
  }
  return std::nullopt;
}

}  // namespace

std::string chain_to_csv(const Chain& chain, const LatticeField& u) {
  std::ostringstream os;
  os << "index,x,y,z,abs_u,ratio\n";
  for (std::size_t i = 0; i < chain.points.size(); ++i) {
    const Site a = chain.points[i];
    os << i << ',' << a.x << ',' << a.y << ',' << a.z << ','
       << format_double(std::fabs(u(a))) << ','
       << format_double(i == 0 ? 1.0 : chain.ratios[i - 1]) << '\n';
  }
  return os.str();
}

}  // namespace andlab
