#pragma once

#include <optional>
#include <string>
#include <vector>

#include "andlab/field.hpp"
#include "andlab/lattice.hpp"

namespace andlab {

/// Greedy chain inside a cone: consecutive steps lie in
/// (iota e_tau + {0, +-e_1, +-e_2, +-e_3}) \ {0}, |u| shrinks by at most
/// (K+11)^{-1} per step, endpoint depth lands in {k-1, k}.
struct Chain {
  std::vector<Site> points;      // a_0 .. a_w
  std::vector<double> ratios;    // |u(a_i)| / |u(a_{i-1})|, size w
  int tau = 3;
  int iota = 1;
  long long k = 0;
  double ratio_bound = 0.0;      // (K+11)^{-1}

  Site start() const { return points.front(); }
  Site end() const { return points.back(); }
  long long depth() const { return (end() - start()).coord(tau) * iota; }
};

/// Re-verifies every Chain invariant from scratch (step set, cone
/// containment, depth window, per-step ratio).  Empty string means pass.
std::string verify_chain(const Chain& chain, const LatticeField& u);

/// One step of the local cone property: argmax of |u| over
/// a + v + {0,+-e_1,+-e_2,+-e_3} minus {a}, lexicographic tie-break.
/// Guarantee |u(b)| >= (K+11)^{-1}|u(a)| under |Delta u(a+v)| <= K|u(a+v)|.
struct LocalStep {
  Site b{};
  double ratio = 0.0;
};
LocalStep local_step(const LatticeField& u, Site a, Site v, double K);

/// Chain of Lemma-2.2 type inside Q_n; requires Delta u = V u on Q_n
/// (verified to 1e-9 relative), a in Q_{n-2}, and the cone section
/// C_a^tau(iota k) inside Q_n.
Chain build_chain(const LatticeField& u, const Potential& V, const Cube& Qn,
                  Site a, int tau, int iota, long long k, double K);

/// Dirichlet variant: u is an eigenvector of H_{Q_n} with eigenvalue lambda;
/// successor candidates are clipped to Q_n; endpoint satisfies
/// |u(a_w)| >= (K+11)^{-k} |u(a)|.
Chain build_chain_dirichlet(const LatticeField& u, const Potential& V,
                            const Cube& Qn, double lambda, Site a, int tau,
                            int iota, long long k, double K);

/// Variant without the solution-residual gate, for callers that have already
/// verified Delta u = V u (theta_construct re-verifies once at entry).
Chain build_chain_unchecked(const LatticeField& u, const Cube& Qn, Site a,
                            int tau, int iota, long long k, double K);

struct PlaneAnchors {
  int tau = 0;                      // accepted direction, scan order 1,2,3,4
  std::vector<Site> anchors;        // a_0 .. a_{floor(n/10)}
  std::vector<double> values;       // |u(a_i)|
  double floor_value = 0.0;         // (K+11)^{-n} |u(0)|
};

/// Plane-anchor search: least tau in {1,2,3,4} such that every slab
/// (P_{tau,i} u P_{tau,i+1}) cap C_0^3 cap Q_{n/10+1}, i = 0..floor(n/10),
/// holds a site with |u| >= (K+11)^{-n}|u(0)|; anchors are the max-|u|
/// witnesses.  nullopt signals a hypothesis violation.
std::optional<PlaneAnchors> find_plane_anchors(const LatticeField& u,
                                               const Potential& V,
                                               const Cube& Qn, double K);

/// Anchor search for Dirichlet eigenvectors of H_{Q_n}: u is zero-extended
/// and V - lambda plays the role of the potential (so Delta u = (V-lambda) u
/// holds exactly); K must dominate ||V - lambda||_inf.
std::optional<PlaneAnchors> find_plane_anchors_eigen(const LatticeField& u,
                                                     const Potential& V,
                                                     const Cube& Qn, double lambda,
                                                     double K);

/// CSV rows "index,x,y,z,abs_u,ratio".
std::string chain_to_csv(const Chain& chain, const LatticeField& u);

}  // namespace andlab
