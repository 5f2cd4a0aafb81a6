#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace andlab::tri {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Point s*xi + t*eta of the triangular lattice, xi = (-1,0),
/// eta = (1/2, sqrt(3)/2).  All sets are defined by integer inequalities in
/// (s,t); the planar embedding is derived output only.
struct TriPoint {
  long long s = 0, t = 0;

  friend TriPoint operator+(TriPoint a, TriPoint b) { return {a.s + b.s, a.t + b.t}; }
  friend TriPoint operator-(TriPoint a, TriPoint b) { return {a.s - b.s, a.t - b.t}; }
  friend bool operator==(TriPoint a, TriPoint b) { return a.s == b.s && a.t == b.t; }
  friend bool operator!=(TriPoint a, TriPoint b) { return !(a == b); }
  friend bool operator<(TriPoint a, TriPoint b) {
    return a.t != b.t ? a.t < b.t : a.s < b.s;
  }
};

inline const TriPoint kXi{1, 0};     // +1 in the s coordinate
inline const TriPoint kEta{0, 1};    // +1 in the t coordinate
inline const TriPoint kGamma{1, 1};  // xi + eta

/// Planar embedding (x, y) of s*xi + t*eta.
inline std::pair<double, double> embed(TriPoint p) {
  return {-static_cast<double>(p.s) + 0.5 * static_cast<double>(p.t),
          0.8660254037844386 * static_cast<double>(p.t)};
}

/// Row-convex domain: for each t one contiguous s-interval.
class TriDomain {
 public:
  TriDomain() = default;
  TriDomain(long long t_min, long long t_max,
            const std::function<std::pair<long long, long long>(long long)>& srange);

  long long t_min() const { return t_min_; }
  long long t_max() const { return t_max_; }
  std::pair<long long, long long> srange(long long t) const;
  bool has(TriPoint p) const;
  long long index(TriPoint p) const;  // -1 if outside
  long long size() const { return total_; }
  TriPoint at(long long index) const;
  std::vector<TriPoint> points() const;  // row-major, s ascending

 private:
  long long t_min_ = 0, t_max_ = -1, total_ = 0;
  std::vector<std::pair<long long, long long>> rows_;
  std::vector<long long> start_;
};

/// Equilateral triangle T_{a;n}: t >= -n, s <= n, t - s <= n (relative to a);
/// 3n+1 points per edge, (3n+1)(3n+2)/2 in total.
struct Triangle {
  TriPoint center{};
  long long n = 0;

  TriDomain domain() const;
  bool contains(TriPoint p) const {
    const TriPoint d = p - center;
    return d.t >= -n && d.s <= n && d.t - d.s <= n;
  }
  std::vector<TriPoint> xi_edge() const;     // t = -n row
  std::vector<TriPoint> eta_edge() const;    // s = n side
  std::vector<TriPoint> gamma_edge() const;  // t - s = n side
  long long site_count() const { return (3 * n + 1) * (3 * n + 2) / 2; }
};

/// Trapezoid P_{a;m,l}: -l <= t <= 0, t - m <= s <= 0 (relative to a).
struct Trapezoid {
  TriPoint anchor{};
  long long m = 0, ell = 0;

  TriDomain domain() const;
  bool contains(TriPoint p) const {
    const TriPoint d = p - anchor;
    return d.t <= 0 && d.t >= -ell && d.s <= 0 && d.s >= d.t - m;
  }
  std::vector<TriPoint> upper_edge() const;  // t = 0, s in [-m, 0]
  std::vector<TriPoint> lower_edge() const;  // t = -l, s in [-l-m, 0]
  std::vector<TriPoint> left_leg() const;    // s = 0, t in [-l, 0]
  std::vector<TriPoint> right_leg() const;   // s - t = -m
};

/// Reversed trapezoid P^r_{a;m,l}: -l <= t <= 0, -m <= s <= t (relative).
struct RevTrapezoid {
  TriPoint anchor{};
  long long m = 0, ell = 0;

  TriDomain domain() const;
  bool contains(TriPoint p) const {
    const TriPoint d = p - anchor;
    return d.t <= 0 && d.t >= -ell && d.s >= -m && d.s <= d.t;
  }
  std::vector<TriPoint> upper_edge() const;  // t = 0, s in [-m, 0]
};

/// Function on a TriDomain; T is double for numerics and a boost
/// multiprecision integer/rational for the exact-arithmetic tests.
template <class T>
class TriField {
 public:
  TriField() = default;
  explicit TriField(TriDomain dom, T init = T(0))
      : dom_(std::move(dom)), vals_(static_cast<std::size_t>(dom_.size()), init) {}

  const TriDomain& domain() const { return dom_; }
  bool has(TriPoint p) const { return dom_.has(p); }
  const T& operator()(TriPoint p) const {
    const long long i = dom_.index(p);
    if (i < 0) throw std::out_of_range("TriField: point outside domain");
    return vals_[static_cast<std::size_t>(i)];
  }
  void set(TriPoint p, T v) {
    const long long i = dom_.index(p);
    if (i < 0) throw std::out_of_range("TriField::set: point outside domain");
    vals_[static_cast<std::size_t>(i)] = std::move(v);
  }
  std::vector<T>& values() { return vals_; }
  const std::vector<T>& values() const { return vals_; }

 private:
  TriDomain dom_;
  std::vector<T> vals_;
};

template <class T>
T abs_value(const T& v) {
  using std::abs;
  return v < T(0) ? T(-v) : v;
}

/// Three-term residual u(b) + u(b - xi) + u(b + eta) where defined.
template <class T>
std::optional<T> three_term(const TriField<T>& u, TriPoint b) {
  if (!u.has(b) || !u.has(b - kXi) || !u.has(b + kEta)) return std::nullopt;
  return u(b) + u(b - kXi) + u(b + kEta);
}

/// Solve the recurrence u(b + eta) = f(b) - u(b) - u(b - xi) on a triangle,
/// given values on the xi-edge.  Deterministic sweep: t ascending, s
/// ascending within each row.
template <class T>
TriField<T> propagate_triangle(const Triangle& tr, const std::vector<T>& xi_edge,
                               const std::function<T(TriPoint)>& f) {
  const auto edge = tr.xi_edge();
  if (xi_edge.size() != edge.size())
    throw std::invalid_argument("propagate_triangle: edge data does not cover the frontier");
  TriField<T> u(tr.domain());
  for (std::size_t i = 0; i < edge.size(); ++i) u.set(edge[i], xi_edge[i]);
  for (long long t = tr.center.t - tr.n; t < tr.center.t + 2 * tr.n; ++t) {
    const auto [s_lo, s_hi] = u.domain().srange(t + 1);
    for (long long s = s_lo; s <= s_hi; ++s) {
      const TriPoint b{s, t};  // relation point; b + eta = (s, t+1)
      u.set({s, t + 1}, f(b) - u(b) - u(b - kXi));
    }
  }
  return u;
}

/// Solve downward on a trapezoid from the upper edge and left leg:
/// u(b - xi) = f(b) - u(b) - u(b + eta).  Rows t descending, s descending.
template <class T>
TriField<T> propagate_trapezoid(const Trapezoid& tp,
                                const std::vector<T>& upper_edge,
                                const std::vector<T>& left_leg,
                                const std::function<T(TriPoint)>& f) {
  const auto ue = tp.upper_edge();
  const auto leg = tp.left_leg();
  if (upper_edge.size() != ue.size() || left_leg.size() != leg.size())
    throw std::invalid_argument("propagate_trapezoid: initial data does not cover the frontier");
  TriField<T> u(tp.domain());
  for (std::size_t i = 0; i < ue.size(); ++i) u.set(ue[i], upper_edge[i]);
  for (std::size_t i = 0; i < leg.size(); ++i) u.set(leg[i], left_leg[i]);
  const TriPoint a = tp.anchor;
  for (long long trel = -1; trel >= -tp.ell; --trel) {
    for (long long srel = 0; srel >= -tp.m + trel + 1; --srel) {
      const TriPoint b{a.s + srel, a.t + trel};
      u.set(b - kXi, f(b) - u(b) - u(b + kEta));
    }
  }
  return u;
}

/// Closed-form growth bound 2^{3m} S + (2^{3m} - 1) R for a field on
/// T_{a;m} with |u| <= S on one edge and residuals <= R.
double triangle_growth_bound(double S, double R, long long m);

/// Lemma-4.3 style decomposition on P_{a;m,l}: v is zero on the left leg,
/// equals u on the upper edge, matches u's three-term sums line by line, and
/// obeys ||v||_inf <= 4^{l+m}(K+R); w = u - v satisfies the exact homogeneous
/// recurrence and vanishes on the upper edge.
template <class T>
struct VWDecomposition {
  TriField<T> v, w;
};

template <class T>
VWDecomposition<T> construct_v(const Trapezoid& tp, const TriField<T>& u) {
  const auto ue = tp.upper_edge();
  std::vector<T> upper;
  upper.reserve(ue.size());
  for (auto p : ue) upper.push_back(u(p));
  std::vector<T> leg(tp.left_leg().size(), T(0));
  auto f = [&u](TriPoint b) { return u(b) + u(b - kXi) + u(b + kEta); };
  VWDecomposition<T> out;
  out.v = propagate_trapezoid<T>(tp, upper, leg, f);
  out.w = TriField<T>(tp.domain());
  for (long long i = 0; i < out.w.domain().size(); ++i) {
    const TriPoint p = out.w.domain().at(i);
    out.w.set(p, u(p) - out.v(p));
  }
  return out;
}

/// g_t(s) = (-1)^s w(a - s xi - t eta), s = 0..m+t; the Lemma-4.3 proof makes
/// this a polynomial of degree <= t, so its (t+1)-th finite difference
/// vanishes identically.
template <class T>
std::vector<T> extract_g(const Trapezoid& tp, const TriField<T>& w, long long t) {
  std::vector<T> g;
  for (long long s = 0; s <= tp.m + t; ++s) {
    const TriPoint p{tp.anchor.s - s, tp.anchor.t - t};
    g.push_back((s % 2 == 0) ? w(p) : T(-w(p)));
  }
  return g;
}

template <class T>
bool finite_difference_vanishes(std::vector<T> g, long long order) {
  for (long long k = 0; k < order; ++k) {
    if (g.size() < 2) return true;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) g[i] = g[i + 1] - g[i];
    g.pop_back();
  }
  for (const T& v : g)
    if (!(v == T(0))) return false;
  return true;
}

/// Discrete Remez check.  `samples` are (integer point, exact value) pairs
/// with at least d + ell points inside [A, B]; the polynomial is
/// reconstructed through the first d+1 samples and the remaining samples must
/// match exactly (degree violation otherwise).  Asserts
/// sup over integer points of [A,B] of |p| <= (4 (B-A) / ell)^d * max |samples|.
struct RemezResult {
  BigRat sup{0};       // max |p| over the integer points of I
  BigRat bound{0};     // (4|I|/ell)^d * M
  bool holds = false;
};
RemezResult discrete_remez(const std::vector<std::pair<long long, BigRat>>& samples,
                           int d, long long ell, long long A, long long B);

/// Exact polynomial evaluation helper used by the Remez verifier and tests.
BigRat newton_eval(const std::vector<std::pair<long long, BigRat>>& nodes,
                   const std::vector<BigRat>& divided_diffs, long long x);
std::vector<BigRat> newton_divided_differences(
    const std::vector<std::pair<long long, BigRat>>& nodes);

/// Counting statistic of the triangle DUC bound: checks the smallness
/// hypothesis on T_{0;floor(n/2)}, counts |u| > C4^{-n}|u(0)| on T_{0;n}.
struct TriangleStatistic {
  bool hypothesis_holds = false;
  long long count = 0;
  double threshold = 0.0;   // C4^{-n} |u(center)|
  double reference = 0.0;   // eps1 * n^2
  bool vacuous = false;     // hypothesis failed
  bool pass = false;        // hypothesis holds and count > reference
};
TriangleStatistic duc_triangle_statistic(const TriField<double>& u,
                                         const Triangle& tr, double C4,
                                         double eps1 = 1e-18);

enum class TrapKind { Standard, Reversed };

/// Counting statistic on a trapezoid or reversed trapezoid against an anchor
/// set L on the legal edge segment of the corresponding corollary.
struct TrapezoidStatistic {
  bool hypothesis_holds = false;
  bool L_valid = false;
  long long count = 0;
  double threshold = 0.0;        // C4^{-2 ell} * min_L |u|
  double bound_point = 0.0;      // eps * (ell+1)^2
  double bound_segment = 0.0;    // eps * (m+2) * (ell+1)
  bool segment_variant = false;  // L equals the full middle segment
  bool vacuous = false;
  bool pass = false;
};
TrapezoidStatistic trapezoid_statistic(const TriField<double>& u, TrapKind kind,
                                       TriPoint anchor, long long m, long long ell,
                                       const std::vector<TriPoint>& L, double C4,
                                       double eps = 1e-18);

/// CSV export "s,t,value".
std::string tri_field_to_csv(const TriField<double>& u);

}  // namespace andlab::tri
