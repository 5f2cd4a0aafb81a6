#include "andlab/tri_lattice.hpp"

#include <algorithm>
#include <sstream>

#include "andlab/io.hpp"

namespace andlab::tri {

TriDomain::TriDomain(long long t_min, long long t_max,
                     const std::function<std::pair<long long, long long>(long long)>& srange)
    : t_min_(t_min), t_max_(t_max) {
  if (t_max_ < t_min_) { t_max_ = t_min_ - 1; return; }
  rows_.reserve(static_cast<std::size_t>(t_max_ - t_min_ + 1));
  start_.reserve(rows_.capacity() + 1);
  start_.push_back(0);
  for (long long t = t_min_; t <= t_max_; ++t) {
    auto r = srange(t);
    if (r.second < r.first) throw std::invalid_argument("TriDomain: empty row");
    rows_.push_back(r);
    total_ += r.second - r.first + 1;
    start_.push_back(total_);
  }
}

std::pair<long long, long long> TriDomain::srange(long long t) const {
  if (t < t_min_ || t > t_max_) throw std::out_of_range("TriDomain::srange");
  return rows_[static_cast<std::size_t>(t - t_min_)];
}

bool TriDomain::has(TriPoint p) const {
  if (p.t < t_min_ || p.t > t_max_) return false;
  const auto& r = rows_[static_cast<std::size_t>(p.t - t_min_)];
  return r.first <= p.s && p.s <= r.second;
}

long long TriDomain::index(TriPoint p) const {
  if (!has(p)) return -1;
  const auto i = static_cast<std::size_t>(p.t - t_min_);
  return start_[i] + (p.s - rows_[i].first);
}

TriPoint TriDomain::at(long long index) const {
  const auto it = std::upper_bound(start_.begin(), start_.end(), index);
  const auto row = static_cast<std::size_t>(it - start_.begin()) - 1;
  return {rows_[row].first + (index - start_[row]), t_min_ + static_cast<long long>(row)};
}

std::vector<TriPoint> TriDomain::points() const {
  std::vector<TriPoint> out;
  out.reserve(static_cast<std::size_t>(total_));
  for (long long i = 0; i < total_; ++i) out.push_back(at(i));
  return out;
}

TriDomain Triangle::domain() const {
  const TriPoint a = center;
  const long long nn = n;
  return TriDomain(a.t - nn, a.t + 2 * nn, [a, nn](long long t) {
    return std::make_pair((t - a.t) - nn + a.s, nn + a.s);
  });
}

std::vector<TriPoint> Triangle::xi_edge() const {
  std::vector<TriPoint> e;
  for (long long s = -2 * n; s <= n; ++s) e.push_back({center.s + s, center.t - n});
  return e;
}

std::vector<TriPoint> Triangle::eta_edge() const {
  std::vector<TriPoint> e;
  for (long long t = -n; t <= 2 * n; ++t) e.push_back({center.s + n, center.t + t});
  return e;
}

std::vector<TriPoint> Triangle::gamma_edge() const {
  std::vector<TriPoint> e;
  for (long long t = -n; t <= 2 * n; ++t) e.push_back({center.s + t - n, center.t + t});
  return e;
}

TriDomain Trapezoid::domain() const {
  const TriPoint a = anchor;
  const long long mm = m;
  return TriDomain(a.t - ell, a.t, [a, mm](long long t) {
    return std::make_pair(a.s + (t - a.t) - mm, a.s);
  });
}

std::vector<TriPoint> Trapezoid::upper_edge() const {
  std::vector<TriPoint> e;
  for (long long s = -m; s <= 0; ++s) e.push_back({anchor.s + s, anchor.t});
  return e;
}

std::vector<TriPoint> Trapezoid::lower_edge() const {
  std::vector<TriPoint> e;
  for (long long s = -m - ell; s <= 0; ++s) e.push_back({anchor.s + s, anchor.t - ell});
  return e;
}

std::vector<TriPoint> Trapezoid::left_leg() const {
  std::vector<TriPoint> e;
  for (long long t = -ell; t <= -1; ++t) e.push_back({anchor.s, anchor.t + t});
  return e;
}

std::vector<TriPoint> Trapezoid::right_leg() const {
  std::vector<TriPoint> e;
  for (long long t = 0; t <= ell; ++t) e.push_back({anchor.s - m - t, anchor.t - t});
  return e;
}

TriDomain RevTrapezoid::domain() const {
  const TriPoint a = anchor;
  const long long mm = m;
  return TriDomain(a.t - ell, a.t, [a, mm](long long t) {
    return std::make_pair(a.s - mm, a.s + (t - a.t));
  });
}

std::vector<TriPoint> RevTrapezoid::upper_edge() const {
  std::vector<TriPoint> e;
  for (long long s = -m; s <= 0; ++s) e.push_back({anchor.s + s, anchor.t});
  return e;
}

double triangle_growth_bound(double S, double R, long long m) {
  const double g = std::pow(2.0, static_cast<double>(3 * m));
  return g * S + (g - 1.0) * R;
}

std::vector<BigRat> newton_divided_differences(
    const std::vector<std::pair<long long, BigRat>>& nodes) {
  const std::size_t n = nodes.size();
  std::vector<BigRat> dd(n);
  for (std::size_t i = 0; i < n; ++i) dd[i] = nodes[i].second;
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = n - 1; i >= k; --i) {
      const BigRat dx(BigInt(nodes[i].first - nodes[i - k].first));
      dd[i] = (dd[i] - dd[i - 1]) / dx;
      if (i == k) break;
    }
  return dd;
}

BigRat newton_eval(const std::vector<std::pair<long long, BigRat>>& nodes,
                   const std::vector<BigRat>& dd, long long x) {
  BigRat acc(0);
  for (std::size_t i = dd.size(); i-- > 0;) {
    acc = acc * BigRat(BigInt(x - nodes[i].first)) + dd[i];
  }
  return acc;
}

RemezResult discrete_remez(const std::vector<std::pair<long long, BigRat>>& samples,
                           int d, long long ell, long long A, long long B) {
  if (d < 0 || ell < 1 || B < A) throw std::invalid_argument("discrete_remez: bad parameters");
  if (static_cast<long long>(samples.size()) < d + ell)
    throw std::invalid_argument("discrete_remez: need at least d + ell sample points");
  for (const auto& [x, v] : samples) {
    (void)v;
    if (x < A || x > B) throw std::invalid_argument("discrete_remez: sample outside I");
  }

  // reconstruct through the first d+1 samples, then verify the rest exactly
  std::vector<std::pair<long long, BigRat>> nodes(samples.begin(),
                                                  samples.begin() + (d + 1));
  const auto dd = newton_divided_differences(nodes);
  for (std::size_t i = static_cast<std::size_t>(d + 1); i < samples.size(); ++i) {
    if (newton_eval(nodes, dd, samples[i].first) != samples[i].second)
      throw std::invalid_argument("discrete_remez: samples are not a degree <= d polynomial");
  }

  BigRat M(0);
  for (const auto& [x, v] : samples) {
    (void)x;
    const BigRat av = v < BigRat(0) ? BigRat(-v) : v;
    if (av > M) M = av;
  }

  RemezResult res;
  for (long long x = A; x <= B; ++x) {
    BigRat v = newton_eval(nodes, dd, x);
    if (v < BigRat(0)) v = -v;
    if (v > res.sup) res.sup = v;
  }
  BigRat factor(BigInt(4 * (B - A)), BigInt(ell));
  BigRat bound(1);
  for (int i = 0; i < d; ++i) bound = bound * factor;
  res.bound = bound * M;
  res.holds = res.sup <= res.bound;
  return res;
}

TriangleStatistic duc_triangle_statistic(const TriField<double>& u,
                                         const Triangle& tr, double C4,
                                         double eps1) {
  TriangleStatistic st;
  const double u0 = std::fabs(u(tr.center));
  if (u0 == 0.0) throw std::invalid_argument("duc_triangle_statistic: u(center) = 0");
  st.threshold = std::pow(C4, -static_cast<double>(tr.n)) * u0;
  st.reference = eps1 * static_cast<double>(tr.n) * static_cast<double>(tr.n);

  Triangle half{tr.center, tr.n / 2};
  st.hypothesis_holds = true;
  for (TriPoint b : half.domain().points()) {
    auto r = three_term(u, b);
    if (!r) continue;
    if (!(std::fabs(*r) < st.threshold)) { st.hypothesis_holds = false; break; }
  }
  for (TriPoint b : tr.domain().points())
    if (std::fabs(u(b)) > st.threshold) ++st.count;
  st.vacuous = !st.hypothesis_holds;
  st.pass = st.hypothesis_holds && static_cast<double>(st.count) > st.reference;
  return st;
}

TrapezoidStatistic trapezoid_statistic(const TriField<double>& u, TrapKind kind,
                                       TriPoint anchor, long long m, long long ell,
                                       const std::vector<TriPoint>& L, double C4,
                                       double eps) {
  if (L.empty()) throw std::invalid_argument("trapezoid_statistic: L is empty");
  TrapezoidStatistic st;

  std::vector<TriPoint> region;
  if (kind == TrapKind::Standard) {
    Trapezoid tp{anchor, m, ell};
    region = tp.domain().points();
    // legal anchors: {a - t xi : ell <= t <= m - ell}
    st.L_valid = true;
    for (TriPoint c : L) {
      const TriPoint d = anchor - c;
      if (d.t != 0 || d.s < ell || d.s > m - ell) { st.L_valid = false; break; }
    }
    // full middle segment {a - t xi : ell+1 <= t <= m-ell-1}?
    if (m >= 2 * ell + 2 && static_cast<long long>(L.size()) == m - 2 * ell - 1) {
      std::vector<TriPoint> seg;
      for (long long t = ell + 1; t <= m - ell - 1; ++t)
        seg.push_back({anchor.s - t, anchor.t});
      std::sort(seg.begin(), seg.end());
      std::vector<TriPoint> sortedL = L;
      std::sort(sortedL.begin(), sortedL.end());
      st.segment_variant = (sortedL == seg);
    }
  } else {
    RevTrapezoid tp{anchor, m, ell};
    region = tp.domain().points();
    st.L_valid = true;
    for (TriPoint c : L) {
      const TriPoint d = anchor - c;
      if (d.t != 0 || d.s < 0 || d.s > m) { st.L_valid = false; break; }
    }
    if (static_cast<long long>(L.size()) == m - 1) {
      std::vector<TriPoint> seg;
      for (long long t = 1; t <= m - 1; ++t) seg.push_back({anchor.s - t, anchor.t});
      std::sort(seg.begin(), seg.end());
      std::vector<TriPoint> sortedL = L;
      std::sort(sortedL.begin(), sortedL.end());
      st.segment_variant = (sortedL == seg);
    }
  }
  if (!st.L_valid) throw std::invalid_argument("trapezoid_statistic: malformed L");

  double minL = 1e300;
  for (TriPoint c : L) minL = std::min(minL, std::fabs(u(c)));
  st.threshold = std::pow(C4, -2.0 * static_cast<double>(ell)) * minL;

  // hypothesis over relation points fully inside the region
  auto in_region = [&](TriPoint p) {
    return kind == TrapKind::Standard ? Trapezoid{anchor, m, ell}.contains(p)
                                      : RevTrapezoid{anchor, m, ell}.contains(p);
  };
  st.hypothesis_holds = true;
  for (TriPoint b : region) {
    if (!in_region(b - kXi) || !in_region(b + kEta)) continue;
    const double r = std::fabs(u(b) + u(b - kXi) + u(b + kEta));
    if (!(r <= st.threshold)) { st.hypothesis_holds = false; break; }
  }

  for (TriPoint b : region)
    if (std::fabs(u(b)) >= st.threshold) ++st.count;

  st.bound_point = eps * static_cast<double>((ell + 1) * (ell + 1));
  st.bound_segment = eps * static_cast<double>((m + 2) * (ell + 1));
  st.vacuous = !st.hypothesis_holds;
  const double ref = st.segment_variant ? st.bound_segment : st.bound_point;
  st.pass = st.hypothesis_holds && static_cast<double>(st.count) >= ref;
  return st;
}

std::string tri_field_to_csv(const TriField<double>& u) {
  std::ostringstream os;
  os << "s,t,value\n";
  const auto& dom = u.domain();
  for (long long i = 0; i < dom.size(); ++i) {
    const TriPoint p = dom.at(i);
    os << p.s << ',' << p.t << ',' << format_double(u.values()[static_cast<std::size_t>(i)])
       << '\n';
  }
  return os.str();
}

}  // namespace andlab::tri
