#include "andlab/hamiltonian.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "andlab/io.hpp"

namespace andlab {

HamiltonianMatrix assemble(const Cube& Q, const Potential& V) {
  HamiltonianMatrix H;
  H.cube_ = Q;
  const long long n = Q.site_count();
  H.diag_.resize(static_cast<std::size_t>(n));
  H.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);

  for (long long i = 0; i < n; ++i) {
    const Site a = cube_site_at(Q, i);
    const double v = V(a);  // throws if V undefined on some site
    if (v < 0.0 || v > 1.0) throw std::invalid_argument("assemble: potential out of [0,1]");
    H.diag_[static_cast<std::size_t>(i)] = 6.0 + v;
  }
  // two passes over neighbor pairs: count, then fill
  for (long long i = 0; i < n; ++i) {
    const Site a = cube_site_at(Q, i);
    long long deg = 0;
    for (Site d : kNeighborSteps)
      if (cube_index(Q, a + d) >= 0) ++deg;
    H.row_ptr_[static_cast<std::size_t>(i) + 1] = deg;
  }
  for (long long i = 0; i < n; ++i)
    H.row_ptr_[static_cast<std::size_t>(i) + 1] += H.row_ptr_[static_cast<std::size_t>(i)];
  H.cols_.resize(static_cast<std::size_t>(H.row_ptr_.back()));
  for (long long i = 0; i < n; ++i) {
    const Site a = cube_site_at(Q, i);
    long long at = H.row_ptr_[static_cast<std::size_t>(i)];
    for (Site d : kNeighborSteps) {
      const long long j = cube_index(Q, a + d);
      if (j >= 0) H.cols_[static_cast<std::size_t>(at++)] = j;
    }
    std::sort(H.cols_.begin() + H.row_ptr_[static_cast<std::size_t>(i)],
              H.cols_.begin() + at);
  }
  return H;
}

void HamiltonianMatrix::multiply(const double* x, double* y) const {
  const long long n = dim();
  for (long long i = 0; i < n; ++i) {
    double s = diag_[static_cast<std::size_t>(i)] * x[i];
    for (long long k = row_ptr_[static_cast<std::size_t>(i)];
         k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
      s -= x[cols_[static_cast<std::size_t>(k)]];
    y[i] = s;
  }
}

std::vector<double> HamiltonianMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y(x.size());
  multiply(x.data(), y.data());
  return y;
}

std::pair<double, double> HamiltonianMatrix::gershgorin() const {
  double lo = 1e300, hi = -1e300;
  const long long n = dim();
  for (long long i = 0; i < n; ++i) {
    const double deg = static_cast<double>(row_ptr_[static_cast<std::size_t>(i) + 1] -
                                           row_ptr_[static_cast<std::size_t>(i)]);
    lo = std::min(lo, diag_[static_cast<std::size_t>(i)] - deg);
    hi = std::max(hi, diag_[static_cast<std::size_t>(i)] + deg);
  }
  return {lo, hi};
}

std::string HamiltonianMatrix::to_coordinate_text() const {
  std::ostringstream os;
  const long long n = dim();
  for (long long i = 0; i < n; ++i) {
    os << i << ' ' << i << ' ' << format_double(diag_[static_cast<std::size_t>(i)]) << '\n';
    for (long long k = row_ptr_[static_cast<std::size_t>(i)];
         k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
      os << i << ' ' << cols_[static_cast<std::size_t>(k)] << " -1\n";
  }
  return os.str();
}

LatticeField eigenvector_field(const HamiltonianMatrix& H, const std::vector<double>& v) {
  if (static_cast<long long>(v.size()) != H.dim())
    throw std::invalid_argument("eigenvector_field: size mismatch");
  LatticeField u(H.cube());
  u.values() = v;
  return u;
}

}  // namespace andlab
