#pragma once

#include <string>
#include <vector>

#include "andlab/field.hpp"
#include "andlab/lattice.hpp"

namespace andlab {

/// H_Q = -Delta + V restricted to a cube with Dirichlet boundary: diagonal
/// 6 + V(a) everywhere (no boundary renormalization), off-diagonal -1 between
/// nearest neighbors inside Q.  Symmetric; spectrum inside [0, 13] for
/// V in [0,1].  Immutable after assembly.
class HamiltonianMatrix {
 public:
  HamiltonianMatrix() = default;

  const Cube& cube() const { return cube_; }
  long long dim() const { return static_cast<long long>(diag_.size()); }
  const std::vector<double>& diagonal() const { return diag_; }

  // CSR of the off-diagonal -1 entries (column indices per row)
  const std::vector<long long>& row_ptr() const { return row_ptr_; }
  const std::vector<long long>& cols() const { return cols_; }

  Site site_of(long long index) const { return cube_site_at(cube_, index); }
  long long index_of(Site a) const { return cube_index(cube_, a); }

  void multiply(const double* x, double* y) const;  // y = H x
  std::vector<double> multiply(const std::vector<double>& x) const;

  /// Gershgorin envelope [min(d_i - deg_i), max(d_i + deg_i)].
  std::pair<double, double> gershgorin() const;

  /// Coordinate text export: "row col value" per line, diagonal included,
  /// 0-based indices in lexicographic site order.
  std::string to_coordinate_text() const;

  friend HamiltonianMatrix assemble(const Cube& Q, const Potential& V);

 private:
  Cube cube_{};
  std::vector<double> diag_;
  std::vector<long long> row_ptr_, cols_;
};

HamiltonianMatrix assemble(const Cube& Q, const Potential& V);

/// Eigenvector as a field on the cube (values in cube_sites order).
LatticeField eigenvector_field(const HamiltonianMatrix& H, const std::vector<double>& v);

}  // namespace andlab
