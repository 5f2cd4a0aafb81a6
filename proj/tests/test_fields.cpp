#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "andlab/field.hpp"
#include "andlab/hamiltonian.hpp"
#include "andlab/lattice.hpp"
#include "andlab/solvers.hpp"

using namespace andlab;

TEST_CASE("laplacian: constants, sharp example, spike") {
  const Cube q2{{0, 0, 0}, 2};
  LatticeField ones(q2, 1.0);
  CHECK(laplacian_apply(ones, {0, 0, 0}) == doctest::Approx(0.0));

  const Cube q6{{0, 0, 0}, 6};
  LatticeField sharp = sharp_example_field(q6);
  const double scale = sharp.max_abs();
  for (Site a : cube_sites(Cube{{0, 0, 0}, 5}))
    CHECK(std::fabs(laplacian_apply(sharp, a)) / scale <= 1e-12);

  LatticeField spike = LatticeField::from_function(
      q2, [](Site a) { return a == Site{0, 0, 0} ? 1.0 : 0.0; });
  CHECK(laplacian_apply(spike, {0, 0, 0}) == doctest::Approx(-6.0));
  CHECK_THROWS(laplacian_apply(spike, {2, 2, 2}));  // neighbor out of domain
  spike.set_zero_extension(true);
  CHECK(laplacian_apply(spike, {2, 2, 2}) == doctest::Approx(0.0));
}

TEST_CASE("bernoulli potential: values and extension consistency") {
  const Potential small = Potential::bernoulli(Cube{{0, 0, 0}, 2}, 99);
  const Potential big = Potential::bernoulli(Cube{{0, 0, 0}, 5}, 99);
  long long ones = 0;
  for (Site a : cube_sites(Cube{{0, 0, 0}, 2})) {
    const double v = small(a);
    CHECK((v == 0.0 || v == 1.0));
    CHECK(big(a) == v);
    if (v == 1.0) ++ones;
  }
  CHECK(ones > 20);  // roughly half of 125
  CHECK(ones < 105);
  CHECK(small.provenance() == "bernoulli(99)");
}

TEST_CASE("assemble: singleton, row structure, dirichlet diagonal") {
  const Cube q0{{4, 4, 4}, 0};
  auto H0 = assemble(q0, Potential::constant(q0, 0.0));
  CHECK(H0.dim() == 1);
  CHECK(H0.diagonal()[0] == doctest::Approx(6.0));
  CHECK(full_spectrum(H0)[0] == doctest::Approx(6.0));

  // row a has exactly deg_Q(a) off-diagonal -1 entries (exhaustive on Q_4)
  const Cube q4{{0, 0, 0}, 4};
  auto H4 = assemble(q4, Potential::bernoulli(q4, 5));
  for (long long i = 0; i < H4.dim(); ++i) {
    const Site a = H4.site_of(i);
    long long deg = 0;
    for (Site d : kNeighborSteps)
      if (q4.contains(a + d)) ++deg;
    CHECK(H4.row_ptr()[static_cast<std::size_t>(i) + 1] -
              H4.row_ptr()[static_cast<std::size_t>(i)] ==
          deg);
  }

  // symmetry of the stored pattern
  for (long long i = 0; i < H4.dim(); ++i)
    for (long long k = H4.row_ptr()[static_cast<std::size_t>(i)];
         k < H4.row_ptr()[static_cast<std::size_t>(i) + 1]; ++k) {
      const long long j = H4.cols()[static_cast<std::size_t>(k)];
      bool found = false;
      for (long long k2 = H4.row_ptr()[static_cast<std::size_t>(j)];
           k2 < H4.row_ptr()[static_cast<std::size_t>(j) + 1]; ++k2)
        if (H4.cols()[static_cast<std::size_t>(k2)] == i) found = true;
      CHECK(found);
    }
}

TEST_CASE("free laplacian eigenvalue closed form (dense, n = 1..6)") {
  for (long long n = 1; n <= 6; ++n) {
    const Cube q{{0, 0, 0}, n};
    auto H = assemble(q, Potential::constant(q, 0.0));
    const auto pairs = eig_extremal(H, 1, Which::Smallest);
    const double expect = 6.0 * (1.0 - std::cos(M_PI / (2.0 * n + 2.0)));
    CHECK(pairs[0].value == doctest::Approx(expect).epsilon(1e-8));
  }
  // Q_1 free: 6 - 3 sqrt 2
  const Cube q1{{0, 0, 0}, 1};
  auto H1 = assemble(q1, Potential::constant(q1, 0.0));
  CHECK(eig_extremal(H1, 1, Which::Smallest)[0].value ==
        doctest::Approx(6.0 - 3.0 * std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("spectrum containment and shift covariance") {
  const Cube q3{{0, 0, 0}, 3};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto H = assemble(q3, Potential::bernoulli(q3, seed));
    const auto ev = full_spectrum(H);
    CHECK(ev.front() >= 0.0);
    CHECK(ev.back() <= 13.0);
    CHECK(static_cast<long long>(ev.size()) == 343);
  }
  // spec(assemble(Q, V + c)) = spec(assemble(Q, V)) + c
  auto V0 = Potential::bernoulli(q3, 11);
  LatticeField shifted = LatticeField::from_function(
      q3, [&](Site a) { return 0.5 * V0(a) + 0.3; });
  auto Ha = assemble(q3, Potential::explicit_field(
                             LatticeField::from_function(q3, [&](Site a) { return 0.5 * V0(a); })));
  auto Hb = assemble(q3, Potential::explicit_field(shifted));
  const auto ea = full_spectrum(Ha);
  const auto eb = full_spectrum(Hb);
  for (std::size_t i = 0; i < ea.size(); ++i)
    CHECK(eb[i] == doctest::Approx(ea[i] + 0.3).epsilon(1e-9));
}

TEST_CASE("constant potential shifts the whole spectrum by one") {
  const Cube q2{{0, 0, 0}, 2};
  auto H0 = assemble(q2, Potential::constant(q2, 0.0));
  auto H1 = assemble(q2, Potential::constant(q2, 1.0));
  const auto e0 = full_spectrum(H0);
  const auto e1 = full_spectrum(H1);
  for (std::size_t i = 0; i < e0.size(); ++i)
    CHECK(e1[i] == doctest::Approx(e0[i] + 1.0).epsilon(1e-10));
}

TEST_CASE("dense vs iterative eigensolver on Q_4") {
  const Cube q4{{0, 0, 0}, 4};
  auto H = assemble(q4, Potential::bernoulli(q4, 3));
  const auto dense = eig_extremal(H, 5, Which::Smallest);
  const auto iter = eig_extremal_iterative(H, 5, Which::Smallest);
  for (int i = 0; i < 5; ++i)
    CHECK(iter[static_cast<std::size_t>(i)].value ==
          doctest::Approx(dense[static_cast<std::size_t>(i)].value).epsilon(1e-8));
}

TEST_CASE("solution residual verifies eigenvectors in the dirichlet sense") {
  const Cube q3{{0, 0, 0}, 3};
  auto V = Potential::bernoulli(q3, 17);
  auto H = assemble(q3, V);
  auto pairs = eig_extremal(H, 1, Which::Smallest);
  LatticeField u = eigenvector_field(H, pairs[0].vector);
  u.set_zero_extension(true);
  CHECK(solution_residual(u, V, q3, -pairs[0].value) <= 1e-9);
}

TEST_CASE("matrix coordinate export shape") {
  const Cube q0{{0, 0, 0}, 0};
  auto H = assemble(q0, Potential::constant(q0, 1.0));
  CHECK(H.to_coordinate_text() == "0 0 7\n");
}
