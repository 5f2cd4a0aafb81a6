#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "andlab/lattice.hpp"
#include "andlab/prng.hpp"

using namespace andlab;

TEST_CASE("cube sites: counts, order, membership") {
  CHECK(cube_sites(Cube{{0, 0, 0}, 1}).size() == 27);
  const auto singleton = cube_sites(Cube{{5, -2, 3}, 0});
  REQUIRE(singleton.size() == 1);
  CHECK(singleton[0] == Site{5, -2, 3});
  CHECK(Cube{{1, 0, 0}, 2}.contains(Site{3, 2, -2}));
  CHECK_FALSE(Cube{{1, 0, 0}, 2}.contains(Site{4, 0, 0}));

  // lexicographic order and index round-trip
  const Cube q{{-1, 2, 0}, 2};
  const auto sites = cube_sites(q);
  CHECK(std::is_sorted(sites.begin(), sites.end()));
  for (long long i = 0; i < q.site_count(); ++i) {
    CHECK(cube_site_at(q, i) == sites[static_cast<std::size_t>(i)]);
    CHECK(cube_index(q, sites[static_cast<std::size_t>(i)]) == i);
  }
}

TEST_CASE("cube with rational radius floors to the site lattice") {
  const Cube q{{0, 0, 0}, Rat(5, 2)};  // radius 2.5
  CHECK(q.site_radius() == 2);
  CHECK(q.contains(Site{2, -2, 1}));
  CHECK_FALSE(q.contains(Site{3, 0, 0}));
}

TEST_CASE("cone membership and sections") {
  CHECK(cone_section({0, 0, 0}, 3, 0) == std::vector<Site>{{0, 0, 0}});
  const auto s1 = cone_section({0, 0, 0}, 3, 1);
  CHECK(s1.size() == 5);
  CHECK(cone_membership({0, 0, 0}, 3, {1, 0, 2}));
  CHECK_FALSE(cone_membership({0, 0, 0}, 3, {2, 0, 1}));

  // |C_a^tau(k)| = 2k^2 + 2|k| + 1, brute force cross-check
  for (int tau = 1; tau <= 3; ++tau)
    for (long long k = -8; k <= 8; ++k) {
      const auto sec = cone_section({1, -2, 3}, tau, k);
      CHECK(static_cast<long long>(sec.size()) == 2 * k * k + 2 * std::llabs(k) + 1);
      long long brute = 0;
      for (Site b : cube_sites(Cube{{1, -2, 3}, 10}))
        if (cone_membership({1, -2, 3}, tau, b) && (b - Site{1, -2, 3}).coord(tau) == k)
          ++brute;
      CHECK(static_cast<long long>(sec.size()) == brute);
      for (Site b : sec) {
        CHECK(cone_membership({1, -2, 3}, tau, b));
        CHECK((b - Site{1, -2, 3}).coord(tau) == k);
      }
    }
}

TEST_CASE("plane sites and lambda projections") {
  const auto p = plane_sites(1, 0, Cube{{0, 0, 0}, 1});
  CHECK(p.size() == 7);
  std::set<Site> expect{{0, 0, 0}, {1, -1, 0}, {-1, 1, 0}, {1, 0, -1},
                        {-1, 0, 1}, {0, 1, -1}, {0, -1, 1}};
  CHECK(std::set<Site>(p.begin(), p.end()) == expect);

  CHECK(project_lambda1(Site{1, 1, 1}, 0) == Vec3Q::of({0, 0, 0}));
  CHECK(project_lambda1(Site{0, 0, 0}, 3) == Vec3Q::of({1, 1, 1}));

  // pi_k(a) . lambda1 = k exactly
  SplitMix64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const Site a{static_cast<long long>(rng.next() % 41) - 20,
                 static_cast<long long>(rng.next() % 41) - 20,
                 static_cast<long long>(rng.next() % 41) - 20};
    const long long k = static_cast<long long>(rng.next() % 21) - 10;
    CHECK(project_lambda1(a, k).dot(lambda_dir(1)) == Rat(k));
  }

  // pi_k restricted to a fixed plane P_{1,j} is injective (exhaustive on Q_6)
  std::set<std::array<Rat, 3>> seen;
  std::size_t total = 0;
  for (Site a : plane_sites(1, 2, Cube{{0, 0, 0}, 6})) {
    const Vec3Q pr = project_lambda1(a, 0);
    seen.insert({pr.x, pr.y, pr.z});
    ++total;
  }
  CHECK(seen.size() == total);
}

TEST_CASE("lambda direction identities") {
  for (int tau = 2; tau <= 4; ++tau) CHECK(lambda_dir(1).dot(lambda_bar(tau)) == 1);
  for (int t1 = 2; t1 <= 4; ++t1)
    for (int t2 = t1 + 1; t2 <= 4; ++t2) CHECK(lambda_bar(t1).dot(lambda_bar(t2)) == -1);
}

TEST_CASE("dyadic cubes enumerate centers inside the region") {
  CHECK(dyadic_cubes(2, Cube{{0, 0, 0}, 1}).size() == 27);
  CHECK(dyadic_cubes(2, Cube{{0, 0, 0}, 2}).size() == 125);
  CHECK_THROWS(dyadic_cubes(3, Cube{{0, 0, 0}, 1}));

  // covering: every region site lies in at least one returned cube
  // (regions at least half the scale wide)
  for (long long L : {2LL, 4LL}) {
    const Cube region{{3, -1, 2}, 2 * L};
    const auto cubes = dyadic_cubes(L, region);
    for (Site a : cube_sites(region)) {
      bool covered = false;
      for (const Cube& c : cubes)
        if (c.contains(a)) { covered = true; break; }
      CHECK(covered);
    }
  }
}

TEST_CASE("select_covering basic geometry") {
  const Cube Q{{0, 0, 0}, 64};
  SUBCASE("single central defect") {
    const auto res = select_covering(Q, {Cube{{0, 0, 0}, 1}}, 8, 4);
    REQUIRE(res.has_value());
    CHECK(res->cubes.size() == 1);
    CHECK(res->assignment[0] == 0);
  }
  SUBCASE("coincident defects share a cube") {
    const auto res = select_covering(Q, {Cube{{3, 3, 3}, 1}, Cube{{3, 3, 3}, 1}}, 8, 4);
    REQUIRE(res.has_value());
    CHECK(res->cubes.size() == 1);
    CHECK(res->assignment[0] == res->assignment[1]);
  }
  SUBCASE("far-apart defects get disjoint cubes") {
    std::vector<Cube> defects{Cube{{-40, -40, -40}, 1}, Cube{{40, 40, 40}, 1},
                              Cube{{-40, 40, -40}, 1}};
    const auto res = select_covering(Q, defects, 8, 4);
    REQUIRE(res.has_value());
    CHECK(res->cubes.size() == 3);
  }
}

TEST_CASE("select_covering randomized postconditions") {
  SplitMix64 rng(42);
  int successes = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Cube Q{{0, 0, 0}, 128};
    std::vector<Cube> defects;
    const int K = 1 + static_cast<int>(rng.next() % 4);
    for (int i = 0; i < K; ++i)
      defects.push_back(Cube{{static_cast<long long>(rng.next() % 201) - 100,
                              static_cast<long long>(rng.next() % 201) - 100,
                              static_cast<long long>(rng.next() % 201) - 100},
                             2});
    const auto res = select_covering(Q, defects, 16, 8);
    if (!res) continue;
    ++successes;
    CHECK(res->L3 >= 8);
    CHECK(res->L3 <= 16 * 8);
    const Cuboid qb = Cuboid::of_cube(Q);
    for (std::size_t i = 0; i < res->cubes.size(); ++i) {
      CHECK(qb.contains(Cuboid::of_cube(res->cubes[i])));
      for (std::size_t j = i + 1; j < res->cubes.size(); ++j)
        CHECK(Cuboid::of_cube(res->cubes[i]).disjoint(Cuboid::of_cube(res->cubes[j])));
    }
    for (std::size_t d = 0; d < defects.size(); ++d) {
      const Cube& cover = res->cubes[res->assignment[d]];
      const Cuboid cb = Cuboid::of_cube(cover);
      const Cuboid db = Cuboid::of_cube(defects[d]);
      CHECK(cb.contains(db));
      for (int t = 0; t < 3; ++t) {
        if (cb.lower[t] > qb.lower[t]) CHECK(8 * (db.lower[t] - cb.lower[t]) >= res->L3);
        if (cb.upper[t] < qb.upper[t]) CHECK(8 * (cb.upper[t] - db.upper[t]) >= res->L3);
      }
    }
  }
  CHECK(successes >= 30);  // greedy should succeed on most random instances
}

TEST_CASE("site serialization round trip") {
  CHECK(site_to_string({3, -4, 5}) == "3,-4,5");
  CHECK(site_from_string("3,-4,5") == Site{3, -4, 5});
  CHECK_FALSE(site_from_string("3;4;5").has_value());
  CHECK(cube_to_csv(Cube{{1, 2, 3}, 4}) == "1,2,3,4");
  CHECK(cube_to_csv(Cube{{0, 0, 0}, Rat(5, 2)}) == "0,0,0,5/2");
}
