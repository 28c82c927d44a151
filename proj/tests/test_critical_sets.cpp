#include <cmath>
#include <random>

#include "doctest.h"
#include "kstree/critical_sets.hpp"

using namespace kstree;

namespace {
const double pi2 = M_PI * M_PI;
}

TEST_CASE("membership with witnesses") {
  // lambda = 10 pi^2 lies in N0 through (1, 3): both odd, 1 + 9 = 10
  for (double L : {1.0, 2.5}) {
    const Membership m = is_member(CriticalSet::N0, 10.0 * pi2, L);
    CHECK(m.member);
    REQUIRE(m.witness.has_value());
    CHECK(m.witness->first == 1);
    CHECK(m.witness->second == 3);
  }

  // lambda = 5 pi^2 / L^2 lies in N1 through (1, 2)
  for (double L : {1.0, 0.7}) {
    const Membership m = is_member(CriticalSet::N1, 5.0 * pi2 / (L * L), L);
    CHECK(m.member);
    REQUIRE(m.witness.has_value());
    CHECK(m.witness->first == 1);
    CHECK(m.witness->second == 2);
    CHECK(m.scaled_value == doctest::Approx(20.0));
  }

  // 2 pi^2 has no same-parity decomposition m^2 + n^2 = 2 with m < n
  CHECK_FALSE(is_member(CriticalSet::N0, 2.0 * pi2, 1.0).member);

  // brute-force confirmation over the witness range
  bool found = false;
  for (int m = 1; m <= 3; ++m) {
    for (int n = m + 1; n <= 3; ++n) {
      if ((m % 2) == (n % 2) && m * m + n * n == 2) found = true;
    }
  }
  CHECK_FALSE(found);
}

TEST_CASE("single-parameter sets") {
  CHECK(is_member(CriticalSet::N2, pi2, 1.0).member);          // m = 1
  CHECK(is_member(CriticalSet::N3, pi2 / 4.0, 1.0).member);    // n = 0
  CHECK_FALSE(is_member(CriticalSet::N3, 1.0, 1.0).member);
  CHECK_FALSE(is_member(CriticalSet::N2, 2.0 * pi2, 1.0).member);
}

TEST_CASE("enumeration is sorted and matches the formulas") {
  const auto n3 = enumerate(CriticalSet::N3, 1.0, 23.0);
  REQUIRE(n3.size() == 2);
  CHECK(n3[0] == doctest::Approx(pi2 / 4.0));
  CHECK(n3[1] == doctest::Approx(9.0 * pi2 / 4.0));

  const auto n2 = enumerate(CriticalSet::N2, 1.0, 15.0);
  REQUIRE(n2.size() == 1);
  CHECK(n2[0] == doctest::Approx(pi2));

  const auto n4 = enumerate(CriticalSet::N4, 1.0, 20.0);
  REQUIRE(!n4.empty());
  CHECK(n4.front() == doctest::Approx(5.0 * pi2 / 4.0));  // (m, n) = (1, 0)
  const Membership m4 = is_member(CriticalSet::N4, n4.front(), 1.0);
  CHECK(m4.member);
  CHECK(m4.witness->first == 1);
  CHECK(m4.witness->second == 0);

  for (CriticalSet s : {CriticalSet::N0, CriticalSet::N1, CriticalSet::Nodd}) {
    const auto v = enumerate(s, 1.3, 400.0);
    for (std::size_t i = 1; i < v.size(); ++i) {
      CHECK(v[i] > v[i - 1] * (1.0 + 1e-12));
    }
    for (double x : v) CHECK(is_member(s, x, 1.3).member);
  }
}

TEST_CASE("witnesses reproduce lambda under the set formulas") {
  const double L = 1.4;
  auto rebuild = [&](CriticalSet s, int m, int n) {
    const double base = s == CriticalSet::N0 ? pi2 : pi2 / (4.0 * L * L);
    switch (s) {
      case CriticalSet::N0:
        return base * (m * m + n * n);
      case CriticalSet::N1:
        return base * (4.0 * m * m + 4.0 * n * n);
      case CriticalSet::N2:
        return base * 4.0 * m * m;
      case CriticalSet::N3:
        return base * (2.0 * n + 1.0) * (2.0 * n + 1.0);
      case CriticalSet::N4:
        return base * (4.0 * m * m + (2.0 * n + 1.0) * (2.0 * n + 1.0));
      default:
        return base * ((2.0 * m + 1.0) * (2.0 * m + 1.0) +
                       (2.0 * n + 1.0) * (2.0 * n + 1.0));
    }
  };
  for (CriticalSet s : {CriticalSet::N0, CriticalSet::N1, CriticalSet::N2,
                        CriticalSet::N3, CriticalSet::N4, CriticalSet::Nodd}) {
    for (double lambda : enumerate(s, L, 500.0)) {
      const Membership m = is_member(s, lambda, L);
      REQUIRE(m.member);
      REQUIRE(m.witness.has_value());
      const double back = rebuild(s, m.witness->first, m.witness->second);
      CHECK(std::abs(back - lambda) <= 1e-9 * std::max(1.0, lambda));
    }
  }
}

TEST_CASE("partition identity N1 u Nodd = N0 / 4L^2") {
  CHECK(verify_partition_identity(1.0, 100.0 * pi2));
  CHECK(verify_partition_identity(2.0, 50.0));
  // cutoff below the smallest element: both sides empty
  CHECK(verify_partition_identity(1.0, 1e-3));
}

TEST_CASE("scale covariance") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> unif(0.5, 60.0);
  for (CriticalSet s : {CriticalSet::N1, CriticalSet::N2, CriticalSet::N3,
                        CriticalSet::N4, CriticalSet::Nodd}) {
    for (int t = 0; t < 30; ++t) {
      const double lambda = unif(rng);
      for (double c : {2.0, 1.0 / 3.0}) {
        CHECK(is_member(s, lambda, 1.0).member ==
              is_member(s, lambda / (c * c), c).member);
      }
    }
    // exact members stay members after rescaling
    for (double x : enumerate(s, 1.0, 300.0)) {
      for (double c : {2.0, 1.0 / 3.0}) {
        CHECK(is_member(s, x / (c * c), c).member);
      }
    }
  }
}

TEST_CASE("Nmixt is the union of N3 and N4") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> unif(0.1, 80.0);
  for (int t = 0; t < 200; ++t) {
    const double lambda = unif(rng);
    const bool m3 = is_member(CriticalSet::N3, lambda, 1.0).member;
    const bool m4 = is_member(CriticalSet::N4, lambda, 1.0).member;
    CHECK(is_member(CriticalSet::Nmixt, lambda, 1.0).member == (m3 || m4));
  }
  for (double x : enumerate(CriticalSet::Nmixt, 1.0, 120.0)) {
    CHECK((is_member(CriticalSet::N3, x, 1.0).member ||
           is_member(CriticalSet::N4, x, 1.0).member));
  }
}
