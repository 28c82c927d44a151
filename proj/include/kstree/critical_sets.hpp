#ifndef KSTREE_CRITICAL_SETS_HPP
#define KSTREE_CRITICAL_SETS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kstree {

/// The countable sets of lambda values at which boundary traces of
/// eigenfunctions degenerate.  Nmixt = N3 union N4 by definition.
enum class CriticalSet { N0, N1, N2, N3, N4, Nodd, Nmixt };

std::string to_string(CriticalSet s);

struct Membership {
  bool member = false;
  /// Integer witness (m, n) reproducing lambda under the set's formula.
  std::optional<std::pair<int, int>> witness;
  /// The value the integer search ran on: 4 L^2 lambda / pi^2 for the
  /// L-scaled sets, lambda / pi^2 for N0.
  double scaled_value = 0.0;
};

/// Exact membership via integer decomposition of the scaled value,
/// relative tolerance 1e-9.  Witnesses are returned in lexicographic
/// order; for single-parameter sets the second witness entry is unused
/// and reported as the first (pair {m, m} for N2, {n, n} for N3).
Membership is_member(CriticalSet set, double lambda, double L);

/// Sorted, de-duplicated elements of the set not exceeding cutoff.
std::vector<double> enumerate(CriticalSet set, double L, double cutoff);

/// Checks N1 union Nodd == N0 / (4 L^2) below cutoff by enumeration.
bool verify_partition_identity(double L, double cutoff);

}  // namespace kstree

#endif
