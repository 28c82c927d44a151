#include "kstree/critical_sets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kstree {

namespace {

constexpr double kRelTol = 1e-9;

bool close(double a, double b) {
  return std::abs(a - b) <= kRelTol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Decompose scaled ~ u^2 + v^2 over the admissible integer grid of each
// two-parameter set; first witness in lexicographic (m, n) order wins.
struct Decomposer {
  // maps (m, n) -> (u, v); returns whether the pair is admissible
  virtual bool admissible(int m, int n, int& u, int& v) const = 0;
  virtual ~Decomposer() = default;
};

Membership search_two(double scaled, const Decomposer& d) {
  Membership r;
  r.scaled_value = scaled;
  if (!(scaled > 0.0)) return r;
  const int bound = static_cast<int>(std::ceil(std::sqrt(scaled))) + 1;
  for (int m = 0; m <= bound; ++m) {
    for (int n = 0; n <= bound; ++n) {
      int u = 0, v = 0;
      if (!d.admissible(m, n, u, v)) continue;
      if (close(static_cast<double>(u) * u + static_cast<double>(v) * v, scaled)) {
        r.member = true;
        r.witness = std::make_pair(m, n);
        return r;
      }
    }
  }
  return r;
}

Membership search_one(double scaled, bool odd) {
  Membership r;
  r.scaled_value = scaled;
  if (!(scaled > 0.0)) return r;
  const int bound = static_cast<int>(std::ceil(std::sqrt(scaled))) + 1;
  for (int k = 0; k <= bound; ++k) {
    const int u = odd ? 2 * k + 1 : 2 * k;
    if (!odd && k < 1) continue;
    if (close(static_cast<double>(u) * u, scaled)) {
      r.member = true;
      r.witness = std::make_pair(k, k);
      return r;
    }
  }
  return r;
}

struct DecompN0 : Decomposer {
  bool admissible(int m, int n, int& u, int& v) const override {
    if (m < 1 || n <= m) return false;
    if ((m % 2) != (n % 2)) return false;
    u = m;
    v = n;
    return true;
  }
};

struct DecompN1 : Decomposer {
  bool admissible(int m, int n, int& u, int& v) const override {
    if (m < 1 || n <= m) return false;
    u = 2 * m;
    v = 2 * n;
    return true;
  }
};

struct DecompN4 : Decomposer {
  bool admissible(int m, int n, int& u, int& v) const override {
    if (m < 1 || n < 0) return false;
    u = 2 * m;
    v = 2 * n + 1;
    return true;
  }
};

struct DecompNodd : Decomposer {
  bool admissible(int m, int n, int& u, int& v) const override {
    if (m < 0 || n <= m) return false;
    u = 2 * m + 1;
    v = 2 * n + 1;
    return true;
  }
};

}  // namespace

std::string to_string(CriticalSet s) {
  switch (s) {
    case CriticalSet::N0:
      return "N0";
    case CriticalSet::N1:
      return "N1";
    case CriticalSet::N2:
      return "N2";
    case CriticalSet::N3:
      return "N3";
    case CriticalSet::N4:
      return "N4";
    case CriticalSet::Nodd:
      return "Nodd";
    case CriticalSet::Nmixt:
      return "Nmixt";
  }
  return "?";
}

Membership is_member(CriticalSet set, double lambda, double L) {
  if (!(lambda > 0.0) || !(L > 0.0)) {
    throw std::invalid_argument("critical set membership needs lambda > 0 and L > 0");
  }
  const double pi2 = M_PI * M_PI;
  const double scaled = set == CriticalSet::N0 ? lambda / pi2
                                               : 4.0 * L * L * lambda / pi2;
  switch (set) {
    case CriticalSet::N0:
      return search_two(scaled, DecompN0{});
    case CriticalSet::N1:
      return search_two(scaled, DecompN1{});
    case CriticalSet::N2:
      return search_one(scaled, /*odd=*/false);
    case CriticalSet::N3:
      return search_one(scaled, /*odd=*/true);
    case CriticalSet::N4:
      return search_two(scaled, DecompN4{});
    case CriticalSet::Nodd:
      return search_two(scaled, DecompNodd{});
    case CriticalSet::Nmixt: {
      Membership m3 = is_member(CriticalSet::N3, lambda, L);
      if (m3.member) return m3;
      return is_member(CriticalSet::N4, lambda, L);
    }
  }
  throw std::logic_error("unknown critical set");
}

std::vector<double> enumerate(CriticalSet set, double L, double cutoff) {
  if (!(cutoff > 0.0) || !(L > 0.0)) {
    throw std::invalid_argument("enumerate needs cutoff > 0 and L > 0");
  }
  const double pi2 = M_PI * M_PI;
  const double base = set == CriticalSet::N0 ? pi2 : pi2 / (4.0 * L * L);
  std::vector<double> out;
  const double max_sq = cutoff / base;
  if (max_sq < 1.0) return out;
  const int bound = static_cast<int>(std::ceil(std::sqrt(max_sq))) + 1;

  auto push_two = [&](const Decomposer& d) {
    for (int m = 0; m <= bound; ++m) {
      for (int n = 0; n <= bound; ++n) {
        int u = 0, v = 0;
        if (!d.admissible(m, n, u, v)) continue;
        const double val = base * (static_cast<double>(u) * u + static_cast<double>(v) * v);
        if (val <= cutoff * (1.0 + kRelTol)) out.push_back(val);
      }
    }
  };

  switch (set) {
    case CriticalSet::N0:
      push_two(DecompN0{});
      break;
    case CriticalSet::N1:
      push_two(DecompN1{});
      break;
    case CriticalSet::N2:
      for (int m = 1; 4.0 * m * m <= max_sq * (1.0 + kRelTol); ++m) {
        out.push_back(base * 4.0 * m * m);
      }
      break;
    case CriticalSet::N3:
      for (int n = 0;; ++n) {
        const double u = 2.0 * n + 1.0;
        if (u * u > max_sq * (1.0 + kRelTol)) break;
        out.push_back(base * u * u);
      }
      break;
    case CriticalSet::N4:
      push_two(DecompN4{});
      break;
    case CriticalSet::Nodd:
      push_two(DecompNodd{});
      break;
    case CriticalSet::Nmixt: {
      out = enumerate(CriticalSet::N3, L, cutoff);
      auto n4 = enumerate(CriticalSet::N4, L, cutoff);
      out.insert(out.end(), n4.begin(), n4.end());
      break;
    }
  }

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return close(a, b); }),
            out.end());
  return out;
}

bool verify_partition_identity(double L, double cutoff) {
  auto n1 = enumerate(CriticalSet::N1, L, cutoff);
  auto nodd = enumerate(CriticalSet::Nodd, L, cutoff);
  std::vector<double> lhs;
  lhs.reserve(n1.size() + nodd.size());
  lhs.insert(lhs.end(), n1.begin(), n1.end());
  lhs.insert(lhs.end(), nodd.begin(), nodd.end());
  std::sort(lhs.begin(), lhs.end());
  lhs.erase(std::unique(lhs.begin(), lhs.end(),
                        [](double a, double b) { return close(a, b); }),
            lhs.end());

  // N0 / (4 L^2): enumerate N0 against the rescaled cutoff, then divide.
  auto n0 = enumerate(CriticalSet::N0, 1.0, cutoff * 4.0 * L * L);
  for (double& v : n0) v /= 4.0 * L * L;

  if (lhs.size() != n0.size()) return false;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (!close(lhs[i], n0[i])) return false;
  }
  return true;
}

}  // namespace kstree
