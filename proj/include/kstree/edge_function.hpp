#ifndef KSTREE_EDGE_FUNCTION_HPP
#define KSTREE_EDGE_FUNCTION_HPP

#include <vector>

namespace kstree {

/// Basis kinds of the closed-form term algebra on an edge (0, L).
enum class TermKind { Cos, Sin, Cosh, Sinh, Monomial };

/// One term c * kind(arg * x), or c * x^arg for Monomial (arg is an
/// integer power >= 0 in that case).
struct Term {
  double coeff = 0.0;
  TermKind kind = TermKind::Monomial;
  double arg = 0.0;
};

/// A function on an edge stored as a finite sum of cos/sin/cosh/sinh/x^p
/// terms.  Values, derivatives up to order four and L^2(0,L) inner
/// products are all evaluated in closed form; there is no grid anywhere.
///
/// Construction canonicalizes each term: negative frequencies are folded
/// by parity, zero-frequency oscillatory terms collapse to constants or
/// vanish, zero coefficients are dropped.  An empty term list is the zero
/// function.
class EdgeFunction {
 public:
  EdgeFunction() = default;
  explicit EdgeFunction(std::vector<Term> terms);

  static EdgeFunction zero() { return EdgeFunction{}; }
  static EdgeFunction cosine(double coeff, double freq);
  static EdgeFunction sine(double coeff, double freq);
  static EdgeFunction hyperbolic_cosine(double coeff, double freq);
  static EdgeFunction hyperbolic_sine(double coeff, double freq);
  static EdgeFunction monomial(double coeff, int power);
  static EdgeFunction constant(double c) { return monomial(c, 0); }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Pointwise value; no domain restriction (internal use, oracles).
  double value(double x) const;

  /// Exact derivative as a new term list.  order in 0..4 for the checked
  /// entry point `evaluate`; derivative() itself composes to any order.
  EdgeFunction derivative() const;
  EdgeFunction derivative(int order) const;

  /// Merge terms with equal kind and frequency (relative tolerance 1e-12)
  /// and drop exact cancellations, keeping representations canonical.
  EdgeFunction simplified() const;

  EdgeFunction& operator+=(const EdgeFunction& other);
  EdgeFunction& operator*=(double s);
  friend EdgeFunction operator+(EdgeFunction a, const EdgeFunction& b) {
    a += b;
    return a;
  }
  friend EdgeFunction operator-(EdgeFunction a, const EdgeFunction& b) {
    a += b * -1.0;
    return a;
  }
  friend EdgeFunction operator*(EdgeFunction a, double s) {
    a *= s;
    return a;
  }
  friend EdgeFunction operator*(double s, EdgeFunction a) {
    a *= s;
    return a;
  }

 private:
  std::vector<Term> terms_;
};

/// Checked evaluation of the derivative_order-th derivative at x in [0, L].
/// Throws std::domain_error for x outside [0, L] or order outside 0..4.
double evaluate(const EdgeFunction& f, double x, int derivative_order, double L);

/// Exact value of the integral of f*g over (0, L).
double inner_product(const EdgeFunction& f, const EdgeFunction& g, double L);

}  // namespace kstree

#endif
