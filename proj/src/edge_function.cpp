#include "kstree/edge_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kstree {

namespace {

bool same_frequency(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

Term make_canonical(Term t) {
  if (t.kind == TermKind::Monomial) {
    const double p = std::round(t.arg);
    if (p < 0.0 || std::abs(t.arg - p) > 1e-9) {
      throw std::invalid_argument("monomial power must be a nonnegative integer");
    }
    t.arg = p;
    return t;
  }
  if (t.arg < 0.0) {
    t.arg = -t.arg;
    if (t.kind == TermKind::Sin || t.kind == TermKind::Sinh) t.coeff = -t.coeff;
  }
  if (t.arg == 0.0) {
    switch (t.kind) {
      case TermKind::Cos:
      case TermKind::Cosh:
        t.kind = TermKind::Monomial;
        t.arg = 0.0;
        break;
      case TermKind::Sin:
      case TermKind::Sinh:
        t.coeff = 0.0;
        break;
      default:
        break;
    }
  }
  return t;
}

// int_0^L cos(wx) dx
double int_cos(double w, double L) {
  if (w == 0.0) return L;
  return std::sin(w * L) / w;
}

// int_0^L sin(wx) dx, odd in w
double int_sin(double w, double L) {
  if (w == 0.0) return 0.0;
  const double s = std::sin(0.5 * w * L);
  return 2.0 * s * s / w;
}

// int_0^L cosh(wx) dx
double int_cosh(double w, double L) {
  if (w == 0.0) return L;
  return std::sinh(w * L) / w;
}

// int_0^L sinh(wx) dx, odd in w
double int_sinh(double w, double L) {
  if (w == 0.0) return 0.0;
  const double s = std::sinh(0.5 * w * L);
  return 2.0 * s * s / w;
}

// int_0^L x^p kind(f x) dx for oscillatory/hyperbolic kinds, by repeated
// integration by parts.  f > 0 after canonicalization.
double int_monomial_times(double p, TermKind kind, double f, double L) {
  if (p == 0.0) {
    switch (kind) {
      case TermKind::Cos:
        return int_cos(f, L);
      case TermKind::Sin:
        return int_sin(f, L);
      case TermKind::Cosh:
        return int_cosh(f, L);
      case TermKind::Sinh:
        return int_sinh(f, L);
      default:
        throw std::logic_error("unexpected kind");
    }
  }
  const double xp = std::pow(L, p);
  switch (kind) {
    case TermKind::Cos:
      return xp * std::sin(f * L) / f -
             (p / f) * int_monomial_times(p - 1.0, TermKind::Sin, f, L);
    case TermKind::Sin:
      return -xp * std::cos(f * L) / f +
             (p / f) * int_monomial_times(p - 1.0, TermKind::Cos, f, L);
    case TermKind::Cosh:
      return xp * std::sinh(f * L) / f -
             (p / f) * int_monomial_times(p - 1.0, TermKind::Sinh, f, L);
    case TermKind::Sinh:
      return xp * std::cosh(f * L) / f -
             (p / f) * int_monomial_times(p - 1.0, TermKind::Cosh, f, L);
    default:
      throw std::logic_error("unexpected kind");
  }
}

// int_0^L cos(bx) cosh(ax) dx; antiderivative vanishes at 0.
double int_cos_cosh(double b, double a, double L) {
  if (a == 0.0) return int_cos(b, L);
  const double d = a * a + b * b;
  return (a * std::sinh(a * L) * std::cos(b * L) +
          b * std::cosh(a * L) * std::sin(b * L)) /
         d;
}

double int_sin_cosh(double b, double a, double L) {
  if (a == 0.0) return int_sin(b, L);
  const double d = a * a + b * b;
  return (a * std::sinh(a * L) * std::sin(b * L) -
          b * std::cosh(a * L) * std::cos(b * L) + b) /
         d;
}

double int_cos_sinh(double b, double a, double L) {
  const double d = a * a + b * b;
  if (d == 0.0) return 0.0;
  return (a * std::cosh(a * L) * std::cos(b * L) +
          b * std::sinh(a * L) * std::sin(b * L) - a) /
         d;
}

double int_sin_sinh(double b, double a, double L) {
  const double d = a * a + b * b;
  if (d == 0.0) return 0.0;
  return (a * std::cosh(a * L) * std::sin(b * L) -
          b * std::sinh(a * L) * std::cos(b * L)) /
         d;
}

// int_0^L of a product of two canonical terms (coefficients excluded).
double pair_integral(const Term& s, const Term& t, double L) {
  // Order the pair so fewer cases remain.
  const Term& a = static_cast<int>(s.kind) <= static_cast<int>(t.kind) ? s : t;
  const Term& b = static_cast<int>(s.kind) <= static_cast<int>(t.kind) ? t : s;

  switch (a.kind) {
    case TermKind::Cos:
      switch (b.kind) {
        case TermKind::Cos:
          return 0.5 * (int_cos(a.arg - b.arg, L) + int_cos(a.arg + b.arg, L));
        case TermKind::Sin:
          // sin(bx) cos(ax) = [sin((b+a)x) + sin((b-a)x)] / 2
          return 0.5 * (int_sin(b.arg + a.arg, L) + int_sin(b.arg - a.arg, L));
        case TermKind::Cosh:
          return int_cos_cosh(a.arg, b.arg, L);
        case TermKind::Sinh:
          return int_cos_sinh(a.arg, b.arg, L);
        case TermKind::Monomial:
          return int_monomial_times(b.arg, TermKind::Cos, a.arg, L);
      }
      break;
    case TermKind::Sin:
      switch (b.kind) {
        case TermKind::Sin:
          return 0.5 * (int_cos(a.arg - b.arg, L) - int_cos(a.arg + b.arg, L));
        case TermKind::Cosh:
          return int_sin_cosh(a.arg, b.arg, L);
        case TermKind::Sinh:
          return int_sin_sinh(a.arg, b.arg, L);
        case TermKind::Monomial:
          return int_monomial_times(b.arg, TermKind::Sin, a.arg, L);
        default:
          break;
      }
      break;
    case TermKind::Cosh:
      switch (b.kind) {
        case TermKind::Cosh:
          return 0.5 * (int_cosh(a.arg + b.arg, L) + int_cosh(a.arg - b.arg, L));
        case TermKind::Sinh:
          // cosh(ax) sinh(bx) = [sinh((a+b)x) - sinh((a-b)x)] / 2
          return 0.5 * (int_sinh(a.arg + b.arg, L) - int_sinh(a.arg - b.arg, L));
        case TermKind::Monomial:
          return int_monomial_times(b.arg, TermKind::Cosh, a.arg, L);
        default:
          break;
      }
      break;
    case TermKind::Sinh:
      switch (b.kind) {
        case TermKind::Sinh:
          return 0.5 * (int_cosh(a.arg + b.arg, L) - int_cosh(a.arg - b.arg, L));
        case TermKind::Monomial:
          return int_monomial_times(b.arg, TermKind::Sinh, a.arg, L);
        default:
          break;
      }
      break;
    case TermKind::Monomial:
      return std::pow(L, a.arg + b.arg + 1.0) / (a.arg + b.arg + 1.0);
  }
  throw std::logic_error("unhandled term pair");
}

}  // namespace

EdgeFunction::EdgeFunction(std::vector<Term> terms) {
  terms_.reserve(terms.size());
  for (Term& t : terms) {
    Term c = make_canonical(t);
    if (c.coeff != 0.0) terms_.push_back(c);
  }
}

EdgeFunction EdgeFunction::cosine(double coeff, double freq) {
  return EdgeFunction{{Term{coeff, TermKind::Cos, freq}}};
}
EdgeFunction EdgeFunction::sine(double coeff, double freq) {
  return EdgeFunction{{Term{coeff, TermKind::Sin, freq}}};
}
EdgeFunction EdgeFunction::hyperbolic_cosine(double coeff, double freq) {
  return EdgeFunction{{Term{coeff, TermKind::Cosh, freq}}};
}
EdgeFunction EdgeFunction::hyperbolic_sine(double coeff, double freq) {
  return EdgeFunction{{Term{coeff, TermKind::Sinh, freq}}};
}
EdgeFunction EdgeFunction::monomial(double coeff, int power) {
  return EdgeFunction{{Term{coeff, TermKind::Monomial, static_cast<double>(power)}}};
}

double EdgeFunction::value(double x) const {
  double v = 0.0;
  for (const Term& t : terms_) {
    switch (t.kind) {
      case TermKind::Cos:
        v += t.coeff * std::cos(t.arg * x);
        break;
      case TermKind::Sin:
        v += t.coeff * std::sin(t.arg * x);
        break;
      case TermKind::Cosh:
        v += t.coeff * std::cosh(t.arg * x);
        break;
      case TermKind::Sinh:
        v += t.coeff * std::sinh(t.arg * x);
        break;
      case TermKind::Monomial:
        v += t.coeff * std::pow(x, t.arg);
        break;
    }
  }
  return v;
}

EdgeFunction EdgeFunction::derivative() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_) {
    switch (t.kind) {
      case TermKind::Cos:
        out.push_back(Term{-t.coeff * t.arg, TermKind::Sin, t.arg});
        break;
      case TermKind::Sin:
        out.push_back(Term{t.coeff * t.arg, TermKind::Cos, t.arg});
        break;
      case TermKind::Cosh:
        out.push_back(Term{t.coeff * t.arg, TermKind::Sinh, t.arg});
        break;
      case TermKind::Sinh:
        out.push_back(Term{t.coeff * t.arg, TermKind::Cosh, t.arg});
        break;
      case TermKind::Monomial:
        if (t.arg >= 1.0) {
          out.push_back(Term{t.coeff * t.arg, TermKind::Monomial, t.arg - 1.0});
        }
        break;
    }
  }
  return EdgeFunction{std::move(out)};
}

EdgeFunction EdgeFunction::derivative(int order) const {
  if (order < 0) throw std::domain_error("derivative order must be >= 0");
  EdgeFunction f = *this;
  for (int i = 0; i < order; ++i) f = f.derivative();
  return f;
}

EdgeFunction EdgeFunction::simplified() const {
  std::vector<Term> sorted = terms_;
  std::sort(sorted.begin(), sorted.end(), [](const Term& a, const Term& b) {
    if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    return a.arg < b.arg;
  });
  std::vector<Term> out;
  for (const Term& t : sorted) {
    if (!out.empty() && out.back().kind == t.kind &&
        same_frequency(out.back().arg, t.arg)) {
      out.back().coeff += t.coeff;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const Term& t) { return t.coeff == 0.0; });
  EdgeFunction r;
  r.terms_ = std::move(out);
  return r;
}

EdgeFunction& EdgeFunction::operator+=(const EdgeFunction& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

EdgeFunction& EdgeFunction::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (Term& t : terms_) t.coeff *= s;
  return *this;
}

double evaluate(const EdgeFunction& f, double x, int derivative_order, double L) {
  if (derivative_order < 0 || derivative_order > 4) {
    throw std::domain_error("derivative order must lie in 0..4");
  }
  if (!(x >= 0.0 && x <= L)) {
    throw std::domain_error("evaluation point outside [0, L]");
  }
  return f.derivative(derivative_order).value(x);
}

double inner_product(const EdgeFunction& f, const EdgeFunction& g, double L) {
  double acc = 0.0;
  for (const Term& s : f.terms()) {
    for (const Term& t : g.terms()) {
      acc += s.coeff * t.coeff * pair_integral(s, t, L);
    }
  }
  return acc;
}

}  // namespace kstree
