#pragma once

// Exact sign tests for small polynomial expressions in double inputs.
// Doubles are dyadic rationals, so mpq arithmetic evaluates them without error.

#include <gmpxx.h>

#include <initializer_list>

namespace lslcop::exact {

inline mpq_class q(double v) { return mpq_class(v); }

// Sign of sum_k coef_k * a_k * b_k.
struct Product {
  long coef;
  double a;
  double b;
};

inline int sign_of(std::initializer_list<Product> terms) {
  mpq_class sum(0);
  for (const auto& t : terms) sum += mpq_class(t.coef) * q(t.a) * q(t.b);
  return sgn(sum);
}

}  // namespace lslcop::exact
