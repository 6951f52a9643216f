#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aprx/lang.hpp"

namespace aprx {

// Linear expression sum(coeff[v] * x_v) + constant over dense variable indices.
// Program arithmetic is integer-valued, so coefficients stay integral.
struct LinExpr {
  std::map<int, Int> coeffs;
  Int constant;

  LinExpr() : constant(0) {}
  explicit LinExpr(Int c) : constant(std::move(c)) {}

  static LinExpr var(int idx) {
    LinExpr e;
    e.coeffs[idx] = 1;
    return e;
  }

  LinExpr& add(const LinExpr& o, const Int& scale = Int(1));
  LinExpr scaled(const Int& k) const;
  bool isConstant() const { return coeffs.empty(); }
  Int eval(const std::vector<Int>& assignment) const;
};

// sum(coeff[v] * x_v) + constant >= 0
struct LinCons {
  std::map<int, Int> coeffs;
  Int constant;

  static LinCons geqZero(const LinExpr& e) { return LinCons{e.coeffs, e.constant}; }
  // integer negation of (e >= 0): -e - 1 >= 0
  static LinCons negation(const LinCons& c);
  bool satisfiedBy(const std::vector<Int>& assignment) const;
  bool trivallyFalse() const { return coeffs.empty() && constant < 0; }
};

// Exact satisfiability of a conjunction of integer-coefficient constraints
// over the rationals, by Fourier-Motzkin elimination with gcd tightening.
// `true` means no rational (hence no integer) solution exists.
bool fmUnsat(const std::vector<LinCons>& cs, std::size_t derivedCap = 200000);

// antecedent /\ not(consequent) unsatisfiable
struct Implication {
  std::string label;
  std::vector<LinCons> antecedent;
  LinCons consequent;
};

bool implicationHolds(const Implication& imp);

// Human-readable "2*n - i + 1" over names[], for reports.
std::string linExprText(const std::map<int, Int>& coeffs, const Int& constant,
                        const std::vector<std::string>& names);
std::string linConsText(const LinCons& c, const std::vector<std::string>& names);

}  // namespace aprx
