#include "aprx/linear.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "aprx/errors.hpp"

namespace aprx {

LinExpr& LinExpr::add(const LinExpr& o, const Int& scale) {
  for (const auto& [v, c] : o.coeffs) {
    Int& slot = coeffs[v];
    slot += c * scale;
    if (slot == 0) coeffs.erase(v);
  }
  constant += o.constant * scale;
  return *this;
}

LinExpr LinExpr::scaled(const Int& k) const {
  LinExpr e;
  if (k == 0) return e;
  for (const auto& [v, c] : coeffs) e.coeffs[v] = c * k;
  e.constant = constant * k;
  return e;
}

Int LinExpr::eval(const std::vector<Int>& assignment) const {
  Int r = constant;
  for (const auto& [v, c] : coeffs) r += c * assignment.at(static_cast<std::size_t>(v));
  return r;
}

LinCons LinCons::negation(const LinCons& c) {
  LinCons n;
  for (const auto& [v, k] : c.coeffs) n.coeffs[v] = -k;
  n.constant = -c.constant - 1;
  return n;
}

bool LinCons::satisfiedBy(const std::vector<Int>& assignment) const {
  Int r = constant;
  for (const auto& [v, c] : coeffs) r += c * assignment.at(static_cast<std::size_t>(v));
  return r >= 0;
}

namespace {

using boost::multiprecision::gcd;

// Divide by the gcd of the variable coefficients and floor the constant;
// sound over the integers and keeps coefficients small.
void tighten(LinCons& c) {
  if (c.coeffs.empty()) return;
  Int g(0);
  for (const auto& [v, k] : c.coeffs) g = gcd(g, abs(k));
  if (g <= 1) return;
  for (auto& [v, k] : c.coeffs) k /= g;
  // floor division for possibly negative constant
  Int q = c.constant / g;
  if (c.constant % g != 0 && c.constant < 0) q -= 1;
  c.constant = q;
}

std::string consKey(const LinCons& c) {
  std::ostringstream os;
  for (const auto& [v, k] : c.coeffs) os << v << ":" << k << ",";
  os << "|" << c.constant;
  return os.str();
}

}  // namespace

bool fmUnsat(const std::vector<LinCons>& cs, std::size_t derivedCap) {
  std::vector<LinCons> work;
  std::set<std::string> seen;
  std::set<int> vars;
  for (LinCons c : cs) {
    tighten(c);
    if (c.trivallyFalse()) return true;
    if (c.coeffs.empty()) continue;  // trivially true
    if (seen.insert(consKey(c)).second) {
      for (const auto& [v, k] : c.coeffs) vars.insert(v);
      work.push_back(std::move(c));
    }
  }

  for (int v : vars) {
    std::vector<LinCons> pos, neg, rest;
    for (auto& c : work) {
      auto it = c.coeffs.find(v);
      if (it == c.coeffs.end())
        rest.push_back(std::move(c));
      else if (it->second > 0)
        pos.push_back(std::move(c));
      else
        neg.push_back(std::move(c));
    }
    std::set<std::string> localSeen;
    for (const auto& c : rest) localSeen.insert(consKey(c));
    for (const auto& pc : pos) {
      for (const auto& nc : neg) {
        const Int a = pc.coeffs.at(v);   // > 0
        const Int b = -nc.coeffs.at(v);  // > 0
        LinCons combined;
        for (const auto& [w, k] : pc.coeffs)
          if (w != v) combined.coeffs[w] = k * b;
        for (const auto& [w, k] : nc.coeffs) {
          if (w == v) continue;
          Int& slot = combined.coeffs[w];
          slot += k * a;
          if (slot == 0) combined.coeffs.erase(w);
        }
        combined.constant = pc.constant * b + nc.constant * a;
        tighten(combined);
        if (combined.trivallyFalse()) return true;
        if (combined.coeffs.empty()) continue;
        if (localSeen.insert(consKey(combined)).second) rest.push_back(std::move(combined));
        if (rest.size() > derivedCap)
          throw Error("Fourier-Motzkin derived-constraint cap exceeded");
      }
    }
    work = std::move(rest);
  }
  // All variables eliminated without deriving a contradiction.
  return false;
}

bool implicationHolds(const Implication& imp) {
  std::vector<LinCons> cs = imp.antecedent;
  cs.push_back(LinCons::negation(imp.consequent));
  return fmUnsat(cs);
}

std::string linExprText(const std::map<int, Int>& coeffs, const Int& constant,
                        const std::vector<std::string>& names) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : coeffs) {
    if (c == 0) continue;
    Int a = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (a != 1) os << a << "*";
    os << names.at(static_cast<std::size_t>(v));
    first = false;
  }
  if (first) {
    os << constant;
  } else if (constant != 0) {
    os << (constant < 0 ? " - " : " + ") << abs(constant);
  }
  return os.str();
}

std::string linConsText(const LinCons& c, const std::vector<std::string>& names) {
  return linExprText(c.coeffs, c.constant, names) + " >= 0";
}

}  // namespace aprx
