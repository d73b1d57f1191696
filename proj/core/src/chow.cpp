#include "logcdr/chow.hpp"

#include <algorithm>

namespace logcdr::chow {

RingSpec::RingSpec(int dimension, std::vector<Generator> generators,
                   std::vector<RewriteRule> rules,
                   std::map<Monomial, Rational> integration)
    : dimension_(dimension),
      generators_(std::move(generators)),
      rules_(std::move(rules)),
      integration_(std::move(integration)) {
  if (dimension_ < 1) throw Error("ring dimension must be >= 1");
  for (size_t i = 0; i < generators_.size(); ++i) {
    if (generators_[i].degree < 1 || generators_[i].degree > dimension_)
      throw Error("generator degree out of range: " + generators_[i].name);
    for (size_t j = i + 1; j < generators_.size(); ++j)
      if (generators_[i].name == generators_[j].name)
        throw Error("duplicate generator name: " + generators_[i].name);
  }

  size_t n = generators_.size();
  for (const RewriteRule& r : rules_) {
    if (r.lhs.exps.size() != n)
      throw NonTerminatingRules("rule left side has wrong arity");
    if (r.lhs.deg != degree_of(r.lhs.exps))
      throw NonTerminatingRules("rule left side has inconsistent degree");
    if (r.lhs.is_unit())
      throw NonTerminatingRules("rule rewrites the unit monomial");
    for (auto& [m, c] : r.rhs) {
      if (m.exps.size() != n || m.deg != degree_of(m.exps))
        throw NonTerminatingRules("rule right side malformed");
      if (m.deg != r.lhs.deg)
        throw NonTerminatingRules("rule is not degree-homogeneous");
      /* Strict decrease in degree-lex order is what makes every rewrite
       * chain terminate. */
      if (!(m < r.lhs))
        throw NonTerminatingRules("rule right side does not precede its left side");
    }
  }

  for (auto& [m, c] : integration_) {
    if (m.exps.size() != n || m.deg != degree_of(m.exps) ||
        m.deg != dimension_)
      throw Error("integration table entry is not a top-degree monomial");
    if (!is_normal(m))
      throw Error("integration table entry is not in normal form");
  }
  for (const Monomial& m : normal_basis(dimension_))
    if (!integration_.count(m))
      throw Error("integration table misses a top-degree normal monomial");
}

int RingSpec::generator_index(std::string_view name) const {
  for (size_t i = 0; i < generators_.size(); ++i)
    if (generators_[i].name == name) return static_cast<int>(i);
  return -1;
}

int RingSpec::degree_of(const std::vector<int>& exps) const {
  if (exps.size() != generators_.size())
    throw Error("exponent vector has wrong arity");
  int deg = 0;
  for (size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] < 0) throw Error("negative exponent in monomial");
    deg += exps[i] * generators_[i].degree;
  }
  return deg;
}

Monomial RingSpec::make_monomial(std::vector<int> exps) const {
  int deg = degree_of(exps);
  return Monomial{deg, std::move(exps)};
}

Monomial RingSpec::unit_monomial() const {
  return Monomial{0, std::vector<int>(generators_.size(), 0)};
}

const RewriteRule* RingSpec::applicable_rule(const Monomial& m) const {
  for (const RewriteRule& r : rules_)
    if (r.lhs.divides(m)) return &r;
  return nullptr;
}

bool RingSpec::is_normal(const Monomial& m) const {
  return m.deg <= dimension_ && applicable_rule(m) == nullptr;
}

void RingSpec::rewrite_into(const Monomial& m, const Rational& c,
                            std::map<Monomial, Rational>& acc) const {
  if (m.deg > dimension_) return;
  const RewriteRule* r = applicable_rule(m);
  if (!r) {
    Rational& slot = acc[m];
    slot += c;
    if (slot == 0) acc.erase(m);
    return;
  }
  std::vector<int> q(m.exps);
  for (size_t i = 0; i < q.size(); ++i) q[i] -= r->lhs.exps[i];
  for (auto& [rm, rc] : r->rhs) {
    std::vector<int> exps(q);
    for (size_t i = 0; i < exps.size(); ++i) exps[i] += rm.exps[i];
    rewrite_into(make_monomial(std::move(exps)), c * rc, acc);
  }
}

std::map<Monomial, Rational> RingSpec::rewrite(const Monomial& m) const {
  std::map<Monomial, Rational> acc;
  rewrite_into(m, 1, acc);
  return acc;
}

std::vector<Monomial> RingSpec::normal_basis(int degree) const {
  std::vector<Monomial> out;
  std::vector<int> exps(generators_.size(), 0);
  /* Depth-first enumeration of exponent vectors of the given weighted
   * degree; generator degrees are >= 1 so the search is finite. */
  auto walk = [&](auto&& self, size_t i, int remaining) -> void {
    if (i == exps.size()) {
      if (remaining == 0) {
        Monomial m{degree, exps};
        if (is_normal(m)) out.push_back(m);
      }
      return;
    }
    int gdeg = generators_[i].degree;
    for (int e = 0; e * gdeg <= remaining; ++e) {
      exps[i] = e;
      self(self, i + 1, remaining - e * gdeg);
    }
    exps[i] = 0;
  };
  walk(walk, 0, degree);
  std::sort(out.begin(), out.end());
  return out;
}

Rational RingSpec::integral_of(const Monomial& m) const {
  auto it = integration_.find(m);
  if (it == integration_.end())
    throw Error("integration table has no entry for this monomial");
  return it->second;
}

}  // namespace logcdr::chow
