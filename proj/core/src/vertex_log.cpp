#include <cstdlib>
#include <functional>
#include <set>
#include <utility>
#include <vector>

#include "logcdr/vertex.hpp"

namespace logcdr::vertex {

namespace {

/* Charge of a monomial under the grading that counts gamma and c as +1 and
 * beta and b as -1 at a fixed index. Every contraction annihilates a +1
 * against a -1, so products are additive in this grading. */
int divisor_degree(const VMonomial& m, int i) {
  int deg = 0;
  auto it = m.gamma_exps.find(i);
  if (it != m.gamma_exps.end()) deg += it->second;
  for (const FieldSymbol& s : m.symbols) {
    if (s.index != i) continue;
    switch (s.kind) {
      case Kind::gamma:
      case Kind::c: deg += 1; break;
      case Kind::beta:
      case Kind::b: deg -= 1; break;
    }
  }
  return deg;
}

/* Exact rational membership test: is target a linear combination of gens? */
bool in_span(const std::vector<VState>& gens, const VState& target) {
  std::map<VMonomial, size_t> rows;
  for (const VState& g : gens)
    for (auto& [m, c] : g.terms()) rows.try_emplace(m, rows.size());
  for (auto& [m, c] : target.terms()) rows.try_emplace(m, rows.size());
  size_t nr = rows.size();
  size_t nc = gens.size();
  if (nr == 0) return true;

  std::vector<std::vector<Rational>> mat(
      nr, std::vector<Rational>(nc + 1, Rational(0)));
  for (size_t j = 0; j < nc; ++j)
    for (auto& [m, c] : gens[j].terms()) mat[rows.at(m)][j] = c;
  for (auto& [m, c] : target.terms()) mat[rows.at(m)][nc] = c;

  size_t row = 0;
  for (size_t col = 0; col < nc && row < nr; ++col) {
    size_t piv = row;
    while (piv < nr && mat[piv][col] == 0) ++piv;
    if (piv == nr) continue;
    std::swap(mat[piv], mat[row]);
    for (size_t rr = row + 1; rr < nr; ++rr) {
      if (mat[rr][col] == 0) continue;
      Rational f = mat[rr][col] / mat[row][col];
      for (size_t cc = col; cc <= nc; ++cc) mat[rr][cc] -= f * mat[row][cc];
    }
    ++row;
  }
  for (size_t rr = row; rr < nr; ++rr)
    if (mat[rr][nc] != 0) return false;
  return true;
}

}  // namespace

Verdict is_logarithmic(Engine& e, const VState& s, const SearchBound& bound) {
  VState target = e.nop(e.vac(), s);  // also validates s against e
  if (target.is_zero()) return Verdict::yes;

  /* A monomial of negative divisor degree at a localized index is
   * unreachable: every generator of the subalgebra has degree 0 or 1
   * there, and the grading is additive under all products. */
  for (auto& [m, c] : target.terms())
    for (int i = 1; i <= e.localization(); ++i)
      if (divisor_degree(m, i) < 0) return Verdict::no;

  std::vector<VState> dressed;
  for (const VState& g : log_generators(e)) {
    VState cur = g;
    for (int k = 0; k <= bound.max_derivative; ++k) {
      dressed.push_back(cur);
      cur = e.derivative(cur);
    }
  }

  /* The span is bigraded, so each (weight, fermion) component of the
   * target must be reached separately. */
  std::map<std::pair<int, int>, VState> parts;
  for (auto& [m, c] : target.terms()) {
    auto [it, fresh] = parts.try_emplace(
        std::pair<int, int>{m.weight(), m.fermion()},
        VState(e.rank(), e.localization()));
    it->second.add_term(m, c);
  }

  for (auto& [wf, part] : parts) {
    const int w = wf.first;
    const int f = wf.second;
    std::vector<VState> candidates;
    std::set<std::string> seen;

    /* Right-nested products of dressed generators, built from the right,
     * pruned by weight (generators have non-negative weight) and by the
     * unit fermion charge of each factor. */
    std::function<void(const VState&, int, int, int)> extend =
        [&](const VState& acc, int wsum, int fsum, int used) {
          if (acc.is_zero() || wsum > w) return;
          if (std::abs(f - fsum) > bound.max_factors - used) return;
          if (wsum == w && fsum == f) {
            if (seen.insert(acc.key()).second) candidates.push_back(acc);
          }
          if (used == bound.max_factors) return;
          for (const VState& g : dressed)
            extend(e.nop(g, acc), wsum + g.weight(), fsum + g.fermion(),
                   used + 1);
        };
    /* The empty product: any subalgebra contains the vacuum. */
    if (w == 0 && f == 0) candidates.push_back(e.vac());
    for (const VState& g : dressed) extend(g, g.weight(), g.fermion(), 1);

    if (!in_span(candidates, part)) return Verdict::inconclusive;
  }
  return Verdict::yes;
}

}  // namespace logcdr::vertex
