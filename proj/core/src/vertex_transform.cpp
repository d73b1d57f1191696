#include <limits>
#include <vector>

#include "logcdr/vertex.hpp"

namespace logcdr::vertex {

namespace {

/* Working margin above the requested cap. Each gamma-beta contraction can
 * lower total gamma degree by one, so results are exact below the cap as
 * long as a transformed state carries at most this many betas. */
constexpr int kMargin = 4;

constexpr int kNoFloor = std::numeric_limits<int>::min() / 2;

VState truncate(const VState& v, int cap) { return v.gamma_window(kNoFloor, cap); }

/* Dense-exponent polynomial in the underived gammas. */
using Poly = std::map<std::vector<int>, Rational>;

int total_degree(const std::vector<int>& e) {
  int t = 0;
  for (int x : e) t += x;
  return t;
}

void poly_add(Poly& p, const std::vector<int>& e, const Rational& c) {
  if (c == 0) return;
  auto [it, fresh] = p.try_emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

Poly poly_mul(const Poly& p, const Poly& q, int cap) {
  Poly out;
  for (auto& [ep, cp] : p)
    for (auto& [eq, cq] : q) {
      std::vector<int> e = ep;
      for (size_t v = 0; v < e.size(); ++v) e[v] += eq[v];
      if (total_degree(e) > cap) continue;
      poly_add(out, e, cp * cq);
    }
  return out;
}

Poly poly_scale(const Poly& p, const Rational& c) {
  Poly out;
  if (c == 0) return out;
  for (auto& [e, v] : p) out[e] = v * c;
  return out;
}

Poly poly_sub(Poly p, const Poly& q) {
  for (auto& [e, c] : q) poly_add(p, e, -c);
  return p;
}

Poly poly_partial(const Poly& p, size_t v) {
  Poly out;
  for (auto& [e, c] : p) {
    if (e[v] == 0) continue;
    std::vector<int> t = e;
    t[v] -= 1;
    poly_add(out, t, c * e[v]);
  }
  return out;
}

Poly poly_compose(const Poly& p, const std::vector<Poly>& images, int cap) {
  Poly out;
  for (auto& [e, c] : p) {
    Poly term;
    term[std::vector<int>(images.size(), 0)] = c;
    for (size_t v = 0; v < e.size(); ++v)
      for (int t = 0; t < e[v]; ++t) term = poly_mul(term, images[v], cap);
    for (auto& [et, ct] : term) poly_add(out, et, ct);
  }
  return out;
}

Poly poly_from_state(const VState& s, int d) {
  Poly out;
  for (auto& [m, c] : s.terms()) {
    if (!m.symbols.empty())
      throw Error("coordinate images must be polynomial in the gammas");
    std::vector<int> e(static_cast<size_t>(d), 0);
    for (auto& [i, x] : m.gamma_exps) {
      if (x < 0)
        throw Error("coordinate images must be polynomial in the gammas");
      e[static_cast<size_t>(i - 1)] = x;
    }
    poly_add(out, e, c);
  }
  return out;
}

VState state_from_poly(const Engine& e, const Poly& p) {
  VState out = e.zero();
  for (auto& [ev, c] : p) {
    VMonomial m;
    for (size_t v = 0; v < ev.size(); ++v)
      if (ev[v] != 0) m.gamma_exps[static_cast<int>(v) + 1] = ev[v];
    out.add_term(m, c);
  }
  return out;
}

/* Polynomial state times a fixed symbol word (no contractions arise). */
VState poly_times_word(const Engine& e, const Poly& p,
                       const std::vector<FieldSymbol>& word) {
  VState out = e.zero();
  for (auto& [ev, c] : p) {
    VMonomial m;
    for (size_t v = 0; v < ev.size(); ++v)
      if (ev[v] != 0) m.gamma_exps[static_cast<int>(v) + 1] = ev[v];
    m.symbols = word;
    out.add_term(m, c);
  }
  return out;
}

std::vector<std::vector<Rational>> invert_matrix(
    std::vector<std::vector<Rational>> a) {
  size_t n = a.size();
  std::vector<std::vector<Rational>> inv(n,
                                         std::vector<Rational>(n, Rational(0)));
  for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw Error("coordinate change has singular linear part");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    Rational d = a[col][col];
    for (size_t cc = 0; cc < n; ++cc) {
      a[col][cc] /= d;
      inv[col][cc] /= d;
    }
    for (size_t rr = 0; rr < n; ++rr) {
      if (rr == col || a[rr][col] == 0) continue;
      Rational f = a[rr][col];
      for (size_t cc = 0; cc < n; ++cc) {
        a[rr][cc] -= f * a[col][cc];
        inv[rr][cc] -= f * inv[col][cc];
      }
    }
  }
  return inv;
}

}  // namespace

CoordinateTransform::CoordinateTransform(Engine& e, std::vector<VState> g,
                                         int degree_cap)
    : eng_(&e), cap_(degree_cap), g_(std::move(g)) {
  const int d = e.rank();
  const int r = e.localization();
  if (static_cast<int>(g_.size()) != d)
    throw Error("coordinate change needs one image per gamma");
  if (cap_ < 1) throw Error("degree cap must be positive");
  const int capw = cap_ + kMargin;

  std::vector<Poly> gp;
  for (const VState& gi : g_) gp.push_back(poly_from_state(gi, d));

  const std::vector<int> zero_exp(static_cast<size_t>(d), 0);
  for (int i = 0; i < d; ++i) {
    if (gp[static_cast<size_t>(i)].count(zero_exp))
      throw Error("coordinate change must fix the origin");
    if (i < r) {
      /* gamma_i times a unit: every monomial divisible by gamma_i and the
       * linear coefficient nonzero. */
      bool unit_seen = false;
      for (auto& [ev, c] : gp[static_cast<size_t>(i)]) {
        if (ev[static_cast<size_t>(i)] < 1)
          throw DivisorNotPreserved("image of gamma_" + std::to_string(i + 1) +
                                    " is not divisible by it");
        if (total_degree(ev) == 1) unit_seen = true;
      }
      if (!unit_seen)
        throw DivisorNotPreserved("image of gamma_" + std::to_string(i + 1) +
                                  " vanishes to second order");
    }
  }

  /* Linear part and its inverse. */
  std::vector<std::vector<Rational>> a(static_cast<size_t>(d),
                                       std::vector<Rational>(
                                           static_cast<size_t>(d),
                                           Rational(0)));
  for (int i = 0; i < d; ++i)
    for (auto& [ev, c] : gp[static_cast<size_t>(i)])
      if (total_degree(ev) == 1)
        for (int j = 0; j < d; ++j)
          if (ev[static_cast<size_t>(j)] == 1) a[static_cast<size_t>(i)]
                                                [static_cast<size_t>(j)] = c;
  auto ainv = invert_matrix(a);

  /* Inverse series by fixed point: f = A^{-1}(id - h(f)), h = g - A id. */
  std::vector<Poly> id(static_cast<size_t>(d));
  for (int j = 0; j < d; ++j) {
    std::vector<int> ev = zero_exp;
    ev[static_cast<size_t>(j)] = 1;
    id[static_cast<size_t>(j)][ev] = 1;
  }
  std::vector<Poly> h(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    Poly hi = gp[static_cast<size_t>(i)];
    for (auto it = hi.begin(); it != hi.end();)
      it = total_degree(it->first) == 1 ? hi.erase(it) : std::next(it);
    h[static_cast<size_t>(i)] = hi;
  }
  std::vector<Poly> f(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (auto& [ev, c] : id[static_cast<size_t>(j)])
        poly_add(f[static_cast<size_t>(i)], ev,
                 ainv[static_cast<size_t>(i)][static_cast<size_t>(j)] * c);
  for (int round = 0; round < capw; ++round) {
    std::vector<Poly> next(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
      Poly sum;
      for (int j = 0; j < d; ++j) {
        Poly inner =
            poly_sub(id[static_cast<size_t>(j)],
                     poly_compose(h[static_cast<size_t>(j)], f, capw));
        for (auto& [ev, c] : inner)
          poly_add(sum, ev,
                   ainv[static_cast<size_t>(i)][static_cast<size_t>(j)] * c);
      }
      next[static_cast<size_t>(i)] = std::move(sum);
    }
    f = std::move(next);
  }
  for (int i = 0; i < d; ++i)
    if (poly_compose(gp[static_cast<size_t>(i)], f, capw) !=
        id[static_cast<size_t>(i)])
      throw Error("inverse series failed to close");

  /* M[i][j] = (df^j / dgamma~^i) composed with g. */
  std::vector<std::vector<Poly>> M(static_cast<size_t>(d),
                                   std::vector<Poly>(static_cast<size_t>(d)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      M[static_cast<size_t>(i)][static_cast<size_t>(j)] = poly_compose(
          poly_partial(f[static_cast<size_t>(j)], static_cast<size_t>(i)), gp,
          capw);

  gamma_img_ = g_;
  c_img_.assign(static_cast<size_t>(d), e.zero());
  b_img_.assign(static_cast<size_t>(d), e.zero());
  beta_img_.assign(static_cast<size_t>(d), e.zero());
  gamma_inv_img_.assign(static_cast<size_t>(r), e.zero());

  for (int i = 0; i < d; ++i) {
    VState ci = e.zero();
    VState bi = e.zero();
    for (int j = 0; j < d; ++j) {
      ci += poly_times_word(
          e, poly_partial(gp[static_cast<size_t>(i)], static_cast<size_t>(j)),
          {FieldSymbol{Kind::c, j + 1, 0}});
      bi += poly_times_word(e, M[static_cast<size_t>(i)][static_cast<size_t>(j)],
                            {FieldSymbol{Kind::b, j + 1, 0}});
    }
    c_img_[static_cast<size_t>(i)] = ci;
    b_img_[static_cast<size_t>(i)] = bi;

    /* beta transforms with the inverse Jacobian composed on the right of the
     * beta field plus a quadratic fermion correction; both the operator order
     * and the sign matter, the other choices break [beta~ beta~] = 0. */
    VState betai = e.zero();
    for (int j = 0; j < d; ++j)
      betai += e.nop(
          e.beta(j + 1),
          state_from_poly(e, M[static_cast<size_t>(i)][static_cast<size_t>(j)]));
    for (int k = 0; k < d; ++k)
      for (int m = 0; m < d; ++m) {
        Poly n = poly_partial(M[static_cast<size_t>(i)][static_cast<size_t>(k)],
                              static_cast<size_t>(m));
        betai += poly_times_word(e, n,
                                 {FieldSymbol{Kind::c, m + 1, 0},
                                  FieldSymbol{Kind::b, k + 1, 0}});
      }
    beta_img_[static_cast<size_t>(i)] = truncate(betai, capw);
  }

  /* Truncated image of gamma_i^{-1} = gamma_i^{-1} U^{-1} on the divisor. */
  for (int i = 0; i < r; ++i) {
    Poly u;
    for (auto& [ev, c] : gp[static_cast<size_t>(i)]) {
      std::vector<int> t = ev;
      t[static_cast<size_t>(i)] -= 1;
      u[t] = c;
    }
    Rational u0 = u.at(zero_exp);
    Poly v = poly_scale(u, Rational(1) / u0);
    v.erase(zero_exp);
    Poly geo;
    geo[zero_exp] = Rational(1) / u0;
    Poly pw;
    pw[zero_exp] = 1;
    for (int t = 1; t <= capw; ++t) {
      pw = poly_mul(pw, v, capw);
      if (pw.empty()) break;
      Rational sgn = (t % 2 != 0) ? Rational(-1) : Rational(1);
      for (auto& [ev, c] : pw) poly_add(geo, ev, sgn * c / u0);
    }
    VState inv = state_from_poly(e, geo);
    VState shift = e.zero();
    for (auto& [m, c] : inv.terms()) {
      VMonomial t = m;
      int cur = 0;
      if (auto it = t.gamma_exps.find(i + 1); it != t.gamma_exps.end())
        cur = it->second;
      if (cur - 1 == 0)
        t.gamma_exps.erase(i + 1);
      else
        t.gamma_exps[i + 1] = cur - 1;
      shift.add_term(t, c);
    }
    gamma_inv_img_[static_cast<size_t>(i)] = shift;
  }
}

const VState& CoordinateTransform::gamma_image(int i) const {
  if (i < 1 || i > static_cast<int>(gamma_img_.size()))
    throw Error("index out of range");
  return gamma_img_[static_cast<size_t>(i - 1)];
}
const VState& CoordinateTransform::beta_image(int i) const {
  if (i < 1 || i > static_cast<int>(beta_img_.size()))
    throw Error("index out of range");
  return beta_img_[static_cast<size_t>(i - 1)];
}
const VState& CoordinateTransform::c_image(int i) const {
  if (i < 1 || i > static_cast<int>(c_img_.size()))
    throw Error("index out of range");
  return c_img_[static_cast<size_t>(i - 1)];
}
const VState& CoordinateTransform::b_image(int i) const {
  if (i < 1 || i > static_cast<int>(b_img_.size()))
    throw Error("index out of range");
  return b_img_[static_cast<size_t>(i - 1)];
}

VState CoordinateTransform::substitute_gamma_part(
    const std::map<int, int>& exps) const {
  const int capw = cap_ + kMargin;
  /* Negative exponents split into an exact Laurent prefactor and unit
   * inverses; positive parts and unit inverses have non-negative degree,
   * so truncating their running product above the shifted cap is safe. */
  VMonomial pref;
  int down = 0;
  VState pos = eng_->vac();
  for (auto& [i, e] : exps) {
    if (e > 0) {
      for (int t = 0; t < e; ++t) {
        pos = classical_product(pos, gamma_img_[static_cast<size_t>(i - 1)]);
        pos = pos.gamma_window(kNoFloor, capw + down);
      }
    } else {
      pref.gamma_exps[i] = e;
      down += -e;
      VState uinv = classical_product(
          gamma_inv_img_[static_cast<size_t>(i - 1)],
          eng_->gamma_power(i, 1));
      for (int t = 0; t < -e; ++t) {
        pos = classical_product(pos, uinv);
        pos = pos.gamma_window(kNoFloor, capw + down);
      }
    }
  }
  VState out = classical_product(eng_->from_monomial(pref, Rational(1)), pos);
  return truncate(out, capw);
}

VState CoordinateTransform::apply(const VState& s) const {
  VState checked = eng_->nop(eng_->vac(), s);
  const int capw = cap_ + kMargin;
  VState out = eng_->zero();
  for (auto& [m, coeff] : checked.terms()) {
    int betas = 0;
    for (const FieldSymbol& x : m.symbols)
      if (x.kind == Kind::beta) ++betas;
    if (betas > kMargin)
      throw DegreeCapExceeded(
          "state carries more betas than the working margin covers");
    VState acc = eng_->vac();
    bool have = false;
    for (auto it = m.symbols.rbegin(); it != m.symbols.rend(); ++it) {
      const VState* base = nullptr;
      switch (it->kind) {
        case Kind::gamma: base = &gamma_img_[static_cast<size_t>(it->index - 1)]; break;
        case Kind::beta: base = &beta_img_[static_cast<size_t>(it->index - 1)]; break;
        case Kind::c: base = &c_img_[static_cast<size_t>(it->index - 1)]; break;
        case Kind::b: base = &b_img_[static_cast<size_t>(it->index - 1)]; break;
      }
      VState factor = eng_->derivative(*base, it->der);
      acc = have ? eng_->nop(factor, acc) : factor;
      have = true;
      acc = truncate(acc, capw);
    }
    if (!m.gamma_exps.empty()) {
      VState gpart = substitute_gamma_part(m.gamma_exps);
      acc = have ? eng_->nop(gpart, acc) : gpart;
      have = true;
      acc = truncate(acc, capw);
    }
    out += acc.scaled(coeff);
  }
  return truncate(out, cap_);
}

}  // namespace logcdr::vertex
