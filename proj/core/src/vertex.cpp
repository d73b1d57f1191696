#include "logcdr/vertex.hpp"

#include <algorithm>
#include <functional>
#include <mutex>

namespace logcdr::vertex {

namespace {

/* Contraction partner and constant of a generator mode:
 * [gamma_(m), beta_(n)] = -delta, [beta_(m), gamma_(n)] = +delta,
 * {c_(m), b_(n)} = {b_(m), c_(n)} = +delta, all at m + n = -1. */
std::pair<Kind, int> contraction(Kind mode) {
  switch (mode) {
    case Kind::gamma: return {Kind::beta, -1};
    case Kind::beta: return {Kind::gamma, +1};
    case Kind::c: return {Kind::b, +1};
    case Kind::b: return {Kind::c, +1};
  }
  return {Kind::gamma, 0};
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::gamma: return "gamma";
    case Kind::beta: return "beta";
    case Kind::c: return "c";
    case Kind::b: return "b";
  }
  return "?";
}

/* Insert a symbol into a sorted word, tracking the Koszul sign of moving it
 * in from the left. Returns nullopt when an odd symbol repeats. */
std::optional<int> insert_symbol(std::vector<FieldSymbol>& word,
                                 const FieldSymbol& s) {
  auto pos = std::lower_bound(word.begin(), word.end(), s);
  if (s.odd() && pos != word.end() && *pos == s) return std::nullopt;
  int sign = 1;
  if (s.odd())
    for (auto it = word.begin(); it != pos; ++it)
      if (it->odd()) sign = -sign;
  word.insert(pos, s);
  return sign;
}

/* Koszul sign of moving an odd operator from the far left to position p. */
int crossing_sign(const std::vector<FieldSymbol>& word, size_t p, bool odd) {
  if (!odd) return 1;
  int sign = 1;
  for (size_t t = 0; t < p; ++t)
    if (word[t].odd()) sign = -sign;
  return sign;
}

void set_exp(std::map<int, int>& exps, int i, int e) {
  if (e == 0)
    exps.erase(i);
  else
    exps[i] = e;
}

int get_exp(const std::map<int, int>& exps, int i) {
  auto it = exps.find(i);
  return it == exps.end() ? 0 : it->second;
}

void check_compatible(const VState& x, const VState& y) {
  if (x.is_zero() || y.is_zero()) return;
  if (x.rank() != y.rank() || x.localization() != y.localization())
    throw LocalizationMismatch("states live over different systems");
}

}  // namespace

std::string FieldSymbol::str() const {
  std::string out = kind_name(kind);
  out += "_" + std::to_string(index);
  out += std::string(static_cast<size_t>(der), '\'');
  return out;
}

int VMonomial::weight() const {
  int w = 0;
  for (const FieldSymbol& s : symbols) w += s.weight();
  return w;
}

int VMonomial::fermion() const {
  int f = 0;
  for (const FieldSymbol& s : symbols) f += s.fermion();
  return f;
}

int VMonomial::quanta() const {
  int q = static_cast<int>(symbols.size());
  for (auto& [i, e] : gamma_exps) q += e;
  return q;
}

int VMonomial::min_gamma_exp() const {
  int m = 0;
  for (auto& [i, e] : gamma_exps) m = std::min(m, e);
  return m;
}

bool VMonomial::parity_odd() const {
  int odd = 0;
  for (const FieldSymbol& s : symbols)
    if (s.odd()) ++odd;
  return odd % 2 != 0;
}

std::string VMonomial::str() const {
  std::string out;
  for (auto& [i, e] : gamma_exps) {
    if (!out.empty()) out += "*";
    out += "gamma_" + std::to_string(i);
    if (e != 1) out += "^" + std::to_string(e);
  }
  for (const FieldSymbol& s : symbols) {
    if (!out.empty()) out += "*";
    out += s.str();
  }
  return out.empty() ? "1" : out;
}

void VState::add_term(const VMonomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, fresh] = terms_.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational VState::coeff(const VMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

VState VState::operator-() const { return scaled(Rational(-1)); }

VState VState::scaled(const Rational& c) const {
  VState out(rank_, loc_);
  if (c == 0) return out;
  for (auto& [m, v] : terms_) out.terms_[m] = v * c;
  return out;
}

VState operator+(const VState& x, const VState& y) {
  check_compatible(x, y);
  if (x.is_zero()) return y;
  VState out = x;
  for (auto& [m, c] : y.terms()) out.add_term(m, c);
  return out;
}

VState operator-(const VState& x, const VState& y) { return x + (-y); }

int VState::max_weight() const {
  int w = 0;
  for (auto& [m, c] : terms_) w = std::max(w, m.weight());
  return w;
}

bool VState::is_homogeneous() const {
  if (terms_.empty()) return true;
  int w = terms_.begin()->first.weight();
  int f = terms_.begin()->first.fermion();
  for (auto& [m, c] : terms_)
    if (m.weight() != w || m.fermion() != f) return false;
  return true;
}

int VState::weight() const {
  if (terms_.empty()) return 0;
  if (!is_homogeneous()) throw Error("state has mixed conformal weight");
  return terms_.begin()->first.weight();
}

int VState::fermion() const {
  if (terms_.empty()) return 0;
  if (!is_homogeneous()) throw Error("state has mixed fermion number");
  return terms_.begin()->first.fermion();
}

VState VState::quanta_part(int n) const {
  VState out(rank_, loc_);
  for (auto& [m, c] : terms_)
    if (m.quanta() == n) out.terms_[m] = c;
  return out;
}

int VState::max_quanta() const {
  bool any = false;
  int q = 0;
  for (auto& [m, c] : terms_) {
    int mq = m.quanta();
    if (!any || mq > q) q = mq;
    any = true;
  }
  return q;
}

VState VState::gamma_window(int lo, int hi) const {
  VState out(rank_, loc_);
  for (auto& [m, c] : terms_) {
    int deg = 0;
    for (auto& [i, e] : m.gamma_exps) deg += e;
    for (const FieldSymbol& s : m.symbols)
      if (s.kind == Kind::gamma) deg += 1;
    if (deg >= lo && deg <= hi) out.terms_[m] = c;
  }
  return out;
}

std::string VState::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto& [m, c] : terms_) {
    Rational a = c;
    if (out.empty()) {
      if (a < 0) {
        out += "-";
        a = -a;
      }
    } else {
      out += a < 0 ? " - " : " + ";
      if (a < 0) a = -a;
    }
    bool unit_mono = m.gamma_exps.empty() && m.symbols.empty();
    if (a != 1 || unit_mono) {
      out += to_string(a);
      if (!unit_mono) out += "*";
    }
    if (!unit_mono) out += m.str();
  }
  return out;
}

std::string VState::key() const {
  std::string out;
  for (auto& [m, c] : terms_) {
    out += m.str();
    out += ":";
    out += to_string(c);
    out += ";";
  }
  return out;
}

std::string LambdaPolynomial::str() const {
  if (coeffs.empty()) return "0";
  std::string out;
  for (auto& [n, v] : coeffs) {
    if (!out.empty()) out += " + ";
    out += "lambda^" + std::to_string(n) + "/" + std::to_string(n) + "! (" +
           v.str() + ")";
  }
  return out;
}

Engine::Engine(int rank, int localization) : d_(rank), r_(localization) {
  if (d_ < 1) throw Error("system rank must be >= 1");
  if (r_ < 0 || r_ > d_) throw Error("localization must lie in [0, rank]");
}

VState Engine::vac() const {
  VState out(d_, r_);
  out.add_term(VMonomial{}, Rational(1));
  return out;
}

namespace {

VMonomial single_symbol(Kind k, int i, int der) {
  VMonomial m;
  if (k == Kind::gamma && der == 0)
    m.gamma_exps[i] = 1;
  else
    m.symbols.push_back(FieldSymbol{k, i, der});
  return m;
}

}  // namespace

VState Engine::gamma(int i, int der) const {
  return from_monomial(single_symbol(Kind::gamma, i, der), Rational(1));
}
VState Engine::beta(int i, int der) const {
  return from_monomial(single_symbol(Kind::beta, i, der), Rational(1));
}
VState Engine::c(int i, int der) const {
  return from_monomial(single_symbol(Kind::c, i, der), Rational(1));
}
VState Engine::b(int i, int der) const {
  return from_monomial(single_symbol(Kind::b, i, der), Rational(1));
}

VState Engine::gamma_power(int i, int e) const {
  VMonomial m;
  set_exp(m.gamma_exps, i, e);
  return from_monomial(m, Rational(1));
}

VState Engine::from_monomial(const VMonomial& m, const Rational& coeff) const {
  VState out(d_, r_);
  out.add_term(m, coeff);
  validate(out);
  return out;
}

void Engine::validate_monomial(const VMonomial& m) const {
  for (auto& [i, e] : m.gamma_exps) {
    if (i < 1 || i > d_) throw Error("gamma index out of range");
    if (e == 0) throw Error("zero exponent stored in a monomial");
    if (e < 0 && i > r_)
      throw LocalizationMismatch("negative power of gamma_" +
                                 std::to_string(i) +
                                 " outside the localization");
  }
  const FieldSymbol* prev = nullptr;
  for (const FieldSymbol& s : m.symbols) {
    if (s.index < 1 || s.index > d_) throw Error("symbol index out of range");
    if (s.der < 0) throw Error("negative derivative order");
    if (s.kind == Kind::gamma && s.der == 0)
      throw Error("underived gamma belongs in the Laurent part");
    if (prev) {
      if (s < *prev) throw Error("monomial word out of canonical order");
      if (s.odd() && s == *prev) throw Error("odd symbol squared");
    }
    prev = &s;
  }
}

void Engine::validate(const VState& v) const {
  if (!v.is_zero() && (v.rank() != d_ || v.localization() != r_))
    throw LocalizationMismatch("state belongs to a different system");
  for (auto& [m, c] : v.terms()) validate_monomial(m);
}

VState Engine::derivative(const VState& v) const {
  validate(v);
  VState out(d_, r_);
  for (auto& [m, coeff] : v.terms()) {
    for (auto& [i, e] : m.gamma_exps) {
      VMonomial t = m;
      set_exp(t.gamma_exps, i, e - 1);
      auto sign = insert_symbol(t.symbols, FieldSymbol{Kind::gamma, i, 1});
      out.add_term(t, coeff * e * *sign);
    }
    for (size_t p = 0; p < m.symbols.size(); ++p) {
      FieldSymbol s = m.symbols[p];
      VMonomial t = m;
      int sgn = crossing_sign(t.symbols, p, s.odd());
      t.symbols.erase(t.symbols.begin() + static_cast<long>(p));
      s.der += 1;
      auto ins = insert_symbol(t.symbols, s);
      if (!ins) continue;
      out.add_term(t, coeff * sgn * *ins);
    }
  }
  return out;
}

VState Engine::derivative(const VState& v, int times) const {
  VState out = v;
  for (int t = 0; t < times; ++t) out = derivative(out);
  return out;
}

VState Engine::gen_mode(Kind k, int index, int m, const VState& v) const {
  VState out(d_, r_);
  bool mode_odd = (k == Kind::c || k == Kind::b);
  if (m <= -1) {
    /* Creation: s_(-1-der) is multiplication by the symbol D^der(s)/der!. */
    int der = -1 - m;
    for (auto& [mono, coeff] : v.terms()) {
      VMonomial t = mono;
      if (k == Kind::gamma && der == 0) {
        set_exp(t.gamma_exps, index, get_exp(t.gamma_exps, index) + 1);
        out.add_term(t, coeff);
        continue;
      }
      auto sign = insert_symbol(t.symbols, FieldSymbol{k, index, der});
      if (!sign) continue;
      out.add_term(t, coeff * *sign /
                          factorial(static_cast<unsigned long>(der)));
    }
    return out;
  }
  /* Annihilation: contract against matching partner symbols, picking up
   * m! from the stored derivative, plus the Laurent tail of beta_(0). */
  auto [partner, cval] = contraction(k);
  for (auto& [mono, coeff] : v.terms()) {
    int sgn = 1;
    for (size_t p = 0; p < mono.symbols.size(); ++p) {
      const FieldSymbol& x = mono.symbols[p];
      if (x.kind == partner && x.index == index && x.der == m) {
        VMonomial t = mono;
        t.symbols.erase(t.symbols.begin() + static_cast<long>(p));
        out.add_term(t, coeff * sgn * cval *
                            factorial(static_cast<unsigned long>(m)));
      }
      if (mode_odd && x.odd()) sgn = -sgn;
    }
    if (k == Kind::beta && m == 0) {
      int e = get_exp(mono.gamma_exps, index);
      if (e != 0) {
        VMonomial t = mono;
        set_exp(t.gamma_exps, index, e - 1);
        out.add_term(t, coeff * e);
      }
    }
  }
  return out;
}

VState Engine::symbol_mode(const FieldSymbol& s, int m, const VState& v) const {
  /* (D^k a)_(m) = (-1)^k k! binom(m, k) a_(m-k). */
  Rational scale = binomial(m, static_cast<unsigned long>(s.der)) *
                   factorial(static_cast<unsigned long>(s.der));
  if (s.der % 2 != 0) scale = -scale;
  if (scale == 0) return VState(d_, r_);
  return gen_mode(s.kind, s.index, m - s.der, v).scaled(scale);
}

VState Engine::gamma_inverse_mode(int i, int m, const VState& v) const {
  VState out(d_, r_);
  for (auto& [mono, coeff] : v.terms()) {
    /* Contractible partners: copies of D^k(beta_i), grouped by k. All
     * participants are even, so no Koszul signs appear anywhere below. */
    std::map<int, int> avail;
    for (const FieldSymbol& s : mono.symbols)
      if (s.kind == Kind::beta && s.index == i) avail[s.der] += 1;
    std::vector<std::pair<int, int>> groups(avail.begin(), avail.end());
    std::vector<int> chosen(groups.size(), 0);

    /* One contraction pattern: s_tot betas removed, z_contr the z-degree
     * the contractions consumed, cfac the ways-times-constants factor. */
    auto emit = [&](int s_tot, int z_contr, const Rational& cfac) {
      int cap = -1 - m - z_contr;  // z-degree the expansion must supply
      if (cap < 0) return;
      VMonomial base = mono;
      for (size_t g = 0; g < groups.size(); ++g)
        for (int rm = 0; rm < chosen[g]; ++rm) {
          auto it = std::find(base.symbols.begin(), base.symbols.end(),
                              FieldSymbol{Kind::beta, i, groups[g].first});
          base.symbols.erase(it);
        }
      int e0 = get_exp(base.gamma_exps, i);
      base.gamma_exps.erase(i);
      Rational head =
          coeff * cfac * factorial(static_cast<unsigned long>(s_tot));
      if (s_tot % 2 != 0) head = -head;

      /* gamma_i(z)^{-1-s} = sum_q binom(-1-s, q) gamma_i^{-1-s-q} delta^q
       * with delta = sum_{p>=1} z^{p-1} D^p(gamma_i)/p!; the mode needs the
       * z^{cap-q} coefficient of delta^q. Layers are keyed by z-degree,
       * terms by the sorted multiset of derivative orders, and the
       * iterated convolution supplies the multinomial counting. */
      std::map<int, std::map<std::vector<int>, Rational>> layer;
      layer[0][std::vector<int>{}] = Rational(1);
      for (int q = 0;; ++q) {
        auto zit = layer.find(cap - q);
        if (zit != layer.end()) {
          Rational qfac =
              head * binomial(-1 - s_tot, static_cast<unsigned long>(q));
          for (auto& [word, dc] : zit->second) {
            VMonomial t = base;
            set_exp(t.gamma_exps, i, e0 - 1 - s_tot - q);
            for (int p : word)
              insert_symbol(t.symbols, FieldSymbol{Kind::gamma, i, p});
            out.add_term(t, qfac * dc);
          }
        }
        if (q == cap) break;
        std::map<int, std::map<std::vector<int>, Rational>> next;
        for (auto& [z1, terms1] : layer)
          for (auto& [word, c1] : terms1)
            for (int p = 1; z1 + p - 1 <= cap; ++p) {
              std::vector<int> w = word;
              w.insert(std::lower_bound(w.begin(), w.end(), p), p);
              next[z1 + p - 1][w] +=
                  c1 / factorial(static_cast<unsigned long>(p));
            }
        layer = std::move(next);
      }
    };

    auto walk = [&](auto&& self, size_t g, int s_tot, int z_contr,
                    const Rational& cfac) -> void {
      if (g == groups.size()) {
        emit(s_tot, z_contr, cfac);
        return;
      }
      auto [k, e] = groups[g];
      Rational pick(1);  // binom(e, ck) * (-k!)^ck
      for (int ck = 0; ck <= e; ++ck) {
        chosen[g] = ck;
        self(self, g + 1, s_tot + ck, z_contr + ck * (-1 - k), cfac * pick);
        pick *= Rational(e - ck) / Rational(ck + 1);
        pick *= -factorial(static_cast<unsigned long>(k));
      }
      chosen[g] = 0;
    };
    walk(walk, 0, 0, 0, Rational(1));
  }
  return out;
}

VState Engine::np_mono(const VMonomial& a, const VState& b, int n) {
  if (a.symbols.empty() && a.gamma_exps.empty())
    return n == -1 ? b : VState(d_, r_);

  std::string key = a.str();
  key += "#";
  key += b.key();
  key += "#";
  key += std::to_string(n);
  {
    std::shared_lock lock(memo_mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }

  /* Peel the leftmost factor X off a = X_(-1) a' (exact in this basis) and
   * expand through the iterate formula
   *   (X_(-1) a')_(n) = sum_j X_(-1-j) a'_(n+j)
   *                   + (-1)^{|X||a'|} sum_j a'_(n-1-j) X_(j),
   * both sums cut off by weight positivity of the Fock space. */
  VMonomial rest = a;
  int wx;
  bool odd_x;
  std::function<VState(int, const VState&)> mode;
  if (!a.symbols.empty()) {
    FieldSymbol x = a.symbols.front();
    rest.symbols.erase(rest.symbols.begin());
    wx = x.weight();
    odd_x = x.odd();
    mode = [this, x](int mm, const VState& v) { return symbol_mode(x, mm, v); };
  } else {
    auto [i, e] = *a.gamma_exps.begin();
    wx = 0;
    odd_x = false;
    if (e > 0) {
      set_exp(rest.gamma_exps, i, e - 1);
      mode = [this, i](int mm, const VState& v) {
        return gen_mode(Kind::gamma, i, mm, v);
      };
    } else {
      set_exp(rest.gamma_exps, i, e + 1);
      mode = [this, i](int mm, const VState& v) {
        return gamma_inverse_mode(i, mm, v);
      };
    }
  }

  int sign = (odd_x && rest.parity_odd()) ? -1 : 1;
  int wrest = rest.weight();
  int wb = b.max_weight();

  VState out(d_, r_);
  for (int j = 0; n + j <= wrest + wb - 1; ++j) {
    VState inner = np_mono(rest, b, n + j);
    if (inner.is_zero()) continue;
    out += mode(-1 - j, inner);
  }
  for (int j = 0; j <= wx + wb - 1; ++j) {
    VState hit = mode(j, b);
    if (hit.is_zero()) continue;
    VState term = np_mono(rest, hit, n - 1 - j);
    if (sign < 0) term = -term;
    out += term;
  }

  {
    std::unique_lock lock(memo_mutex_);
    memo_.emplace(std::move(key), out);
  }
  return out;
}

VState Engine::nth_product(const VState& a, const VState& b, int n) {
  validate(a);
  validate(b);
  VState out(d_, r_);
  for (auto& [m, c] : a.terms()) out += np_mono(m, b, n).scaled(c);
  return out;
}

LambdaPolynomial Engine::lambda_bracket(const VState& a, const VState& b) {
  LambdaPolynomial out;
  int bound = a.max_weight() + b.max_weight();
  for (int n = 0; n < bound; ++n) {
    VState v = nth_product(a, b, n);
    if (!v.is_zero()) out.coeffs[n] = v;
  }
  return out;
}

size_t Engine::memo_size() const {
  std::shared_lock lock(memo_mutex_);
  return memo_.size();
}

Topological topological_generators(Engine& e) {
  Topological out{e.zero(), e.zero(), e.zero(), e.zero()};
  for (int i = 1; i <= e.rank(); ++i) {
    VMonomial m;
    m.symbols = {FieldSymbol{Kind::gamma, i, 1}, FieldSymbol{Kind::beta, i, 0}};
    out.L += e.from_monomial(m, Rational(1));
    m.symbols = {FieldSymbol{Kind::c, i, 1}, FieldSymbol{Kind::b, i, 0}};
    out.L += e.from_monomial(m, Rational(1));
    m.symbols = {FieldSymbol{Kind::c, i, 0}, FieldSymbol{Kind::b, i, 0}};
    out.J += e.from_monomial(m, Rational(1));
    m.symbols = {FieldSymbol{Kind::beta, i, 0}, FieldSymbol{Kind::c, i, 0}};
    out.Q += e.from_monomial(m, Rational(1));
    m.symbols = {FieldSymbol{Kind::gamma, i, 1}, FieldSymbol{Kind::b, i, 0}};
    out.G += e.from_monomial(m, Rational(1));
  }
  return out;
}

std::vector<VState> log_generators(Engine& e) {
  std::vector<VState> out;
  int r = e.localization();
  for (int i = 1; i <= r; ++i) {
    out.push_back(e.gamma(i));
    VMonomial m;
    m.gamma_exps[i] = -1;
    m.symbols = {FieldSymbol{Kind::gamma, i, 1}};
    out.push_back(e.from_monomial(m, Rational(1)));  // D(gamma_i)/gamma_i
    m = VMonomial{};
    m.gamma_exps[i] = 1;
    m.symbols = {FieldSymbol{Kind::beta, i, 0}};
    out.push_back(e.from_monomial(m, Rational(1)));  // gamma_i beta_i
    m = VMonomial{};
    m.gamma_exps[i] = -1;
    m.symbols = {FieldSymbol{Kind::c, i, 0}};
    out.push_back(e.from_monomial(m, Rational(1)));  // c_i / gamma_i
    m = VMonomial{};
    m.gamma_exps[i] = 1;
    m.symbols = {FieldSymbol{Kind::b, i, 0}};
    out.push_back(e.from_monomial(m, Rational(1)));  // gamma_i b_i
  }
  for (int j = r + 1; j <= e.rank(); ++j) {
    out.push_back(e.gamma(j));
    out.push_back(e.beta(j));
    out.push_back(e.c(j));
    out.push_back(e.b(j));
  }
  return out;
}

VState classical_product(const VState& a, const VState& b) {
  check_compatible(a, b);
  int rank = a.is_zero() ? b.rank() : a.rank();
  int loc = a.is_zero() ? b.localization() : a.localization();
  VState out(rank, loc);
  for (auto& [ma, ca] : a.terms())
    for (auto& [mb, cb] : b.terms()) {
      VMonomial t = ma;
      for (auto& [i, e] : mb.gamma_exps)
        set_exp(t.gamma_exps, i, get_exp(t.gamma_exps, i) + e);
      int sign = 1;
      bool dead = false;
      for (const FieldSymbol& s : mb.symbols) {
        /* s arrives from the right; it crosses everything past its slot. */
        auto pos = std::lower_bound(t.symbols.begin(), t.symbols.end(), s);
        if (s.odd()) {
          if (pos != t.symbols.end() && *pos == s) {
            dead = true;
            break;
          }
          for (auto it = pos; it != t.symbols.end(); ++it)
            if (it->odd()) sign = -sign;
        }
        t.symbols.insert(pos, s);
      }
      if (!dead) out.add_term(t, ca * cb * sign);
    }
  return out;
}

CheckResult verify_identity(const VState& lhs, const VState& rhs) {
  CheckResult out;
  out.difference = lhs - rhs;
  out.equal = out.difference.is_zero();
  return out;
}

}  // namespace logcdr::vertex
