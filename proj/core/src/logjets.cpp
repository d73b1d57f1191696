#include "logcdr/logjets.hpp"

#include <algorithm>
#include <sstream>

namespace logcdr::logjets {

namespace {

void add_term(std::map<JetMonomial, Rational>& acc, const JetMonomial& m,
              const Rational& c) {
  if (c == 0) return;
  auto [it, fresh] = acc.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) acc.erase(it);
  }
}

JetMonomial mono_mul(const JetMonomial& a, const JetMonomial& b) {
  JetMonomial out = a;
  for (auto& [s, e] : b) {
    int& slot = out[s];
    slot += e;
    if (slot == 0) out.erase(s);
  }
  return out;
}

int mono_degree(const JetMonomial& m) {
  int deg = 0;
  for (auto& [s, e] : m) deg += std::abs(e);
  return deg;
}

bool mono_divides(const JetMonomial& g, const JetMonomial& m) {
  for (auto& [s, e] : g) {
    auto it = m.find(s);
    if (it == m.end() || it->second < e) return false;
  }
  return true;
}

std::string mono_str(const JetMonomial& m) {
  if (m.empty()) return "1";
  std::string out;
  for (auto& [s, e] : m) {
    if (!out.empty()) out += "*";
    out += s.str();
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

} // namespace

std::string JetSymbol::str() const {
  std::string out = (base == Base::gamma ? "gamma_" : "ell_");
  out += std::to_string(index);
  out += std::string(static_cast<size_t>(jet_order), '\'');
  return out;
}

DiffPoly operator+(const DiffPoly& a, const DiffPoly& b) {
  DiffPoly out = a;
  for (auto& [m, c] : b.terms_) add_term(out.terms_, m, c);
  return out;
}

DiffPoly operator-(const DiffPoly& a, const DiffPoly& b) { return a + (-b); }

DiffPoly DiffPoly::operator-() const {
  DiffPoly out;
  for (auto& [m, c] : terms_) out.terms_[m] = -c;
  return out;
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
  DiffPoly out;
  for (auto& [ma, ca] : a.terms_)
    for (auto& [mb, cb] : b.terms_)
      add_term(out.terms_, mono_mul(ma, mb), ca * cb);
  return out;
}

DiffPoly DiffPoly::scaled(const Rational& c) const {
  DiffPoly out;
  if (c == 0) return out;
  for (auto& [m, v] : terms_) out.terms_[m] = v * c;
  return out;
}

DiffPoly DiffPoly::truncated_degree(int cap) const {
  DiffPoly out;
  for (auto& [m, c] : terms_)
    if (mono_degree(m) <= cap) out.terms_[m] = c;
  return out;
}

DiffPoly DiffPoly::jet_order_zero_part() const {
  DiffPoly out;
  for (auto& [m, c] : terms_) {
    bool flat = true;
    for (auto& [s, e] : m)
      if (s.jet_order != 0) {
        flat = false;
        break;
      }
    if (flat) out.terms_[m] = c;
  }
  return out;
}

int DiffPoly::max_weight() const {
  int w = 0;
  for (auto& [m, c] : terms_) {
    int mw = 0;
    for (auto& [s, e] : m)
      if (e > 0) mw += e * s.weight();
    w = std::max(w, mw);
  }
  return w;
}

std::string DiffPoly::str() const {
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
    if (a != 1 || m.empty()) {
      out += to_string(a);
      if (!m.empty()) out += "*";
    }
    if (!m.empty()) out += mono_str(m);
  }
  return out;
}

LogJetAlgebra::LogJetAlgebra(int dimension, int divisor_rank, int truncation)
    : d_(dimension), r_(divisor_rank), k_(truncation) {
  if (d_ < 1) throw Error("jet algebra dimension must be >= 1");
  if (r_ < 0 || r_ > d_) throw Error("divisor rank must lie in [0, dimension]");
  if (k_ < 0) throw Error("jet truncation must be >= 0");

  for (int i = 1; i <= r_; ++i) {
    JetSymbol g{JetSymbol::Base::gamma, i, 0};
    table_[g] = DiffPoly::symbol(g) *
                DiffPoly::symbol(JetSymbol{JetSymbol::Base::ell, i, 0});
    for (int k = 0; k < k_; ++k)
      table_[JetSymbol{JetSymbol::Base::ell, i, k}] =
          DiffPoly::symbol(JetSymbol{JetSymbol::Base::ell, i, k + 1});
  }
  for (int j = r_ + 1; j <= d_; ++j)
    for (int k = 0; k < k_; ++k)
      table_[JetSymbol{JetSymbol::Base::gamma, j, k}] =
          DiffPoly::symbol(JetSymbol{JetSymbol::Base::gamma, j, k + 1});

  /* Jets of divisor coordinates rewrite to gamma_i times ell-polynomials;
   * each image is the derivative of the previous one. */
  for (int i = 1; i <= r_; ++i) {
    DiffPoly img = table_.at(JetSymbol{JetSymbol::Base::gamma, i, 0});
    for (int k = 1; k <= k_; ++k) {
      gamma_rewrites_[JetSymbol{JetSymbol::Base::gamma, i, k}] = img;
      if (k < k_) img = derive(img);
    }
  }
}

JetSymbol LogJetAlgebra::gamma_symbol(int i, int jet) const {
  if (i < 1 || i > d_) throw Error("gamma index out of range");
  if (jet < 0 || jet > k_) throw TruncationExceeded("jet order out of range");
  return JetSymbol{JetSymbol::Base::gamma, i, jet};
}

JetSymbol LogJetAlgebra::ell_symbol(int i, int jet) const {
  if (i < 1 || i > r_) throw Error("ell index out of range");
  if (jet < 0 || jet > k_) throw TruncationExceeded("jet order out of range");
  return JetSymbol{JetSymbol::Base::ell, i, jet};
}

DiffPoly LogJetAlgebra::gamma_inverse(int i) const {
  if (!localized_.count(i))
    throw LocalizationMismatch("gamma_" + std::to_string(i) +
                               " is not inverted in this algebra");
  return DiffPoly::symbol(gamma_symbol(i), -1);
}

DiffPoly LogJetAlgebra::chart_divisor() const {
  DiffPoly out{Rational(1)};
  for (int i = 1; i <= r_; ++i) out *= gamma(i);
  return out;
}

void LogJetAlgebra::validate_poly(const DiffPoly& p) const {
  for (auto& [m, c] : p.terms())
    for (auto& [s, e] : m) {
      if (s.base == JetSymbol::Base::gamma) {
        if (s.index < 1 || s.index > d_) throw Error("gamma index out of range");
      } else {
        if (s.index < 1 || s.index > r_) throw Error("ell index out of range");
      }
      if (s.jet_order < 0 || s.jet_order > k_)
        throw TruncationExceeded("jet order beyond the truncation");
      if (e < 0 && !(s.base == JetSymbol::Base::gamma && s.jet_order == 0 &&
                     localized_.count(s.index)))
        throw LocalizationMismatch(
            "negative power of a non-inverted symbol: " + s.str());
    }
}

DiffPoly LogJetAlgebra::derive(const DiffPoly& p) const {
  DiffPoly nf = normal_form(p);
  DiffPoly out;
  for (auto& [m, c] : nf.terms()) {
    for (auto& [s, e] : m) {
      auto it = table_.find(s);
      if (it == table_.end())
        throw TruncationExceeded("derivative of " + s.str() +
                                 " passes the truncation");
      JetMonomial rest = m;
      if (e == 1)
        rest.erase(s);
      else
        rest[s] = e - 1;
      DiffPoly factor;
      factor.mutable_terms()[rest] = c * e;
      out += factor * it->second;
    }
  }
  return out;
}

DiffPoly LogJetAlgebra::normal_form(const DiffPoly& p) const {
  validate_poly(p);
  DiffPoly out;
  for (auto& [m, c] : p.terms()) {
    DiffPoly term{c};
    JetMonomial plain;
    for (auto& [s, e] : m) {
      auto it = gamma_rewrites_.find(s);
      if (it == gamma_rewrites_.end()) {
        plain[s] = e;
        continue;
      }
      for (int t = 0; t < e; ++t) term *= it->second;
    }
    DiffPoly shell;
    shell.mutable_terms()[plain] = 1;
    out += term * shell;
  }
  return out;
}

bool LogJetAlgebra::is_normal(const DiffPoly& p) const {
  for (auto& [m, c] : p.terms())
    for (auto& [s, e] : m)
      if (gamma_rewrites_.count(s)) return false;
  return true;
}

LogJetAlgebra LogJetAlgebra::localized(const std::set<int>& indices) const {
  LogJetAlgebra out = *this;
  for (int i : indices)
    if (i < 1 || i > d_) throw Error("localization index out of range");
  out.localized_ = indices;
  return out;
}

std::vector<JetMonomial> LogJetAlgebra::basis_monomials(int weight,
                                                        int gamma_cap) const {
  /* Weight-carrying symbols in normal form. */
  std::vector<JetSymbol> heavy;
  for (int i = 1; i <= r_; ++i)
    for (int k = 0; k <= k_; ++k)
      heavy.push_back(JetSymbol{JetSymbol::Base::ell, i, k});
  for (int j = r_ + 1; j <= d_; ++j)
    for (int k = 1; k <= k_; ++k)
      heavy.push_back(JetSymbol{JetSymbol::Base::gamma, j, k});

  std::vector<JetMonomial> weighted;
  JetMonomial current;
  auto walk = [&](auto&& self, size_t idx, int remaining) -> void {
    if (remaining == 0) {
      weighted.push_back(current);
      return;
    }
    if (idx == heavy.size()) return;
    int w = heavy[idx].weight();
    self(self, idx + 1, remaining);
    for (int e = 1; e * w <= remaining; ++e) {
      current[heavy[idx]] = e;
      self(self, idx + 1, remaining - e * w);
    }
    current.erase(heavy[idx]);
  };
  walk(walk, 0, weight);

  /* Distribute plain gamma degree on top. */
  std::vector<JetMonomial> flats;
  JetMonomial flat;
  auto dist = [&](auto&& self, int i, int remaining) -> void {
    if (i > d_) {
      flats.push_back(flat);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      if (e > 0) flat[JetSymbol{JetSymbol::Base::gamma, i, 0}] = e;
      self(self, i + 1, remaining - e);
    }
    flat.erase(JetSymbol{JetSymbol::Base::gamma, i, 0});
  };
  dist(dist, 1, gamma_cap);

  std::vector<JetMonomial> out;
  for (const JetMonomial& w : weighted)
    for (const JetMonomial& f : flats) out.push_back(mono_mul(w, f));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string LogJetAlgebra::presentation_text() const {
  std::ostringstream os;
  os << (r_ > 0 ? "log jet algebra\n" : "jet algebra\n");
  os << "dimension: " << d_ << "\n";
  os << "divisor rank: " << r_ << "\n";
  os << "truncation: " << k_ << "\n";
  os << "chart divisor: " << chart_divisor().str() << "\n";
  os << "symbols:\n";
  std::vector<JetSymbol> symbols;
  for (int i = 1; i <= r_; ++i)
    symbols.push_back(JetSymbol{JetSymbol::Base::gamma, i, 0});
  for (int j = r_ + 1; j <= d_; ++j)
    for (int k = 0; k <= k_; ++k)
      symbols.push_back(JetSymbol{JetSymbol::Base::gamma, j, k});
  for (int i = 1; i <= r_; ++i)
    for (int k = 0; k <= k_; ++k)
      symbols.push_back(JetSymbol{JetSymbol::Base::ell, i, k});
  std::sort(symbols.begin(), symbols.end());
  for (const JetSymbol& s : symbols)
    os << "  " << s.str() << " (weight " << s.weight() << ")\n";
  if (!gamma_rewrites_.empty()) {
    os << "rewrites:\n";
    for (auto& [s, img] : gamma_rewrites_)
      os << "  " << s.str() << " = " << img.str() << "\n";
  }
  os << "derivation:\n";
  for (auto& [s, img] : table_)
    os << "  d(" << s.str() << ") = " << img.str() << "\n";
  return os.str();
}

LogJetAlgebra jet_algebra(int dimension, int truncation) {
  return LogJetAlgebra(dimension, 0, truncation);
}

LogJetAlgebra log_jet_algebra(int dimension, int divisor_rank,
                              int truncation) {
  return LogJetAlgebra(dimension, divisor_rank, truncation);
}

bool ideal_stability_check(const LogJetAlgebra& a,
                           const std::vector<DiffPoly>& generators) {
  std::vector<JetMonomial> gens;
  for (const DiffPoly& g : generators) {
    if (g.terms().size() != 1)
      throw Error("ideal generators must be monomials");
    gens.push_back(g.terms().begin()->first);
  }
  for (const JetMonomial& g : gens) {
    DiffPoly gp;
    gp.mutable_terms()[g] = 1;
    DiffPoly img = a.derive(gp);
    for (auto& [m, c] : img.terms()) {
      bool covered = false;
      for (const JetMonomial& h : gens)
        if (mono_divides(h, m)) {
          covered = true;
          break;
        }
      if (!covered) return false;
    }
  }
  return true;
}

bool ideal_stability_check(const LogJetAlgebra& a) {
  std::vector<DiffPoly> gens;
  for (int i = 1; i <= a.divisor_rank(); ++i) gens.push_back(a.gamma(i));
  return ideal_stability_check(a, gens);
}

std::string AssVarPresentation::str() const {
  std::string out = "generators: ";
  for (size_t i = 0; i < generators.size(); ++i) {
    if (i) out += ", ";
    out += generators[i].first + " (weight " +
           std::to_string(generators[i].second) + ")";
  }
  out += "\nrelations: ";
  if (relations.empty()) {
    out += "(none)";
  } else {
    for (size_t i = 0; i < relations.size(); ++i) {
      if (i) out += ", ";
      out += relations[i].str();
    }
  }
  out += "\n";
  return out;
}

AssVarPresentation assvar_presentation(const LogJetAlgebra& a) {
  AssVarPresentation out;
  for (int i = 1; i <= a.dimension(); ++i)
    out.generators.push_back({"gamma_" + std::to_string(i), 0});
  for (int i = 1; i <= a.divisor_rank(); ++i)
    out.generators.push_back({"ell_" + std::to_string(i), 1});
  for (auto& [s, img] : a.derivation_table()) {
    DiffPoly proj = img.jet_order_zero_part();
    if (proj.is_zero()) continue;
    bool seen = false;
    for (const DiffPoly& r : out.relations)
      if (r == proj) {
        seen = true;
        break;
      }
    if (!seen) out.relations.push_back(proj);
  }
  return out;
}

LiftResult lift_arc(const std::vector<qseries::TruncatedSeries<Rational>>& phi,
                    const LogJetAlgebra& a) {
  int K = a.truncation();
  if (K < 1) throw Error("arc lifting needs truncation >= 1");
  if (static_cast<int>(phi.size()) != a.dimension())
    throw Error("arc has wrong number of coordinates");
  for (const auto& s : phi)
    if (s.order() != K) throw Error("arc coordinate has wrong truncation");

  LiftResult out;
  LogArc arc;
  arc.phi = phi;
  int params = 0;
  for (int i = 1; i <= a.divisor_rank(); ++i) {
    const auto& f = phi[static_cast<size_t>(i) - 1];
    if (f.is_zero()) {
      /* Factors through the component: psi_i is a free jet. */
      arc.psi.emplace_back(K);
      params += K + 1;
      continue;
    }
    if (f.coeff(0) == 0) {
      out.kind = LiftResult::Kind::no_lift;
      out.failing_index = i;
      return out;
    }
    qseries::TruncatedSeries<Rational> df(K - 1);
    for (int m = 0; m < K; ++m)
      df.set_coeff(m, f.coeff(m + 1) * Rational(m + 1));
    arc.psi.push_back(df * f.truncated(K - 1).invert());
  }
  out.kind = params > 0 ? LiftResult::Kind::family : LiftResult::Kind::unique;
  out.free_parameters = params;
  out.arc = std::move(arc);
  return out;
}

bool log_arc_consistent(const LogArc& arc, int divisor_rank) {
  if (static_cast<int>(arc.psi.size()) != divisor_rank) return false;
  for (int i = 0; i < divisor_rank; ++i) {
    const auto& f = arc.phi[static_cast<size_t>(i)];
    const auto& psi = arc.psi[static_cast<size_t>(i)];
    int range = std::min(f.order() - 1, psi.order());
    for (int m = 0; m <= range; ++m) {
      Rational lhs = f.coeff(m + 1) * Rational(m + 1);
      Rational rhs = 0;
      for (int j = 0; j <= m && j <= psi.order(); ++j)
        rhs += psi.coeff(j) * f.coeff(m - j);
      if (lhs != rhs) return false;
    }
  }
  return true;
}

namespace {

/* Derivation of the affine chart: Leibniz with the given variable images. */
DiffPoly derive_chart(const ChartData& y, const DiffPoly& p) {
  DiffPoly out;
  for (auto& [m, c] : p.terms()) {
    for (auto& [s, e] : m) {
      if (s.base != JetSymbol::Base::gamma || s.jet_order != 0 ||
          s.index < 1 || s.index > y.n_vars)
        throw Error("chart polynomial uses a foreign symbol: " + s.str());
      JetMonomial rest = m;
      if (e == 1)
        rest.erase(s);
      else
        rest[s] = e - 1;
      DiffPoly factor;
      factor.mutable_terms()[rest] = c * e;
      out += factor * y.derivation[static_cast<size_t>(s.index) - 1];
    }
  }
  return out;
}

DiffPoly divide_by_var_power(const DiffPoly& p, int var, int e) {
  DiffPoly out;
  JetSymbol u{JetSymbol::Base::gamma, var, 0};
  for (auto& [m, c] : p.terms()) {
    JetMonomial q = m;
    auto it = q.find(u);
    int have = it == q.end() ? 0 : it->second;
    if (have < e) throw Error("inexact division by a chart variable");
    if (have == e)
      q.erase(u);
    else
      q[u] = have - e;
    out.mutable_terms()[q] = c;
  }
  return out;
}

/* Truncated inverse of a polynomial with nonzero constant term. */
DiffPoly invert_unit(const DiffPoly& g, int cap) {
  Rational c0 = g.constant_term();
  DiffPoly h = DiffPoly(Rational(1)) - g.scaled(Rational(1) / c0);
  DiffPoly acc{Rational(1)};
  DiffPoly pw{Rational(1)};
  for (int k = 1; k <= cap; ++k) {
    pw = (pw * h).truncated_degree(cap);
    if (pw.is_zero()) break;
    acc += pw;
  }
  return acc.scaled(Rational(1) / c0);
}

constexpr int kExact = 1 << 20;  // stored polynomial equals the true image

/* Lowest degree a derivative can pick up from the field; derivatives of the
 * unknown tail of an exact-to-E polynomial land at degree >= E + this. */
int min_field_degree(const ChartData& y) {
  int md = kExact;
  for (const DiffPoly& img : y.derivation) {
    for (auto& [m, c] : img.terms()) md = std::min(md, mono_degree(m));
  }
  return md;
}

} // namespace

DiffPoly AlgebraMap::apply(const DiffPoly& p) const {
  DiffPoly out;
  for (auto& [m, c] : p.terms()) {
    DiffPoly term{c};
    for (auto& [s, e] : m) {
      auto it = images.find(s);
      if (it == images.end())
        throw Error("no image for symbol " + s.str());
      if (e < 0) throw Error("cannot map a localized monomial");
      for (int t = 0; t < e; ++t)
        term = (term * it->second).truncated_degree(degree_cap);
    }
    out += term;
  }
  return out;
}

AlgebraMap universal_extension(const ChartData& y,
                               const std::vector<DiffPoly>& f,
                               const LogJetAlgebra& a, int degree_cap) {
  if (static_cast<int>(y.derivation.size()) != y.n_vars)
    throw Error("chart derivation table has wrong arity");
  if (static_cast<int>(f.size()) != a.dimension())
    throw Error("coordinate map has wrong arity");
  if (degree_cap < 1) throw Error("degree cap must be >= 1");
  for (int v : y.divisor_vars) {
    if (v < 1 || v > y.n_vars) throw Error("divisor variable out of range");
    for (auto& [m, c] : y.derivation[static_cast<size_t>(v) - 1].terms()) {
      JetSymbol u{JetSymbol::Base::gamma, v, 0};
      auto it = m.find(u);
      if (it == m.end() || it->second < 1)
        throw NotTangent("chart derivation is not tangent to variable u_" +
                         std::to_string(v));
    }
  }

  AlgebraMap out;
  out.degree_cap = degree_cap;

  /* Exactness bound per image: degree up to which the stored polynomial
   * agrees with the true image (kExact when they agree on the nose). A
   * derivative sends the unknown tail above degree E to degree at least
   * E + min_field_degree, so each chain step costs 1 - that. */
  std::map<JetSymbol, int> exact;
  const int mfd = min_field_degree(y);
  auto step = [&](DiffPoly& img, int& e) {
    DiffPoly raw = derive_chart(y, img);
    DiffPoly cut = raw.truncated_degree(degree_cap);
    if (e >= kExact && cut == raw)
      e = kExact;
    else
      e = std::min(degree_cap, std::min(e, degree_cap) + mfd - 1);
    img = std::move(cut);
  };

  for (int i = 1; i <= a.dimension(); ++i) {
    const DiffPoly& fi = f[static_cast<size_t>(i) - 1];
    DiffPoly img = fi.truncated_degree(degree_cap);
    int e = img == fi ? kExact : degree_cap;
    out.images[JetSymbol{JetSymbol::Base::gamma, i, 0}] = img;
    exact[JetSymbol{JetSymbol::Base::gamma, i, 0}] = e;
    if (i > a.divisor_rank()) {
      for (int k = 1; k <= a.truncation(); ++k) {
        step(img, e);
        out.images[JetSymbol{JetSymbol::Base::gamma, i, k}] = img;
        exact[JetSymbol{JetSymbol::Base::gamma, i, k}] = e;
      }
      continue;
    }

    /* Divisor coordinate: factor f_i = monomial * unit, build the image of
     * ell_i as the logarithmic derivative. */
    if (fi.is_zero())
      throw NotDivisorial("divisor coordinate gamma_" + std::to_string(i) +
                          " pulls back to zero");
    std::map<int, int> mexp;
    for (int v : y.divisor_vars) {
      JetSymbol u{JetSymbol::Base::gamma, v, 0};
      int e = -1;
      for (auto& [m, c] : fi.terms()) {
        auto it = m.find(u);
        int have = it == m.end() ? 0 : it->second;
        e = e < 0 ? have : std::min(e, have);
      }
      if (e > 0) mexp[v] = e;
    }
    DiffPoly g = fi;
    for (auto& [v, e] : mexp) g = divide_by_var_power(g, v, e);
    if (g.constant_term() == 0)
      throw NotDivisorial("pullback of gamma_" + std::to_string(i) +
                          " is not unit times a divisor monomial");

    DiffPoly limg;
    for (auto& [v, ev] : mexp)
      limg += divide_by_var_power(
                  derive_chart(y, DiffPoly::symbol(
                                      JetSymbol{JetSymbol::Base::gamma, v, 0})),
                  v, 1)
                  .scaled(ev);
    bool unit_const = g == DiffPoly(g.constant_term());
    if (!unit_const)
      limg += (derive_chart(y, g) * invert_unit(g, degree_cap))
                  .truncated_degree(degree_cap);
    int le = unit_const ? kExact : degree_cap;
    out.images[JetSymbol{JetSymbol::Base::ell, i, 0}] = limg;
    exact[JetSymbol{JetSymbol::Base::ell, i, 0}] = le;
    for (int k = 1; k <= a.truncation(); ++k) {
      step(limg, le);
      out.images[JetSymbol{JetSymbol::Base::ell, i, k}] = limg;
      exact[JetSymbol{JetSymbol::Base::ell, i, k}] = le;
    }
  }

  /* Derivation compatibility certifies both existence and uniqueness: every
   * symbol's image is forced by f and the requirement F(d x) = d_Y F(x).
   * Each side is compared up to the degree where both are exact. */
  int verified = degree_cap;
  for (auto& [s, rhs] : a.derivation_table()) {
    int cmp = degree_cap;
    for (auto& [m, c] : rhs.terms())
      for (auto& [sym, ex] : m) cmp = std::min(cmp, exact.at(sym));
    int es = exact.at(s);
    if (es < kExact) cmp = std::min(cmp, es + mfd - 1);
    DiffPoly lhs = out.apply(rhs).truncated_degree(cmp);
    DiffPoly dr = derive_chart(y, out.images.at(s)).truncated_degree(cmp);
    if (lhs != dr)
      throw Error("derivation compatibility failed at symbol " + s.str());
    verified = std::min(verified, cmp);
  }
  out.verified_degree = verified;
  return out;
}

}  // namespace logcdr::logjets
