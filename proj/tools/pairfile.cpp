#include "pairfile.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "logcdr/errors.hpp"

namespace logcdr::cli {

namespace {

std::string_view trim(std::string_view s, int& col) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
    ++col;
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

/* Comma-split with positions; an all-blank value yields no items. */
std::vector<IniEntry> split_list(const IniEntry& e) {
  std::vector<IniEntry> out;
  size_t start = 0;
  while (start <= e.value.size()) {
    size_t comma = e.value.find(',', start);
    size_t end = comma == std::string::npos ? e.value.size() : comma;
    int col = e.col + static_cast<int>(start);
    std::string_view item =
        trim(std::string_view(e.value).substr(start, end - start), col);
    if (!item.empty()) out.push_back({std::string(item), e.line, col});
    else if (comma != std::string::npos || !out.empty())
      throw ConfigError(e.line, col, "empty list item");
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

/* Names and degrees of the generators, known before the ring exists. */
struct GenTable {
  std::vector<std::string> names;
  std::vector<int> degrees;

  int index(std::string_view name) const {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<int>(i);
    return -1;
  }
};

/* Tiny lexer over one value string; columns are absolute in the line. */
struct Cursor {
  std::string_view src;
  int line;
  int col0;
  size_t pos = 0;

  void skip_space() {
    while (pos < src.size() &&
           std::isspace(static_cast<unsigned char>(src[pos])))
      ++pos;
  }
  bool done() {
    skip_space();
    return pos >= src.size();
  }
  int col() const { return col0 + static_cast<int>(pos); }
  char peek() {
    skip_space();
    return pos < src.size() ? src[pos] : '\0';
  }
  bool eat(char ch) {
    if (peek() != ch) return false;
    ++pos;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ConfigError(line, col(), msg);
  }

  long integer() {
    skip_space();
    size_t start = pos;
    if (pos < src.size() && src[pos] == '-') ++pos;
    size_t digits = pos;
    while (pos < src.size() &&
           std::isdigit(static_cast<unsigned char>(src[pos])))
      ++pos;
    if (pos == digits) {
      pos = start;
      fail("expected an integer");
    }
    try {
      return std::stol(std::string(src.substr(start, pos - start)));
    } catch (const std::exception&) {
      pos = start;
      fail("integer out of range");
    }
  }

  Rational rational() {
    Rational r(integer());
    if (eat('/')) {
      long den = integer();
      if (den == 0) fail("division by zero");
      r /= Rational(den);
      r.canonicalize();
    }
    return r;
  }

  std::string name() {
    skip_space();
    size_t start = pos;
    if (pos < src.size() &&
        (std::isalpha(static_cast<unsigned char>(src[pos])) ||
         src[pos] == '_'))
      ++pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) ||
            src[pos] == '_'))
      ++pos;
    if (pos == start) fail("expected a name");
    return std::string(src.substr(start, pos - start));
  }
};

/* mono := name ['^' int] { '*' name ['^' int] } */
chow::Monomial parse_monomial(Cursor& cur, const GenTable& gens) {
  std::vector<int> exps(gens.names.size(), 0);
  for (;;) {
    int col = cur.col();
    std::string n = cur.name();
    int i = gens.index(n);
    if (i < 0) throw ConfigError(cur.line, col, "unknown generator '" + n + "'");
    int e = 1;
    if (cur.eat('^')) {
      long raw = cur.integer();
      if (raw <= 0) throw ConfigError(cur.line, col, "exponent must be >= 1");
      e = static_cast<int>(raw);
    }
    exps[static_cast<size_t>(i)] += e;
    if (!cur.eat('*')) break;
  }
  int deg = 0;
  for (size_t i = 0; i < exps.size(); ++i) deg += gens.degrees[i] * exps[i];
  return chow::Monomial{deg, std::move(exps)};
}

/* combo := ['-'] term { ('+'|'-') term }
 * term  := rat ['*' mono] | mono                                       */
std::map<chow::Monomial, Rational> parse_combo(const GenTable& gens,
                                               const IniEntry& e) {
  Cursor cur{e.value, e.line, e.col};
  std::map<chow::Monomial, Rational> acc;
  bool negate = cur.eat('-');
  for (;;) {
    Rational coeff(1);
    chow::Monomial m{0, std::vector<int>(gens.names.size(), 0)};
    char ch = cur.peek();
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      coeff = cur.rational();
      if (cur.eat('*')) m = parse_monomial(cur, gens);
    } else {
      m = parse_monomial(cur, gens);
    }
    if (negate) coeff = -coeff;
    auto [it, fresh] = acc.try_emplace(m, coeff);
    if (!fresh) it->second += coeff;
    if (it->second == 0) acc.erase(it);
    if (cur.done()) break;
    if (cur.eat('+'))
      negate = false;
    else if (cur.eat('-'))
      negate = true;
    else
      cur.fail("expected '+' or '-'");
  }
  return acc;
}

const IniSection& need_section(const IniFile& f, const std::string& name) {
  auto it = f.sections.find(name);
  if (it == f.sections.end())
    throw ConfigError(1, 1, "missing [" + name + "] section");
  return it->second;
}

const IniEntry& need_key(const IniSection& s, const std::string& section,
                         const std::string& key) {
  auto it = s.entries.find(key);
  if (it == s.entries.end())
    throw ConfigError(s.line, 1,
                      "[" + section + "] needs the key '" + key + "'");
  return it->second;
}

const IniEntry* find_key(const IniSection& s, const std::string& key) {
  auto it = s.entries.find(key);
  return it == s.entries.end() ? nullptr : &it->second;
}

int parse_int(const IniEntry& e) {
  Cursor cur{e.value, e.line, e.col};
  long v = cur.integer();
  if (!cur.done()) cur.fail("trailing text");
  return static_cast<int>(v);
}

genus::RElt element_from_combo(const chow::RingSpecPtr& ring,
                               const std::map<chow::Monomial, Rational>& c) {
  genus::RElt out(ring);
  for (const auto& [m, v] : c)
    out = out + genus::RElt::from_monomial(ring, m, v);
  return out;
}

std::vector<genus::RElt> element_list(const chow::RingSpecPtr& ring,
                                      const GenTable& gens,
                                      const IniEntry& value) {
  std::vector<genus::RElt> out;
  for (const IniEntry& item : split_list(value))
    out.push_back(element_from_combo(ring, parse_combo(gens, item)));
  return out;
}

GenTable generator_table(const IniSection& ring) {
  GenTable gens;
  for (const IniEntry& item : split_list(need_key(ring, "ring", "generators"))) {
    Cursor cur{item.value, item.line, item.col};
    gens.names.push_back(cur.name());
    if (!cur.done()) cur.fail("generator names are single identifiers");
  }
  for (const IniEntry& item : split_list(need_key(ring, "ring", "degrees")))
    gens.degrees.push_back(parse_int(item));
  const IniEntry& gkey = need_key(ring, "ring", "generators");
  if (gens.names.empty())
    throw ConfigError(gkey.line, gkey.col, "at least one generator");
  if (gens.degrees.size() != gens.names.size())
    throw ConfigError(gkey.line, gkey.col,
                      "generators and degrees differ in length");
  for (size_t i = 0; i < gens.names.size(); ++i)
    for (size_t j = i + 1; j < gens.names.size(); ++j)
      if (gens.names[i] == gens.names[j])
        throw ConfigError(gkey.line, gkey.col,
                          "duplicate generator '" + gens.names[i] + "'");
  for (int d : gens.degrees)
    if (d < 1)
      throw ConfigError(gkey.line, gkey.col, "degrees must be >= 1");
  return gens;
}

/* Splits "lhs -> rhs" at the arrow, preserving value columns. */
std::pair<IniEntry, IniEntry> split_arrow(const IniEntry& e) {
  size_t arrow = e.value.find("->");
  if (arrow == std::string::npos)
    throw ConfigError(e.line, e.col, "expected 'lhs -> rhs'");
  IniEntry lhs{e.value.substr(0, arrow), e.line, e.col};
  IniEntry rhs{e.value.substr(arrow + 2), e.line,
               e.col + static_cast<int>(arrow) + 2};
  return {lhs, rhs};
}

chow::Monomial monomial_of(const GenTable& gens, const IniEntry& e) {
  Cursor cur{e.value, e.line, e.col};
  chow::Monomial m = parse_monomial(cur, gens);
  if (!cur.done()) cur.fail("trailing text after monomial");
  return m;
}

}  // namespace

IniFile parse_ini(std::string_view text) {
  IniFile out;
  IniSection* current = nullptr;
  std::string current_name;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    if (size_t hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    int col = 1;
    std::string_view body = trim(raw, col);
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']')
        throw ConfigError(line_no, col, "unterminated section header");
      std::string name(body.substr(1, body.size() - 2));
      auto [it, fresh] = out.sections.try_emplace(name);
      if (!fresh)
        throw ConfigError(line_no, col, "duplicate section [" + name + "]");
      it->second.line = line_no;
      current = &it->second;
      current_name = name;
      continue;
    }
    size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line_no, col, "expected 'key = value'");
    int kcol = col;
    std::string_view key = trim(body.substr(0, eq), kcol);
    if (key.empty()) throw ConfigError(line_no, col, "empty key");
    if (!current)
      throw ConfigError(line_no, col, "key outside any [section]");
    int vcol = col + static_cast<int>(eq) + 1;
    std::string_view value = trim(body.substr(eq + 1), vcol);
    auto [it, fresh] = current->entries.try_emplace(
        std::string(key), IniEntry{std::string(value), line_no, vcol});
    if (!fresh)
      throw ConfigError(line_no, kcol, "duplicate key '" + std::string(key) +
                                           "' in [" + current_name + "]");
  }
  return out;
}

IniFile parse_ini_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(1, 1, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ini(buf.str());
}

chow::RingSpecPtr ring_from_ini(const IniFile& f) {
  const IniSection& ring = need_section(f, "ring");
  GenTable gens = generator_table(ring);

  std::vector<chow::RewriteRule> rules;
  if (const IniEntry* rv = find_key(ring, "rules"))
    for (const IniEntry& item : split_list(*rv)) {
      auto [lhs, rhs] = split_arrow(item);
      chow::RewriteRule rule;
      rule.lhs = monomial_of(gens, lhs);
      int rcol = rhs.col;
      std::string_view rtext = trim(rhs.value, rcol);
      if (rtext != "0")
        rule.rhs = parse_combo(gens, {std::string(rtext), rhs.line, rcol});
      rules.push_back(std::move(rule));
    }

  std::map<chow::Monomial, Rational> integ;
  const IniEntry& iv = need_key(ring, "ring", "integrals");
  int dimension = 0;
  for (const IniEntry& item : split_list(iv)) {
    auto [lhs, rhs] = split_arrow(item);
    chow::Monomial m = monomial_of(gens, lhs);
    Cursor cur{rhs.value, rhs.line, rhs.col};
    Rational v = cur.rational();
    if (!cur.done()) cur.fail("trailing text");
    if (!integ.emplace(m, v).second)
      throw ConfigError(lhs.line, lhs.col, "duplicate integration monomial");
    dimension = std::max(dimension, m.deg);
  }
  if (integ.empty())
    throw ConfigError(iv.line, iv.col, "at least one integration value");

  std::vector<chow::Generator> gv;
  for (size_t i = 0; i < gens.names.size(); ++i)
    gv.push_back({gens.names[i], gens.degrees[i]});
  try {
    return std::make_shared<const chow::RingSpec>(
        dimension, std::move(gv), std::move(rules), std::move(integ));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& err) {
    throw ConfigError(ring.line, 1, err.what());
  }
}

genus::PairData pair_from_ini(const IniFile& f, chow::RingSpecPtr ring,
                              std::string name) {
  const IniSection& sec = need_section(f, "pair");
  GenTable gens;
  for (const chow::Generator& g : ring->generators()) {
    gens.names.push_back(g.name);
    gens.degrees.push_back(g.degree);
  }

  genus::PairData p;
  p.name = std::move(name);
  p.ring = ring;
  p.dimension = parse_int(need_key(sec, "pair", "dimension"));
  p.cotangent_roots =
      element_list(ring, gens, need_key(sec, "pair", "cotangent_roots"));
  if (const IniEntry* neg = find_key(sec, "cotangent_neg_roots"))
    p.cotangent_neg_roots = element_list(ring, gens, *neg);
  if (const IniEntry* dv = find_key(sec, "divisor_classes"))
    p.divisor_classes = element_list(ring, gens, *dv);
  if (p.dimension != ring->dimension())
    throw ConfigError(sec.line, 1,
                      "pair dimension disagrees with the ring's top degree");
  try {
    p.validate();
  } catch (const Error& err) {
    throw ConfigError(sec.line, 1, err.what());
  }
  return p;
}

genus::PairData load_pair(const std::string& pair_path,
                          const std::string& ring_path) {
  IniFile f = parse_ini_file(pair_path);
  chow::RingSpecPtr ring;
  if (!ring_path.empty())
    ring = ring_from_ini(parse_ini_file(ring_path));
  else
    ring = ring_from_ini(f);

  std::string name = pair_path;
  if (size_t slash = name.find_last_of('/'); slash != std::string::npos)
    name.erase(0, slash + 1);
  if (size_t dot = name.find_last_of('.'); dot != std::string::npos)
    name.erase(dot);
  return pair_from_ini(f, std::move(ring), std::move(name));
}

}  // namespace logcdr::cli
