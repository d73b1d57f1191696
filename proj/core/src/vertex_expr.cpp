#include "logcdr/vertex_expr.hpp"

#include <cctype>
#include <optional>
#include <sstream>
#include <utility>

#include "logcdr/errors.hpp"

namespace logcdr::vertex {

namespace {

enum class Tok {
  number,
  ident,
  lparen,
  rparen,
  comma,
  plus,
  minus,
  star,
  slash,
  end
};

struct Token {
  Tok kind = Tok::end;
  std::string text;
  int col = 0;
};

class Lexer {
 public:
  Lexer(std::string_view src, int line) : src_(src), line_(line) {}

  const Token& peek() {
    if (!ahead_) ahead_ = scan();
    return *ahead_;
  }

  Token next() {
    Token t = peek();
    ahead_.reset();
    return t;
  }

  int line() const { return line_; }

 private:
  Token scan() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    int col = static_cast<int>(pos_) + 1;
    if (pos_ >= src_.size()) return {Tok::end, "", col};
    char ch = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
      return {Tok::number, std::string(src_.substr(start, pos_ - start)), col};
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_'))
        ++pos_;
      return {Tok::ident, std::string(src_.substr(start, pos_ - start)), col};
    }
    ++pos_;
    switch (ch) {
      case '(':
        return {Tok::lparen, "(", col};
      case ')':
        return {Tok::rparen, ")", col};
      case ',':
        return {Tok::comma, ",", col};
      case '+':
        return {Tok::plus, "+", col};
      case '-':
        return {Tok::minus, "-", col};
      case '*':
        return {Tok::star, "*", col};
      case '/':
        return {Tok::slash, "/", col};
    }
    throw ConfigError(line_, col,
                      std::string("unexpected character '") + ch + "'");
  }

  std::string_view src_;
  int line_;
  size_t pos_ = 0;
  std::optional<Token> ahead_;
};

/* Intermediate value: a pure scalar stays exact until it has to become a
 * multiple of the vacuum. */
struct Value {
  bool scalar = false;
  Rational s;
  VState v;
};

class Parser {
 public:
  Parser(Engine& e, std::string_view src, int line)
      : e_(e), lex_(src, line) {}

  VState run() {
    Value v = expr();
    expect(Tok::end, "end of expression");
    return to_state(v);
  }

 private:
  [[noreturn]] void fail(int col, const std::string& msg) {
    throw ConfigError(lex_.line(), col, msg);
  }

  Token expect(Tok kind, const std::string& what) {
    Token t = lex_.next();
    if (t.kind != kind)
      fail(t.col, "expected " + what +
                      (t.kind == Tok::end ? "" : ", got '" + t.text + "'"));
    return t;
  }

  VState to_state(const Value& v) {
    if (!v.scalar) return v.v;
    VState out = e_.vac();
    return out.scaled(v.s);
  }

  long integer() {
    bool neg = false;
    if (lex_.peek().kind == Tok::minus) {
      lex_.next();
      neg = true;
    }
    Token t = expect(Tok::number, "an integer");
    long n = 0;
    try {
      n = std::stol(t.text);
    } catch (const std::exception&) {
      fail(t.col, "integer out of range");
    }
    return neg ? -n : n;
  }

  /* gamma | beta_2 | c | b_3, index defaulting to 1. */
  std::pair<Kind, int> field(const Token& t) {
    std::string name = t.text;
    int index = 1;
    if (size_t us = name.find('_'); us != std::string::npos) {
      std::string suffix = name.substr(us + 1);
      name = name.substr(0, us);
      if (suffix.empty() ||
          suffix.find_first_not_of("0123456789") != std::string::npos)
        fail(t.col, "malformed field index in '" + t.text + "'");
      try {
        index = std::stoi(suffix);
      } catch (const std::exception&) {
        fail(t.col, "field index out of range in '" + t.text + "'");
      }
    }
    Kind k;
    if (name == "gamma")
      k = Kind::gamma;
    else if (name == "beta")
      k = Kind::beta;
    else if (name == "c")
      k = Kind::c;
    else if (name == "b")
      k = Kind::b;
    else
      fail(t.col, "unknown name '" + t.text + "'");
    if (index < 1 || index > e_.rank())
      fail(t.col, "field index " + std::to_string(index) +
                      " outside rank " + std::to_string(e_.rank()));
    return {k, index};
  }

  VState named(const Token& t) {
    if (t.text == "vac") return e_.vac();
    if (t.text == "zero") return e_.zero();
    if (t.text == "L" || t.text == "J" || t.text == "Q" || t.text == "G") {
      if (!top_) top_ = topological_generators(e_);
      if (t.text == "L") return top_->L;
      if (t.text == "J") return top_->J;
      if (t.text == "Q") return top_->Q;
      return top_->G;
    }
    auto [k, i] = field(t);
    switch (k) {
      case Kind::gamma:
        return e_.gamma(i);
      case Kind::beta:
        return e_.beta(i);
      case Kind::c:
        return e_.c(i);
      default:
        return e_.b(i);
    }
  }

  Value call(const Token& name) {
    expect(Tok::lparen, "'('");
    if (name.text == "pow") {
      Token ft = expect(Tok::ident, "a field name");
      auto [k, i] = field(ft);
      if (k != Kind::gamma) fail(ft.col, "pow applies to gamma fields only");
      expect(Tok::comma, "','");
      long ex = integer();
      if (ex < 0 && i > e_.localization())
        fail(ft.col, "negative power of gamma_" + std::to_string(i) +
                         " needs localization >= " + std::to_string(i));
      expect(Tok::rparen, "')'");
      return {false, Rational(0), e_.gamma_power(i, static_cast<int>(ex))};
    }
    if (name.text == "nop" || name.text == "prod") {
      VState a = to_state(expr());
      expect(Tok::comma, "','");
      VState b = to_state(expr());
      int n = -1;
      if (name.text == "prod") {
        expect(Tok::comma, "','");
        n = static_cast<int>(integer());
      }
      expect(Tok::rparen, "')'");
      return {false, Rational(0), e_.nth_product(a, b, n)};
    }
    if (name.text == "D") {
      VState a = to_state(expr());
      long k = 1;
      if (lex_.peek().kind == Tok::comma) {
        lex_.next();
        k = integer();
        if (k < 0) fail(name.col, "derivative order must be nonnegative");
      }
      expect(Tok::rparen, "')'");
      return {false, Rational(0), e_.derivative(a, static_cast<int>(k))};
    }
    fail(name.col, "unknown function '" + name.text + "'");
  }

  Value primary() {
    Token t = lex_.next();
    if (t.kind == Tok::number) {
      Rational s(t.text);
      if (lex_.peek().kind == Tok::slash) {
        lex_.next();
        Token d = expect(Tok::number, "a denominator");
        if (d.text.find_first_not_of('0') == std::string::npos)
          fail(d.col, "division by zero");
        s /= Rational(d.text);
      }
      s.canonicalize();
      return {true, s, VState()};
    }
    if (t.kind == Tok::lparen) {
      Value v = expr();
      expect(Tok::rparen, "')'");
      return v;
    }
    if (t.kind == Tok::ident) {
      if (lex_.peek().kind == Tok::lparen &&
          (t.text == "pow" || t.text == "nop" || t.text == "prod" ||
           t.text == "D"))
        return call(t);
      return {false, Rational(0), named(t)};
    }
    fail(t.col, t.kind == Tok::end ? "unexpected end of expression"
                                   : "unexpected '" + t.text + "'");
  }

  Value factor() {
    if (lex_.peek().kind == Tok::minus) {
      lex_.next();
      Value v = factor();
      if (v.scalar)
        v.s = -v.s;
      else
        v.v = -v.v;
      return v;
    }
    return primary();
  }

  Value term() {
    Value acc = factor();
    while (lex_.peek().kind == Tok::star || lex_.peek().kind == Tok::slash) {
      Token op = lex_.next();
      if (op.kind == Tok::slash)
        fail(op.col, "'/' only joins two integer literals");
      Value rhs = factor();
      if (acc.scalar && rhs.scalar) {
        acc.s *= rhs.s;
      } else if (acc.scalar) {
        rhs.v = rhs.v.scaled(acc.s);
        acc = std::move(rhs);
      } else if (rhs.scalar) {
        acc.v = acc.v.scaled(rhs.s);
      } else {
        fail(op.col, "'*' needs a scalar operand; use nop(a, b) for states");
      }
    }
    return acc;
  }

  Value expr() {
    Value acc = term();
    while (lex_.peek().kind == Tok::plus || lex_.peek().kind == Tok::minus) {
      bool minus = lex_.next().kind == Tok::minus;
      Value rhs = term();
      if (acc.scalar && rhs.scalar) {
        acc.s += minus ? -rhs.s : rhs.s;
      } else {
        VState sum = to_state(acc) + (minus ? -to_state(rhs) : to_state(rhs));
        acc = {false, Rational(0), std::move(sum)};
      }
    }
    return acc;
  }

  Engine& e_;
  Lexer lex_;
  std::optional<Topological> top_;
};

std::string strip_comment(const std::string& raw) {
  size_t hash = raw.find('#');
  return hash == std::string::npos ? raw : raw.substr(0, hash);
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r") == std::string::npos;
}

/* "@engine rank=D localization=R": both keys required, order fixed. */
void parse_directive(const std::string& text, int line_no, SuiteReport& out) {
  std::istringstream in(text);
  std::string head, kv;
  in >> head;
  if (head != "@engine")
    throw ConfigError(line_no, 1, "unknown directive '" + head + "'");
  auto take = [&](const std::string& key) {
    if (!(in >> kv) || kv.rfind(key + "=", 0) != 0)
      throw ConfigError(line_no, 1, "@engine needs " + key + "=<int>");
    try {
      return std::stoi(kv.substr(key.size() + 1));
    } catch (const std::exception&) {
      throw ConfigError(line_no, 1, "bad value in '" + kv + "'");
    }
  };
  out.rank = take("rank");
  out.localization = take("localization");
  if (out.rank < 1)
    throw ConfigError(line_no, 1, "rank must be positive");
  if (out.localization < 0 || out.localization > out.rank)
    throw ConfigError(line_no, 1, "localization must lie in [0, rank]");
  if (in >> kv)
    throw ConfigError(line_no, 1, "trailing text '" + kv + "'");
}

}  // namespace

VState parse_state(Engine& e, std::string_view src, int line) {
  return Parser(e, src, line).run();
}

bool SuiteReport::all_equal() const { return failures() == 0; }

size_t SuiteReport::failures() const {
  size_t n = 0;
  for (const SuiteCheck& c : checks)
    if (!c.result.equal) ++n;
  return n;
}

SuiteReport run_suite(std::istream& in) {
  SuiteReport out;
  std::optional<Engine> engine;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string text = strip_comment(raw);
    if (blank(text)) continue;
    size_t first = text.find_first_not_of(" \t");
    if (text[first] == '@') {
      if (engine)
        throw ConfigError(line_no, static_cast<int>(first) + 1,
                          "duplicate @engine directive");
      parse_directive(text.substr(first), line_no, out);
      engine.emplace(out.rank, out.localization);
      continue;
    }
    if (!engine)
      throw ConfigError(line_no, static_cast<int>(first) + 1,
                        "identities must follow an @engine directive");
    size_t eq = text.find("==");
    if (eq == std::string::npos)
      throw ConfigError(line_no, static_cast<int>(first) + 1,
                        "an identity line needs exactly one '=='");
    if (text.find("==", eq + 2) != std::string::npos)
      throw ConfigError(line_no, static_cast<int>(eq) + 3,
                        "an identity line needs exactly one '=='");
    SuiteCheck check;
    check.line = line_no;
    check.lhs_src = text.substr(0, eq);
    check.rhs_src = text.substr(eq + 2);
    /* Column offsets inside the right half shift by the '==' prefix; the
     * right side is reparsed from its own origin, so diagnostics there
     * point into rhs_src. */
    VState lhs = parse_state(*engine, check.lhs_src, line_no);
    VState rhs = parse_state(*engine, check.rhs_src, line_no);
    check.result = verify_identity(lhs, rhs);
    out.checks.push_back(std::move(check));
  }
  return out;
}

SuiteReport run_suite(std::string_view text) {
  std::istringstream in{std::string(text)};
  return run_suite(in);
}

}  // namespace logcdr::vertex
