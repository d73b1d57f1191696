#include "logcdr/textio.hpp"

#include <sstream>
#include <vector>

#include "logcdr/errors.hpp"

namespace logcdr::qseries {

std::string serialize_laurent(const LaurentY& v) { return v.str(); }

std::string serialize_series(const TruncatedSeries<LaurentY>& s) {
  std::ostringstream os;
  for (int m = 0; m <= s.order(); ++m)
    os << "q^" << m << ": " << s.coeff(m).str() << "\n";
  return os.str();
}

namespace {

struct Cursor {
  std::string_view text;
  size_t pos = 0;
  int line;
  int col;
  Cursor(std::string_view t, int line_no, int col0)
      : text(t), line(line_no), col(col0) {}
  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void advance() {
    ++pos;
    ++col;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(line, col, msg);
  }
};

void skip_spaces(Cursor& c) {
  while (!c.done() && c.peek() == ' ') c.advance();
}

std::string_view take_token(Cursor& c) {
  size_t start = c.pos;
  while (!c.done() && c.peek() != ' ') c.advance();
  return c.text.substr(start, c.pos - start);
}

int parse_int_token(Cursor& c, std::string_view tok, const std::string& what) {
  try {
    size_t used = 0;
    int v = std::stoi(std::string(tok), &used);
    if (used != tok.size()) c.fail("malformed " + what);
    return v;
  } catch (const std::exception&) {
    c.fail("malformed " + what);
  }
}

}  // namespace

LaurentY parse_laurent_fragment(std::string_view text, int line_no, int col0) {
  Cursor c(text, line_no, col0);
  LaurentY out;
  skip_spaces(c);
  if (c.done()) c.fail("empty coefficient");
  while (!c.done()) {
    int tok_col = c.col;
    std::string_view tok = take_token(c);
    size_t star = tok.find('*');
    if (star == std::string_view::npos) {
      auto r = parse_rational(tok);
      if (!r) throw ConfigError(line_no, tok_col, "malformed rational");
      out += LaurentY(*r);
    } else {
      auto r = parse_rational(tok.substr(0, star));
      if (!r) throw ConfigError(line_no, tok_col, "malformed rational");
      std::string_view mono = tok.substr(star + 1);
      if (mono.size() < 3 || mono[0] != 'y' || mono[1] != '^')
        throw ConfigError(line_no, tok_col + static_cast<int>(star) + 1,
                          "expected y^<exponent>");
      Cursor ec(mono.substr(2), line_no,
                tok_col + static_cast<int>(star) + 3);
      int e = parse_int_token(ec, mono.substr(2), "y exponent");
      out += LaurentY::monomial(*r, e);
    }
    skip_spaces(c);
  }
  return out;
}

TruncatedSeries<LaurentY> parse_series(std::string_view text) {
  std::vector<std::pair<int, LaurentY>> rows;
  int line_no = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? std::string_view::npos
                                           : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.size() < 2 || line[0] != 'q' || line[1] != '^')
      throw ConfigError(line_no, 1, "expected q^<order>:");
    size_t colon = line.find(':');
    if (colon == std::string_view::npos)
      throw ConfigError(line_no, static_cast<int>(line.size()) + 1,
                        "missing ':'");
    Cursor oc(line.substr(2, colon - 2), line_no, 3);
    int m = parse_int_token(oc, line.substr(2, colon - 2), "q order");
    if (m != static_cast<int>(rows.size()))
      throw ConfigError(line_no, 3, "q orders must be contiguous from 0");
    LaurentY v = parse_laurent_fragment(line.substr(colon + 1), line_no,
                                        static_cast<int>(colon) + 2);
    rows.emplace_back(m, v);
  }
  if (rows.empty()) throw ConfigError(1, 1, "empty series text");
  TruncatedSeries<LaurentY> out(static_cast<int>(rows.size()) - 1);
  for (const auto& [m, v] : rows) out.set_coeff(m, v);
  return out;
}

}  // namespace logcdr::qseries
