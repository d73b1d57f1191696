#include "commands.hpp"

#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "logcdr/genus.hpp"
#include "logcdr/logjets.hpp"
#include "logcdr/textio.hpp"
#include "logcdr/theta.hpp"
#include "logcdr/vertex_expr.hpp"
#include "pairfile.hpp"

namespace logcdr::cli {

namespace {

using nlohmann::json;

std::string base_name(const std::string& path) {
  size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

std::string trimmed(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

json series_json(const qseries::TruncatedSeries<qseries::LaurentY>& s) {
  json arr = json::array();
  for (int m = 0; m <= s.order(); ++m)
    arr.push_back(qseries::serialize_laurent(s.coeff(m)));
  return arr;
}

Outcome finish_json(const json& j, int code) {
  return {code, j.dump(2) + "\n"};
}

Outcome cmd_genus(const Options& o) {
  genus::PairData p = load_pair(o.pair_path, o.ring_path);
  auto s = genus::elliptic_genus(p, o.order);
  if (o.json) {
    json j;
    j["command"] = "genus";
    j["pair"] = p.name;
    j["order"] = o.order;
    j["series"] = series_json(s);
    return finish_json(j, 0);
  }
  return {0, qseries::serialize_series(s)};
}

Outcome cmd_chiy(const Options& o) {
  genus::PairData p = load_pair(o.pair_path, o.ring_path);
  qseries::LaurentY chi = genus::chi_y(p);
  Rational euler0 = genus::euler_spec(p, o.order).coeff(0);
  if (o.json) {
    json j;
    j["command"] = "chiy";
    j["pair"] = p.name;
    j["chi_y"] = qseries::serialize_laurent(chi);
    j["euler_q0"] = to_string(euler0);
    return finish_json(j, 0);
  }
  std::ostringstream os;
  os << "pair: " << p.name << "\n";
  os << "chi_y: " << qseries::serialize_laurent(chi) << "\n";
  os << "euler_q0: " << to_string(euler0) << "\n";
  return {0, os.str()};
}

Outcome cmd_theta(const Options& o) {
  auto s = qseries::g_series(o.order);
  if (o.json) {
    json j;
    j["command"] = "theta";
    j["order"] = o.order;
    j["series"] = series_json(s);
    return finish_json(j, 0);
  }
  return {0, qseries::serialize_series(s)};
}

Outcome cmd_check_elliptic(const Options& o) {
  genus::PairData p = load_pair(o.pair_path, o.ring_path);
  auto s = genus::elliptic_genus(p, o.order);
  genus::EllipticityReport rep = genus::check_ellipticity(s, p.dimension);
  if (o.json) {
    json j;
    j["command"] = "check-elliptic";
    j["pair"] = p.name;
    j["dimension"] = p.dimension;
    j["order"] = o.order;
    j["verified_order"] = rep.verified_order;
    j["passed"] = rep.passed;
    if (rep.first_discrepancy) {
      json d;
      d["order"] = rep.first_discrepancy->order;
      d["y_exp"] = rep.first_discrepancy->y_exp;
      d["lhs"] = to_string(rep.first_discrepancy->lhs);
      d["rhs"] = to_string(rep.first_discrepancy->rhs);
      j["first_discrepancy"] = d;
    }
    return finish_json(j, rep.passed ? 0 : 2);
  }
  std::ostringstream os;
  os << "pair: " << p.name << "\n";
  os << "dimension: " << p.dimension << "\n";
  os << "order: " << o.order << "\n";
  os << "verified_order: " << rep.verified_order << "\n";
  if (rep.first_discrepancy) {
    const auto& d = *rep.first_discrepancy;
    os << "first_discrepancy: q^" << d.order << " y^" << d.y_exp
       << " lhs=" << to_string(d.lhs) << " rhs=" << to_string(d.rhs) << "\n";
  }
  os << "result: " << (rep.passed ? "PASS" : "FAIL") << "\n";
  return {rep.passed ? 0 : 2, os.str()};
}

Outcome cmd_vertex_verify(const Options& o) {
  std::ifstream in(o.suite_path);
  if (!in) throw ConfigError(1, 1, "cannot open '" + o.suite_path + "'");
  vertex::SuiteReport rep = vertex::run_suite(in);
  bool passed = rep.all_equal();
  if (o.json) {
    json j;
    j["command"] = "vertex-verify";
    j["suite"] = base_name(o.suite_path);
    j["rank"] = rep.rank;
    j["localization"] = rep.localization;
    json checks = json::array();
    for (const vertex::SuiteCheck& c : rep.checks) {
      json e;
      e["line"] = c.line;
      e["lhs"] = trimmed(c.lhs_src);
      e["rhs"] = trimmed(c.rhs_src);
      e["equal"] = c.result.equal;
      if (!c.result.equal) e["difference"] = c.result.difference.str();
      checks.push_back(e);
    }
    j["checks"] = checks;
    j["failed"] = rep.failures();
    j["passed"] = passed;
    return finish_json(j, passed ? 0 : 2);
  }
  std::ostringstream os;
  os << "suite: " << base_name(o.suite_path) << "\n";
  os << "engine: rank=" << rep.rank << " localization=" << rep.localization
     << "\n";
  for (const vertex::SuiteCheck& c : rep.checks) {
    os << "line " << c.line << ": " << (c.result.equal ? "OK  " : "FAIL")
       << "  " << trimmed(c.lhs_src) << " == " << trimmed(c.rhs_src) << "\n";
    if (!c.result.equal)
      os << "  difference: " << c.result.difference.str() << "\n";
  }
  os << "checked: " << rep.checks.size() << "\n";
  os << "failed: " << rep.failures() << "\n";
  os << "result: " << (passed ? "PASS" : "FAIL") << "\n";
  return {passed ? 0 : 2, os.str()};
}

std::string indent_block(const std::string& text) {
  std::ostringstream os;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) os << "  " << line << "\n";
  return os.str();
}

Outcome cmd_jets(const Options& o) {
  bool passed = true;
  std::ostringstream os;
  json stability = json::array();
  json presentations = json::array();
  os << "truncation: " << o.truncation << "\n";
  for (int d = 1; d <= 3; ++d)
    for (int r = 0; r <= d; ++r) {
      auto a = logjets::log_jet_algebra(d, r, o.truncation);
      bool ok = logjets::ideal_stability_check(a);
      passed = passed && ok;
      os << "stability d=" << d << " r=" << r << ": " << (ok ? "OK" : "FAIL")
         << "\n";
      json e;
      e["d"] = d;
      e["r"] = r;
      e["ok"] = ok;
      stability.push_back(e);
    }
  for (int d = 1; d <= 2; ++d)
    for (int r = 0; r <= d; ++r) {
      auto a = logjets::log_jet_algebra(d, r, o.truncation);
      std::string text = logjets::assvar_presentation(a).str();
      os << "presentation d=" << d << " r=" << r << ":\n"
         << indent_block(text);
      json e;
      e["d"] = d;
      e["r"] = r;
      e["text"] = text;
      presentations.push_back(e);
    }
  os << "result: " << (passed ? "PASS" : "FAIL") << "\n";
  if (o.json) {
    json j;
    j["command"] = "jets";
    j["truncation"] = o.truncation;
    j["stability"] = stability;
    j["presentations"] = presentations;
    j["passed"] = passed;
    return finish_json(j, passed ? 0 : 2);
  }
  return {passed ? 0 : 2, os.str()};
}

}  // namespace

Outcome run_command(const Options& o) {
  if (o.command == "genus") return cmd_genus(o);
  if (o.command == "chiy") return cmd_chiy(o);
  if (o.command == "theta") return cmd_theta(o);
  if (o.command == "check-elliptic") return cmd_check_elliptic(o);
  if (o.command == "vertex-verify") return cmd_vertex_verify(o);
  if (o.command == "jets") return cmd_jets(o);
  throw Error("unknown command '" + o.command + "'");
}

void write_artifact(const std::string& path, const std::string& bytes) {
  std::string tmp = path + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp + "'");
    out << bytes;
    out.flush();
    if (!out) throw Error("cannot write '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error("cannot move output into '" + path + "'");
  }
}

}  // namespace logcdr::cli
