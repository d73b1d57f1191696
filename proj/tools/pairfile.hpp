#pragma once

#include <map>
#include <string>
#include <string_view>

#include "logcdr/genus.hpp"

namespace logcdr::cli {

/* Line-oriented section/key format:
 *
 *   # comment
 *   [ring]
 *   generators = h
 *   degrees    = 1
 *   rules      =
 *   integrals  = h^1 -> 1
 *
 *   [pair]
 *   dimension        = 1
 *   cotangent_roots  = -2*h
 *   divisor_classes  = -h, -h
 *
 * Values are single-line, lists are comma separated, '#' starts a comment
 * anywhere. Ring elements are rational combinations of generator
 * monomials: `-2*h`, `1/2*a*b - 3`, `0`. The ring's dimension is the top
 * degree carried by the integration monomials. cotangent_neg_roots gives
 * the subtracted roots of a virtual cotangent presentation. */
struct IniEntry {
  std::string value;
  int line = 0;
  int col = 0;  // first column of the value
};

struct IniSection {
  int line = 0;  // header line
  std::map<std::string, IniEntry> entries;
};

struct IniFile {
  std::map<std::string, IniSection> sections;
};

IniFile parse_ini(std::string_view text);
IniFile parse_ini_file(const std::string& path);

chow::RingSpecPtr ring_from_ini(const IniFile& f);
genus::PairData pair_from_ini(const IniFile& f, chow::RingSpecPtr ring,
                              std::string name);

/* Loads a pair, taking [ring] from ring_path when nonempty, else from the
 * pair file itself. The pair's name is the file name without extension. */
genus::PairData load_pair(const std::string& pair_path,
                          const std::string& ring_path);

}  // namespace logcdr::cli
