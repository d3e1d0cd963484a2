#pragma once

// Line-oriented block format for `prexp exp` and `prexp lfun` inputs.
//
// Each non-blank line is a keyword followed by key=value fields; values after
// a lone ':' are a list of scalars. '#' starts a comment. A scalar is an
// integer, a fraction "a/b", or a canonical p-adic literal "v=..;u=..;N=..".

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "prexp/lfunction.hpp"

namespace prexp::textio {

struct Line {
  int number = 0;
  std::string keyword;
  std::vector<std::string> words;             // positional words before ':'
  std::map<std::string, std::string> fields;  // key=value words before ':'
  std::vector<std::string> values;            // words after ':'
  bool has_colon = false;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::ParseError, "line " + std::to_string(number) + ": " + msg);
  }
  const std::string& field(const std::string& key) const {
    auto it = fields.find(key);
    if (it == fields.end()) fail("missing field '" + key + "' in '" + keyword + "'");
    return it->second;
  }
  std::optional<std::string> optional_field(const std::string& key) const {
    auto it = fields.find(key);
    if (it == fields.end()) return std::nullopt;
    return it->second;
  }
  std::int64_t integer(const std::string& text) const {
    try {
      size_t used = 0;
      const std::int64_t x = std::stoll(text, &used);
      if (used != text.size()) fail("expected an integer, got '" + text + "'");
      return x;
    } catch (const std::logic_error&) {
      fail("expected an integer, got '" + text + "'");
    }
  }
  std::int64_t int_field(const std::string& key) const { return integer(field(key)); }
  std::int64_t int_field(const std::string& key, std::int64_t fallback) const {
    auto v = optional_field(key);
    return v ? integer(*v) : fallback;
  }
  Padic scalar(const std::string& text, const PrimeContext& ctx) const {
    try {
      return ctx.parse(text);
    } catch (const Error& e) {
      fail(std::string("bad scalar '") + text + "': " + e.what());
    }
  }
  std::vector<Padic> scalars(const PrimeContext& ctx) const {
    if (!has_colon || values.empty()) fail("expected ': <scalars>' after '" + keyword + "'");
    std::vector<Padic> out;
    for (const auto& v : values) out.push_back(scalar(v, ctx));
    return out;
  }
  std::int64_t single_int() const {
    if (words.size() != 1) fail("'" + keyword + "' takes one integer");
    return integer(words[0]);
  }
};

inline std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> out;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream is(raw);
    std::string word;
    Line line;
    line.number = number;
    while (is >> word) {
      if (line.keyword.empty()) {
        line.keyword = word;
      } else if (word == ":") {
        if (line.has_colon) line.fail("repeated ':'");
        line.has_colon = true;
      } else if (line.has_colon) {
        line.values.push_back(word);
      } else if (auto eq = word.find('='); eq != std::string::npos && word.rfind("v=", 0) != 0) {
        const std::string key = word.substr(0, eq);
        if (key.empty()) line.fail("empty key in '" + word + "'");
        if (!line.fields.emplace(key, word.substr(eq + 1)).second) line.fail("repeated field '" + key + "'");
      } else {
        line.words.push_back(word);
      }
    }
    if (!line.keyword.empty()) out.push_back(std::move(line));
  }
  return out;
}

inline std::vector<Line> read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigInvalid, "cannot open '" + path + "'");
  return tokenize(in);
}

inline PrimeContext parse_context(const Line& l) {
  try {
    return PrimeContext(static_cast<int>(l.int_field("p")), static_cast<int>(l.int_field("Np", 12)),
                        static_cast<int>(l.int_field("NPi", 60)), static_cast<int>(l.int_field("NT", 16)),
                        static_cast<int>(l.int_field("NY", 8)));
  } catch (const Error& e) {
    if (e.code() == Errc::ParseError) throw;
    l.fail(e.what());
  }
}

inline const Line& first_context(const std::vector<Line>& lines) {
  for (const auto& l : lines)
    if (l.keyword == "context") return l;
  throw Error(Errc::ParseError, "line 1: missing 'context' block");
}

// ---- exp ----

struct ExpInput {
  PrimeContext ctx;
  RankOneDelta delta;
  std::int64_t h = 0;
  FrakDElement alpha;
};

inline ExpInput parse_exp(const std::vector<Line>& lines) {
  const PrimeContext ctx = parse_context(first_context(lines));
  std::optional<RankOneDelta> delta;
  std::optional<std::int64_t> h;
  Padic coeff = ctx.one();
  std::vector<Padic> f;
  Tail tail = Tail::none();
  bool have_f = false;
  for (const auto& l : lines) {
    if (l.keyword == "context") continue;
    if (l.keyword == "delta") {
      delta = RankOneDelta{l.scalar(l.field("a"), ctx), l.int_field("m")};
    } else if (l.keyword == "h") {
      h = l.single_int();
    } else if (l.keyword == "alpha") {
      coeff = l.scalar(l.field("coeff"), ctx);
    } else if (l.keyword == "f") {
      f = l.scalars(ctx);
      have_f = true;
    } else if (l.keyword == "f-tail") {
      tail = Tail::bound(static_cast<int>(l.int_field("tau")), static_cast<int>(l.int_field("slope", 0)),
                         static_cast<int>(l.int_field("kappa", 0)));
    } else {
      l.fail("unknown block '" + l.keyword + "'");
    }
  }
  if (!delta) throw Error(Errc::ParseError, "line " + std::to_string(lines.back().number) + ": missing 'delta' block");
  if (!h) throw Error(Errc::ParseError, "line " + std::to_string(lines.back().number) + ": missing 'h' block");
  if (!have_f) throw Error(Errc::ParseError, "line " + std::to_string(lines.back().number) + ": missing 'f' block");
  return {ctx, *delta, *h, FrakDElement{PiSeries(ctx, Series(ctx.p(), f, tail)), DcrisElement{coeff}}};
}

// ---- lfun ----

struct LfunInput {
  PrimeContext ctx;
  int k0 = 0;
  TwoVarData data;
  BigClass z;
  std::optional<std::array<std::int64_t, 3>> normalize;  // c, d, j
  std::string normalize_op = "divide";
  std::vector<EulerFactor> ell;
};

inline LfunInput parse_lfun(const std::vector<Line>& lines) {
  const PrimeContext ctx = parse_context(first_context(lines));
  const int p = ctx.p();
  std::optional<int> k0;
  std::optional<RankOneDelta> delta;
  std::int64_t h = 0;
  Padic eta = ctx.one();
  int line_index = 0;
  int d = 0, e = 0;
  std::optional<std::vector<Padic>> conj;
  std::map<std::array<int, 3>, Series> hpair;
  std::map<std::array<int, 3>, Series> zparts;  // coord, y, branch
  std::optional<std::array<std::int64_t, 3>> normalize;
  std::string normalize_op = "divide";
  std::vector<EulerFactor> ell;
  const Line* rank_line = nullptr;
  for (const auto& l : lines) {
    const std::string& k = l.keyword;
    if (k == "context") continue;
    if (k == "k0") {
      k0 = static_cast<int>(l.single_int());
    } else if (k == "delta") {
      delta = RankOneDelta{l.scalar(l.field("a"), ctx), l.int_field("m")};
    } else if (k == "h") {
      h = l.single_int();
    } else if (k == "eta") {
      if (l.words.size() != 1) l.fail("'eta' takes one scalar");
      eta = l.scalar(l.words[0], ctx);
    } else if (k == "line") {
      line_index = static_cast<int>(l.single_int());
    } else if (k == "rank") {
      d = static_cast<int>(l.int_field("d"));
      e = static_cast<int>(l.int_field("e"));
      if (d < 1 || e < 1) l.fail("rank d and e must be >= 1");
      rank_line = &l;
    } else if (k == "conj") {
      conj = l.scalars(ctx);
    } else if (k == "hpair") {
      const std::array<int, 3> key{static_cast<int>(l.int_field("a")), static_cast<int>(l.int_field("b")),
                                   static_cast<int>(l.int_field("s", 0))};
      hpair[key] = Series(p, l.scalars(ctx));
    } else if (k == "z") {
      const std::array<int, 3> key{static_cast<int>(l.int_field("coord")), static_cast<int>(l.int_field("y", 0)),
                                   static_cast<int>(l.int_field("branch"))};
      if (key[1] < 0 || key[1] > ctx.NY()) l.fail("y-degree outside 0..NY");
      if (key[2] < 0 || key[2] >= p - 1) l.fail("branch outside 0..p-2");
      zparts[key] = Series(p, l.scalars(ctx));
    } else if (k == "normalize") {
      normalize = std::array<std::int64_t, 3>{l.int_field("c"), l.int_field("d"), l.int_field("j")};
      normalize_op = l.optional_field("op").value_or("divide");
      if (normalize_op != "divide" && normalize_op != "mu1") l.fail("op must be 'divide' or 'mu1'");
    } else if (k == "ell") {
      EulerFactor f;
      f.ell = l.int_field("l");
      f.weil_weight = static_cast<int>(l.int_field("weil"));
      f.a_ell = Series(p, l.scalars(ctx));
      if (l.values.size() == 1 && l.values[0].find_first_of("/v") == std::string::npos) {
        f.a_is_integer = true;
        f.a_int = l.integer(l.values[0]);
      }
      ell.push_back(f);
    } else {
      l.fail("unknown block '" + k + "'");
    }
  }
  const int last = lines.empty() ? 1 : lines.back().number;
  auto missing = [&](const std::string& what) {
    throw Error(Errc::ParseError, "line " + std::to_string(last) + ": missing '" + what + "' block");
  };
  if (!k0) missing("k0");
  if (!delta) missing("delta");
  if (!rank_line) missing("rank");
  if (!conj) missing("conj");
  if (static_cast<int>(conj->size()) != d * d) rank_line->fail("conj needs d*d entries");
  if (line_index < 0 || line_index >= d) rank_line->fail("line index outside 0..d-1");

  std::vector<std::vector<std::vector<Series>>> hs(d, std::vector<std::vector<Series>>(d, std::vector<Series>(e, Series::zero(p))));
  for (const auto& [key, s] : hpair) {
    if (key[0] < 0 || key[0] >= d || key[1] < 0 || key[1] >= d || key[2] < 0 || key[2] >= e)
      rank_line->fail("hpair index outside the rank");
    hs[key[0]][key[1]][key[2]] = s;
  }
  PadicMatrix C(p, d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) C(i, j) = (*conj)[i * d + j];

  LfunInput out{ctx, *k0, TwoVarData{*delta, eta, C, PairingData::structural(d, e, hs), static_cast<int>(h), line_index},
                BigClass{}, normalize, normalize_op, ell};
  std::vector<std::vector<std::vector<Series>>> parts(
      d * e, std::vector<std::vector<Series>>(ctx.NY() + 1, std::vector<Series>(p - 1, Series::zero(p))));
  int ymax = 0;
  for (const auto& [key, s] : zparts) {
    if (key[0] < 0 || key[0] >= d * e) rank_line->fail("z coordinate outside 0..d*e-1");
    parts[key[0]][key[1]][key[2]] = s;
    ymax = std::max(ymax, key[1]);
  }
  for (int c = 0; c < d * e; ++c) {
    std::vector<IwasawaElement> ys;
    for (int n = 0; n <= ymax; ++n) ys.push_back(IwasawaElement(ctx, parts[c][n]));
    out.z.coords.push_back(LambdaXElement(ctx, out.k0, ys));
  }
  return out;
}

// Grid "w=2,6;chi=0,3,1:2": weights, and characters as r (chi^r) or tame:wt.
struct GridSpec {
  std::vector<std::int64_t> weights;
  std::vector<CharacterSpec> chars;
};

inline GridSpec parse_grid(const std::string& spec) {
  auto bad = [&](const std::string& why) -> GridSpec { throw Error(Errc::ParseError, "grid: " + why); };
  auto to_int = [&](const std::string& s) -> std::int64_t {
    try {
      size_t used = 0;
      const std::int64_t x = std::stoll(s, &used);
      if (used == s.size()) return x;
    } catch (const std::logic_error&) {
    }
    throw Error(Errc::ParseError, "grid: expected an integer, got '" + s + "'");
  };
  GridSpec g;
  std::istringstream is(spec);
  std::string part;
  while (std::getline(is, part, ';')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) return bad("expected key=list in '" + part + "'");
    const std::string key = part.substr(0, eq);
    std::istringstream items(part.substr(eq + 1));
    std::string item;
    while (std::getline(items, item, ',')) {
      if (key == "w") {
        g.weights.push_back(to_int(item));
      } else if (key == "chi") {
        const auto colon = item.find(':');
        if (colon == std::string::npos) g.chars.push_back(CharacterSpec::chi_power(to_int(item)));
        else g.chars.push_back(CharacterSpec{to_int(item.substr(0, colon)), to_int(item.substr(colon + 1))});
      } else {
        return bad("unknown key '" + key + "'");
      }
    }
  }
  if (g.weights.empty() || g.chars.empty()) return bad("needs both w= and chi= lists");
  return g;
}

}  // namespace prexp::textio
