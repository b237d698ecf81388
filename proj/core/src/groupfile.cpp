#include "stabdec/groupfile.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "stabdec/linalg.hpp"
#include "stabdec/pauli.hpp"

namespace stabdec {

namespace {

// Character scanner over one directive line; columns are 1-based.
class LineScanner {
 public:
  LineScanner(std::string text, i64 line_no)
      : text_(std::move(text)), line_(line_no) {}

  i64 col() const { return static_cast<i64>(pos_) + 1; }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  bool eat(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c, const std::string& what) {
    skip_ws();
    if (!eat(c)) fail("expected " + what);
  }

  // [A-Za-z_][A-Za-z0-9_]*, or "" when the next character starts none.
  std::string word() {
    skip_ws();
    const size_t start = pos_;
    auto head = [](char c) {
      return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    };
    auto tail = [&](char c) {
      return head(c) || std::isdigit(static_cast<unsigned char>(c));
    };
    if (pos_ < text_.size() && head(text_[pos_])) {
      ++pos_;
      while (pos_ < text_.size() && tail(text_[pos_])) ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  // Digits at the current position (no sign, no leading whitespace).
  i64 number(const std::string& what) {
    const size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == start) fail("expected " + what);
    try {
      return std::stoll(text_.substr(start, pos_ - start));
    } catch (const std::out_of_range&) {
      pos_ = start;
      fail(what + " is out of range");
    }
  }

  // Optional '-' then digits; skips leading whitespace.
  i64 integer(const std::string& what) {
    skip_ws();
    const size_t start = pos_;
    const bool neg = eat('-');
    if (!std::isdigit(static_cast<unsigned char>(peek()))) {
      pos_ = start;
      fail("expected " + what);
    }
    const i64 v = number(what);
    return neg ? -v : v;
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(col(), msg); }

  [[noreturn]] void fail_at(i64 at_col, const std::string& msg) const {
    throw ParseError(line_, at_col, msg);
  }

 private:
  std::string text_;
  i64 line_;
  size_t pos_ = 0;
};

struct GenFactor {
  bool is_x = true;
  i64 site = 0;
  i64 exp = 1;
  i64 col = 0;
};

struct GenLine {
  i64 line_no = 0;
  i64 gamma2 = 0;
  std::vector<GenFactor> factors;
};

// Body after "gen =": optional phase prefix, then factors (or a lone "I").
GenLine scan_gen_body(LineScanner& sc, i64 line_no, i64 d) {
  GenLine out;
  out.line_no = line_no;

  sc.skip_ws();
  bool has_phase = false;
  if (sc.peek() == 'w') {
    const i64 phase_col = sc.col();
    sc.eat('w');
    sc.expect('^', "'^' after w");
    const i64 k = sc.integer("a phase exponent");
    if (sc.eat('/')) {
      if (!sc.eat('2')) sc.fail("expected '2' after '/'");
      if (d % 2 == 1 && mod_floor(k, 2) == 1)
        sc.fail_at(phase_col, "a half-step phase needs an even dimension");
      out.gamma2 = mod_floor(k, 2 * d);
    } else {
      out.gamma2 = mod_floor(2 * k, 2 * d);
    }
    has_phase = true;
  }

  if (!has_phase && sc.peek() == 'I') {
    sc.eat('I');
    if (!sc.at_end()) sc.fail("unexpected text after the identity");
    return out;
  }

  while (!sc.at_end()) {
    GenFactor f;
    f.col = sc.col();
    const char c = sc.peek();
    if (c == 'X')
      f.is_x = true;
    else if (c == 'Z')
      f.is_x = false;
    else
      sc.fail("expected a factor X<i> or Z<i>");
    sc.eat(c);
    f.site = sc.number("a site index");
    if (sc.eat('^')) {
      const bool neg = sc.eat('-');
      const i64 e = sc.number("an exponent");
      f.exp = neg ? -e : e;
    }
    out.factors.push_back(f);
  }

  if (!has_phase && out.factors.empty())
    sc.fail("a generator needs at least one factor");
  return out;
}

}  // namespace

ParseError::ParseError(i64 line, i64 col, const std::string& message)
    : std::invalid_argument("line " + std::to_string(line) + ", column " +
                            std::to_string(col) + ": " + message),
      line_(line),
      col_(col) {}

StabilizerGroup parse_group(const std::string& text) {
  std::optional<i64> d;
  std::vector<std::string> labels;
  std::vector<std::vector<i64>> blocks;
  std::map<i64, std::string> site_owner;
  std::vector<GenLine> gen_lines;
  i64 first_party_line = 0;

  std::istringstream in(text);
  std::string raw;
  for (i64 line_no = 1; std::getline(in, raw); ++line_no) {
    if (const size_t hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();

    LineScanner sc(raw, line_no);
    if (sc.at_end()) continue;
    const i64 key_col = sc.col();
    const std::string key = sc.word();
    if (key == "d") {
      sc.expect('=', "'='");
      sc.skip_ws();
      const i64 v_col = sc.col();
      const i64 v = sc.integer("a dimension");
      if (v < 2) sc.fail_at(v_col, "the dimension must be at least 2");
      if (d) sc.fail_at(key_col, "d is already set");
      d = v;
      if (!sc.at_end()) sc.fail("unexpected text after the dimension");
    } else if (key == "party") {
      sc.skip_ws();
      const i64 label_col = sc.col();
      const std::string label = sc.word();
      if (label.empty()) sc.fail("expected a party label");
      for (const std::string& seen : labels)
        if (seen == label)
          sc.fail_at(label_col, "party '" + label + "' is already declared");
      sc.expect('=', "'='");
      if (first_party_line == 0) first_party_line = line_no;
      std::vector<i64> sites;
      while (!sc.at_end()) {
        const i64 site_col = sc.col();
        const i64 q = sc.integer("a site index");
        if (q < 0) sc.fail_at(site_col, "site indices are 0-based");
        if (auto it = site_owner.find(q); it != site_owner.end())
          sc.fail_at(site_col, "site " + std::to_string(q) +
                                   " already belongs to party '" + it->second + "'");
        site_owner.emplace(q, label);
        sites.push_back(q);
        sc.skip_ws();
        if (!sc.eat(',')) {
          if (!sc.at_end()) sc.fail("expected ',' or end of line");
          break;
        }
        if (sc.at_end()) sc.fail("expected a site index after ','");
      }
      labels.push_back(label);
      blocks.push_back(std::move(sites));
    } else if (key == "gen") {
      sc.expect('=', "'='");
      if (!d) sc.fail_at(key_col, "d must be set before the first generator");
      gen_lines.push_back(scan_gen_body(sc, line_no, *d));
    } else {
      sc.fail_at(key_col, "expected a directive: d, party, or gen");
    }
  }

  if (!d) throw ParseError(1, 1, "no 'd = <int>' line found");

  i64 n_sites = 0;
  if (!labels.empty()) {
    for (const std::vector<i64>& b : blocks)
      n_sites += static_cast<i64>(b.size());
    for (i64 q = 0; q < n_sites; ++q)
      if (site_owner.find(q) == site_owner.end())
        throw ParseError(first_party_line, 1,
                         "site " + std::to_string(q) +
                             " is never assigned to a party");
  } else {
    for (const GenLine& gl : gen_lines)
      for (const GenFactor& f : gl.factors)
        n_sites = std::max(n_sites, f.site + 1);
  }

  StabilizerGroup s;
  s.d = *d;
  s.n_sites = n_sites;
  s.partition.labels = std::move(labels);
  s.partition.blocks = std::move(blocks);
  for (const GenLine& gl : gen_lines) {
    const std::vector<i64> zero(static_cast<size_t>(n_sites), 0);
    PauliOp acc = make_pauli(s.d, zero, zero, gl.gamma2);
    for (const GenFactor& f : gl.factors) {
      if (f.site >= n_sites)
        throw ParseError(gl.line_no, f.col,
                         "site index " + std::to_string(f.site) +
                             " is outside the " + std::to_string(n_sites) +
                             " declared sites");
      std::vector<i64> x = zero;
      std::vector<i64> z = zero;
      (f.is_x ? x : z)[static_cast<size_t>(f.site)] = mod_floor(f.exp, s.d);
      acc = multiply(acc, make_pauli(s.d, std::move(x), std::move(z), 0));
    }
    s.gens.push_back(std::move(acc));
  }
  return s;
}

std::string print_group(const StabilizerGroup& s) {
  std::ostringstream os;
  os << "d = " << s.d << '\n';
  for (size_t b = 0; b < s.partition.blocks.size(); ++b) {
    os << "party " << s.partition.labels[b] << " =";
    const std::vector<i64>& sites = s.partition.blocks[b];
    for (size_t i = 0; i < sites.size(); ++i)
      os << (i == 0 ? " " : ",") << sites[i];
    os << '\n';
  }
  for (const PauliOp& g : s.gens) os << "gen = " << to_text(g) << '\n';
  return os.str();
}

}  // namespace stabdec
