#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bireduct/analysis.hpp"
#include "bireduct/error.hpp"
#include "bireduct/graph.hpp"
#include "bireduct/switching.hpp"

// Flat-file formats.
//
// Graph (also used for flip matrices, bits read as epsilon):
//   "m n\n" followed by m lines of exactly n characters from {0,1}, each
//   terminated by '\n'. Decimals have no sign and no leading zeros. Nothing
//   may follow the last row.
//
// Map:
//   "L: a0->b0 a1->b1 ...\nR: c0->d0 ...\n"; sources on each side must be
//   exactly 0..k-1, each listed once. The final newline is optional.
//
// Switch pattern:
//   "L: i1,i2,... ; R: j1,j2,..." with ascending indices, "-" for an empty
//   side.
//
// Analysis trace:
//   "trace m n PREFIX\n" then one line per stage:
//   "stage j KIND VERTEX L{...} R{...}\n", VERTEX being "-" for ISO stages.

namespace bireduct {

namespace text_detail {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return pos_ - line_start_ + 1; }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, column(), what); }

  char take() {
    if (at_end()) fail("unexpected end of input");
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      line_start_ = pos_;
    }
    return c;
  }

  void expect(char c, std::string_view what) {
    if (peek() != c || at_end()) fail("expected " + std::string(what));
    take();
  }

  bool accept(char c) {
    if (at_end() || peek() != c) return false;
    take();
    return true;
  }

  void skip_blanks() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) take();
  }

  // Unsigned decimal without sign or leading zeros.
  std::size_t number() {
    const std::size_t start = pos_;
    if (at_end() || peek() < '0' || peek() > '9') fail("expected a decimal number");
    while (!at_end() && peek() >= '0' && peek() <= '9') ++pos_;
    const std::string_view digits = text_.substr(start, pos_ - start);
    if (digits.size() > 1 && digits.front() == '0') {
      pos_ = start;
      fail("leading zeros are not allowed");
    }
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc()) {
      pos_ = start;
      fail("number out of range");
    }
    return value;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
};

}  // namespace text_detail

inline BitMatrix parse_bit_matrix(std::string_view text) {
  text_detail::Cursor in(text);
  if (in.at_end()) in.fail("empty input");
  const std::size_t m = in.number();
  in.expect(' ', "a single space between the side sizes");
  const std::size_t n = in.number();
  in.expect('\n', "end of line after the header");
  BitMatrix bits(m, n);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const char c = in.peek();
      if (in.at_end() || (c != '0' && c != '1')) in.fail("expected '0' or '1'");
      in.take();
      if (c == '1') bits.set(a, b);
    }
    in.expect('\n', "end of row after " + std::to_string(n) + " cells");
  }
  if (!in.at_end()) in.fail("trailing content after the last row");
  return bits;
}

inline BipartiteGraph parse_graph(std::string_view text) {
  BitMatrix bits = parse_bit_matrix(text);
  return BipartiteGraph::make(bits.rows(), bits.cols(), bits);
}

inline FlipMatrix parse_flip_matrix(std::string_view text) { return FlipMatrix(parse_bit_matrix(text)); }

inline std::string format_bit_matrix(const BitMatrix& m) {
  std::string out = std::to_string(m.rows()) + ' ' + std::to_string(m.cols()) + '\n';
  for (std::size_t a = 0; a < m.rows(); ++a) {
    for (std::size_t b = 0; b < m.cols(); ++b) out += m.get(a, b) ? '1' : '0';
    out += '\n';
  }
  return out;
}

inline std::string format_graph(const BipartiteGraph& g) { return format_bit_matrix(g.cross()); }
inline std::string format_flip_matrix(const FlipMatrix& e) { return format_bit_matrix(e.bits()); }

namespace text_detail {

inline std::vector<std::size_t> parse_map_side(Cursor& in, char letter) {
  if (in.at_end()) in.fail(std::string("expected '") + letter + ":' line");
  in.expect(letter, std::string("'") + letter + ":'");
  in.expect(':', std::string("':' after '") + letter + "'");
  std::vector<std::optional<std::size_t>> images;
  while (true) {
    in.skip_blanks();
    if (in.at_end() || in.peek() == '\n') break;
    const std::size_t line = in.line(), col = in.column();
    const std::size_t src = in.number();
    in.expect('-', "'->'");
    in.expect('>', "'->'");
    const std::size_t dst = in.number();
    if (src >= images.size()) images.resize(src + 1);
    if (images[src]) throw ParseError(line, col, std::string(1, letter) + " source " + std::to_string(src) + " listed twice");
    images[src] = dst;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!images[i]) in.fail(std::string(1, letter) + " source " + std::to_string(i) + " is missing");
    out.push_back(*images[i]);
  }
  return out;
}

inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> parse_map_sides(std::string_view text) {
  Cursor in(text);
  if (in.at_end()) in.fail("empty map file");
  auto left = parse_map_side(in, 'L');
  in.expect('\n', "newline after the L: line");
  auto right = parse_map_side(in, 'R');
  in.accept('\n');
  if (!in.at_end()) in.fail("trailing content after the R: line");
  return {std::move(left), std::move(right)};
}

}  // namespace text_detail

// Parses a map and validates it against the target side sizes. Throws
// DuplicateTarget, OutOfRange, or ParseError.
inline SidedMap parse_map(std::string_view text, std::size_t target_left, std::size_t target_right) {
  auto [left, right] = text_detail::parse_map_sides(text);
  return SidedMap(std::move(left), std::move(right), target_left, target_right);
}

// Same, with each side mapped into a target side of its own size.
inline SidedMap parse_map(std::string_view text) {
  auto [left, right] = text_detail::parse_map_sides(text);
  const std::size_t nl = left.size(), nr = right.size();
  return SidedMap(std::move(left), std::move(right), nl, nr);
}

inline std::string format_map(const SidedMap& f) {
  std::string out = "L:";
  for (std::size_t a = 0; a < f.source_left_count(); ++a)
    out += ' ' + std::to_string(a) + "->" + std::to_string(f.map_left(a));
  out += "\nR:";
  for (std::size_t b = 0; b < f.source_right_count(); ++b)
    out += ' ' + std::to_string(b) + "->" + std::to_string(f.map_right(b));
  return out + '\n';
}

namespace text_detail {

inline std::string format_index_list(const std::vector<std::size_t>& idx) {
  if (idx.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(idx[i]);
  }
  return out;
}

inline std::string format_brace_set(char letter, const std::vector<std::size_t>& idx) {
  std::string out(1, letter);
  out += '{';
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(idx[i]);
  }
  return out + '}';
}

inline std::vector<std::size_t> parse_index_list(Cursor& in, std::size_t bound) {
  std::vector<std::size_t> out;
  if (in.accept('-')) return out;
  do {
    const std::size_t line = in.line(), col = in.column();
    const std::size_t v = in.number();
    if (v >= bound) throw ParseError(line, col, "index " + std::to_string(v) + " out of range");
    if (!out.empty() && v <= out.back()) throw ParseError(line, col, "indices must be strictly ascending");
    out.push_back(v);
  } while (in.accept(','));
  return out;
}

inline std::vector<std::size_t> parse_brace_set(Cursor& in, char letter) {
  in.expect(letter, std::string(1, letter));
  in.expect('{', "'{'");
  std::vector<std::size_t> out;
  if (in.accept('}')) return out;
  do out.push_back(in.number());
  while (in.accept(','));
  in.expect('}', "'}'");
  return out;
}

}  // namespace text_detail

inline std::string format_pattern(const SwitchPattern& p) {
  return "L: " + text_detail::format_index_list(p.left.indices()) +
         " ; R: " + text_detail::format_index_list(p.right.indices());
}

inline SwitchPattern parse_pattern(std::string_view text, std::size_t left_count, std::size_t right_count) {
  text_detail::Cursor in(text);
  in.expect('L', "'L:'");
  in.expect(':', "':'");
  in.expect(' ', "' '");
  const auto left = text_detail::parse_index_list(in, left_count);
  for (char c : std::string_view(" ; R: ")) in.expect(c, "' ; R: '");
  const auto right = text_detail::parse_index_list(in, right_count);
  if (!in.at_end()) in.fail("trailing content after the pattern");
  return SwitchPattern::from_sets(left_count, right_count, left, right);
}

inline std::string format_trace(const AnalysisTrace& t) {
  std::ostringstream os;
  os << "trace " << t.m << ' ' << t.n << ' ' << to_string(t.global_prefix) << '\n';
  for (std::size_t j = 0; j < t.stages.size(); ++j) {
    const AnalysisStage& s = t.stages[j];
    os << "stage " << j << ' ' << to_string(s.kind) << ' ' << (s.vertex ? to_string(*s.vertex) : "-") << ' '
       << text_detail::format_brace_set('L', s.witness_left) << ' '
       << text_detail::format_brace_set('R', s.witness_right) << '\n';
  }
  return os.str();
}

// Reads back format_trace output. final_check is not part of the text and is
// left false; recompute it with verify_trace.
inline AnalysisTrace parse_trace(std::string_view text) {
  text_detail::Cursor in(text);
  auto word = [&](std::string_view w) {
    for (char c : w) in.expect(c, "'" + std::string(w) + "'");
  };
  auto token = [&] {
    std::string out;
    while (!in.at_end() && in.peek() != ' ' && in.peek() != '\n') out += in.take();
    return out;
  };
  AnalysisTrace t;
  word("trace ");
  t.m = in.number();
  in.expect(' ', "' '");
  t.n = in.number();
  in.expect(' ', "' '");
  const std::string prefix = token();
  if (prefix == "IDENTITY") t.global_prefix = GlobalPrefix::Identity;
  else if (prefix == "EXCHANGE") t.global_prefix = GlobalPrefix::Exchange;
  else in.fail("unknown prefix '" + prefix + "'");
  in.expect('\n', "newline");
  while (!in.at_end()) {
    word("stage ");
    if (in.number() != t.stages.size()) in.fail("stage numbers must count up from 0");
    in.expect(' ', "' '");
    AnalysisStage s;
    const std::string kind = token();
    if (kind == "ISO") s.kind = StageKind::Iso;
    else if (kind == "SWITCH_VERTEX") s.kind = StageKind::SwitchVertex;
    else in.fail("unknown stage kind '" + kind + "'");
    in.expect(' ', "' '");
    if (!in.accept('-')) {
      const char side = in.take();
      if (side != 'L' && side != 'R') in.fail("expected vertex side L or R");
      s.vertex = VertexRef{side == 'L' ? Side::Left : Side::Right, in.number()};
    }
    in.expect(' ', "' '");
    s.witness_left = text_detail::parse_brace_set(in, 'L');
    in.expect(' ', "' '");
    s.witness_right = text_detail::parse_brace_set(in, 'R');
    in.expect('\n', "newline");
    t.stages.push_back(std::move(s));
  }
  return t;
}

// Reads a whole file; the error names the path.
inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace bireduct
