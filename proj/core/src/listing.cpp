// SPDX-License-Identifier: Apache-2.0
#include <charconv>
#include <sstream>

#include "scampsim/error.hpp"
#include "scampsim/program.hpp"

namespace scampsim {
namespace {

constexpr char kHex[] = "0123456789abcdef";

std::string pattern_to_hex(const BitImage& img) {
  const std::size_t row_bytes = (static_cast<std::size_t>(img.width) + 7) / 8;
  std::string out;
  out.reserve(row_bytes * static_cast<std::size_t>(img.height) * 2);
  for (int r = 0; r < img.height; ++r) {
    for (std::size_t byte = 0; byte < row_bytes; ++byte) {
      unsigned v = 0;
      for (int bit = 0; bit < 8; ++bit) {
        const int c = static_cast<int>(byte) * 8 + bit;
        if (c < img.width && img.at(r, c)) v |= 0x80u >> bit;
      }
      out.push_back(kHex[v >> 4]);
      out.push_back(kHex[v & 0xF]);
    }
  }
  return out;
}

int hex_digit(char ch) {
  if (ch >= '0' && ch <= '9') return ch - '0';
  if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
  if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
  return -1;
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

class LineParser {
 public:
  LineParser(std::size_t line_no, std::vector<std::string_view> tokens)
      : line_no_(line_no), tokens_(std::move(tokens)) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::format, "listing line " + std::to_string(line_no_) + ": " + msg);
  }

  std::size_t size() const { return tokens_.size(); }
  std::string_view token(std::size_t i) const { return tokens_[i]; }

  void expect_count(std::size_t n) const {
    if (tokens_.size() != n) {
      fail("expected " + std::to_string(n - 1) + " operands for '" + std::string(tokens_[0]) +
           "', got " + std::to_string(tokens_.size() - 1));
    }
  }

  std::string name(std::size_t i) const {
    std::string_view t = tokens_[i];
    if (t.empty() || t[0] == '@' || t[0] == '.') fail("bad name '" + std::string(t) + "'");
    return std::string(t);
  }

  template <typename T>
  T number(std::size_t i) const {
    std::string_view t = tokens_[i];
    T v{};
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
      fail("bad integer '" + std::string(t) + "'");
    }
    return v;
  }

 private:
  std::size_t line_no_;
  std::vector<std::string_view> tokens_;
};

BitImage parse_pattern(const LineParser& p) {
  p.expect_count(4);
  std::string_view dims = p.token(2);
  auto x = dims.find('x');
  if (x == std::string_view::npos) p.fail("pattern dimensions must be <h>x<w>");
  int h = 0;
  int w = 0;
  auto r1 = std::from_chars(dims.data(), dims.data() + x, h);
  auto r2 = std::from_chars(dims.data() + x + 1, dims.data() + dims.size(), w);
  if (r1.ec != std::errc{} || r2.ec != std::errc{} || h <= 0 || w <= 0) {
    p.fail("bad pattern dimensions '" + std::string(dims) + "'");
  }
  std::string_view hex = p.token(3);
  const std::size_t row_bytes = (static_cast<std::size_t>(w) + 7) / 8;
  if (hex.size() != row_bytes * static_cast<std::size_t>(h) * 2) p.fail("pattern hex length mismatch");
  BitImage img(h, w);
  for (int r = 0; r < h; ++r) {
    for (std::size_t byte = 0; byte < row_bytes; ++byte) {
      const std::size_t off = (static_cast<std::size_t>(r) * row_bytes + byte) * 2;
      const int hi = hex_digit(hex[off]);
      const int lo = hex_digit(hex[off + 1]);
      if (hi < 0 || lo < 0) p.fail("bad hex digit in pattern");
      const unsigned v = static_cast<unsigned>(hi * 16 + lo);
      for (int bit = 0; bit < 8; ++bit) {
        const int c = static_cast<int>(byte) * 8 + bit;
        if (c < w) img.at(r, c) = (v >> (7 - bit)) & 1;
      }
    }
  }
  return img;
}

std::optional<std::string> take_mask(LineParser& p, std::size_t& count) {
  if (count > 0 && !p.token(count - 1).empty() && p.token(count - 1)[0] == '@') {
    std::string_view t = p.token(count - 1).substr(1);
    if (t.empty()) p.fail("empty mask name");
    --count;
    return std::string(t);
  }
  return std::nullopt;
}

Instruction parse_instruction(LineParser& p) {
  auto op = parse_opcode(p.token(0));
  if (!op) p.fail("unknown opcode '" + std::string(p.token(0)) + "'");
  std::size_t count = p.size();
  Instruction ins;
  ins.op = *op;
  auto check = [&](std::size_t n) {
    if (count != n) {
      p.fail("expected " + std::to_string(n - 1) + " operands for '" + std::string(p.token(0)) +
             "', got " + std::to_string(count - 1));
    }
  };
  switch (*op) {
    case Opcode::add:
    case Opcode::sub:
    case Opcode::max:
      ins.mask = take_mask(p, count);
      check(4);
      ins.dst = p.name(1);
      ins.a = p.name(2);
      ins.b = p.name(3);
      break;
    case Opcode::neg:
    case Opcode::copy:
      ins.mask = take_mask(p, count);
      check(3);
      ins.dst = p.name(1);
      ins.a = p.name(2);
      break;
    case Opcode::shift: {
      check(5);
      ins.dst = p.name(1);
      ins.a = p.name(2);
      auto dir = parse_direction(p.token(3));
      if (!dir) p.fail("bad direction '" + std::string(p.token(3)) + "'");
      ins.direction = *dir;
      ins.steps = p.number<int>(4);
      if (ins.steps < 0) p.fail("shift steps must be >= 0");
      break;
    }
    case Opcode::threshold:
      check(4);
      ins.dst = p.name(1);
      ins.a = p.name(2);
      ins.value = p.number<std::int64_t>(3);
      break;
    case Opcode::global_sum:
      check(3);
      ins.a = p.name(1);
      ins.symbol = p.name(2);
      break;
    case Opcode::d_and:
    case Opcode::d_or:
    case Opcode::d_xor:
      check(4);
      ins.dst = p.name(1);
      ins.a = p.name(2);
      ins.b = p.name(3);
      break;
    case Opcode::d_not:
      check(3);
      ins.dst = p.name(1);
      ins.a = p.name(2);
      break;
    case Opcode::write_pattern:
      check(3);
      ins.dst = p.name(1);
      ins.symbol = p.name(2);
      break;
  }
  return ins;
}

}  // namespace

std::string format_instruction(const Instruction& ins) {
  std::ostringstream os;
  os << to_string(ins.op);
  switch (ins.op) {
    case Opcode::add:
    case Opcode::sub:
    case Opcode::max:
      os << ' ' << ins.dst << ' ' << ins.a << ' ' << ins.b;
      if (ins.mask) os << " @" << *ins.mask;
      break;
    case Opcode::neg:
    case Opcode::copy:
      os << ' ' << ins.dst << ' ' << ins.a;
      if (ins.mask) os << " @" << *ins.mask;
      break;
    case Opcode::shift:
      os << ' ' << ins.dst << ' ' << ins.a << ' ' << to_string(ins.direction) << ' ' << ins.steps;
      break;
    case Opcode::threshold:
      os << ' ' << ins.dst << ' ' << ins.a << ' ' << ins.value;
      break;
    case Opcode::global_sum:
      os << ' ' << ins.a << ' ' << ins.symbol;
      break;
    case Opcode::d_and:
    case Opcode::d_or:
    case Opcode::d_xor:
      os << ' ' << ins.dst << ' ' << ins.a << ' ' << ins.b;
      break;
    case Opcode::d_not:
      os << ' ' << ins.dst << ' ' << ins.a;
      break;
    case Opcode::write_pattern:
      os << ' ' << ins.dst << ' ' << ins.symbol;
      break;
  }
  return os.str();
}

std::string disassemble(const PpaProgram& program) {
  std::ostringstream os;
  if (program == PpaProgram{}) return {};
  const auto& g = program.geometry;
  os << ".geometry " << g.height << ' ' << g.width << ' ' << g.block_grid << ' ' << g.block_size
     << '\n';
  if (!program.labels.empty()) {
    os << ".labels";
    for (const auto& l : program.labels) os << ' ' << l;
    os << '\n';
  }
  for (const auto& [name, img] : program.patterns) {
    os << ".pattern " << name << ' ' << img.height << 'x' << img.width << ' '
       << pattern_to_hex(img) << '\n';
  }
  for (const auto& ins : program.instructions) os << format_instruction(ins) << '\n';
  return os.str();
}

PpaProgram parse_listing(std::string_view text) {
  PpaProgram program;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = tokenize(line);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }
    LineParser p(line_no, std::move(tokens));
    std::string_view head = p.token(0);
    if (head == ".geometry") {
      p.expect_count(5);
      program.geometry = {p.number<int>(1), p.number<int>(2), p.number<int>(3), p.number<int>(4)};
      try {
        program.geometry.validate();
      } catch (const Error& e) {
        p.fail(e.what());
      }
    } else if (head == ".labels") {
      for (std::size_t i = 1; i < p.size(); ++i) program.labels.push_back(p.name(i));
    } else if (head == ".pattern") {
      std::string name = p.name(1);
      BitImage img = parse_pattern(p);
      if (!program.patterns.emplace(name, std::move(img)).second) {
        p.fail("duplicate pattern '" + name + "'");
      }
    } else if (!head.empty() && head[0] == '.') {
      p.fail("unknown directive '" + std::string(head) + "'");
    } else {
      program.instructions.push_back(parse_instruction(p));
    }
    if (end == text.size()) break;
  }
  return program;
}

}  // namespace scampsim
