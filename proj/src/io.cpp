#include "kr/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "kr/catalog.hpp"

namespace kr {

ParseError::ParseError(std::size_t l, std::size_t c, const std::string& msg)
    : Error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg), line(l), column(c) {}

namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t s = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
    out.push_back({line.substr(s, i - s), s + 1});
  }
  return out;
}

u32 parse_uint(const Token& t, std::size_t line, const char* what) {
  u32 v = 0;
  auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || p != t.text.data() + t.text.size())
    throw ParseError(line, t.column, std::string("expected ") + what + ", found '" + t.text + "'");
  return v;
}

u32 parse_header_size(const Token& t, std::size_t line, const std::string& key) {
  if (t.text.rfind(key + "=", 0) != 0) throw ParseError(line, t.column, "expected '" + key + "=<n>'");
  Token v{t.text.substr(key.size() + 1), t.column + key.size() + 1};
  return parse_uint(v, line, "a size");
}

}  // namespace

InputDocument parse_input(const std::string& text) {
  InputDocument d;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  bool header = false;
  std::size_t rows = 0, last_line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto toks = tokenize(raw);
    if (toks.empty()) continue;
    last_line = line;
    if (!header) {
      if (toks[0].text == "name") {
        if (toks.size() != 2) throw ParseError(line, toks[0].column, "expected 'name <word>'");
        d.name = toks[1].text;
        continue;
      }
      if (toks[0].text == "gens") {
        d.format = InputDocument::Format::Generators;
        if (toks.size() != 2) throw ParseError(line, toks[0].column, "expected 'gens d=<n>'");
        d.size = parse_header_size(toks[1], line, "d");
      } else if (toks[0].text == "cayley") {
        d.format = InputDocument::Format::Cayley;
        if (toks.size() != 2) throw ParseError(line, toks[0].column, "expected 'cayley n=<k>'");
        d.size = parse_header_size(toks[1], line, "n");
      } else {
        throw ParseError(line, toks[0].column, "expected 'gens', 'cayley' or 'name', found '" + toks[0].text + "'");
      }
      if (d.size == 0) throw ParseError(line, toks[1].column, "size must be positive");
      header = true;
      continue;
    }
    if (toks.size() != d.size)
      throw ParseError(line, toks.size() > d.size ? toks[d.size].column : raw.size() + 1,
                       "expected " + std::to_string(d.size) + " entries, found " + std::to_string(toks.size()));
    if (d.format == InputDocument::Format::Generators) {
      std::vector<u32> img;
      for (auto& t : toks) {
        if (t.text == "-") {
          img.push_back(UNDEF);
          continue;
        }
        u32 v = parse_uint(t, line, "an image or '-'");
        if (v >= d.size) throw ParseError(line, t.column, "image " + t.text + " out of range 0.." + std::to_string(d.size - 1));
        img.push_back(v);
      }
      d.generators.emplace_back(std::move(img));
    } else {
      if (rows == d.size) throw ParseError(line, toks[0].column, "more than " + std::to_string(d.size) + " table rows");
      for (auto& t : toks) {
        u32 v = parse_uint(t, line, "an element");
        if (v >= d.size) throw ParseError(line, t.column, "element " + t.text + " out of range 0.." + std::to_string(d.size - 1));
        d.table.push_back(v);
      }
    }
    ++rows;
  }
  if (!header) throw ParseError(line + 1, 1, "missing 'gens' or 'cayley' header");
  if (d.format == InputDocument::Format::Generators && d.generators.empty())
    throw ParseError(last_line + 1, 1, "no generators");
  if (d.format == InputDocument::Format::Cayley) {
    if (rows != d.size)
      throw ParseError(last_line + 1, 1, "expected " + std::to_string(d.size) + " table rows, found " + std::to_string(rows));
    std::size_t n = d.size;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (d.table[d.table[a * n + b] * n + c] != d.table[a * n + d.table[b * n + c]])
            throw Error("table is not associative: (" + std::to_string(a) + "*" + std::to_string(b) + ")*" +
                        std::to_string(c) + " differs from " + std::to_string(a) + "*(" + std::to_string(b) + "*" +
                        std::to_string(c) + ")");
  }
  return d;
}

std::string write_input(const InputDocument& d) {
  std::ostringstream os;
  if (!d.name.empty()) os << "name " << d.name << '\n';
  if (d.format == InputDocument::Format::Generators) {
    os << "gens d=" << d.size << '\n';
    for (auto& g : d.generators) os << g.str() << '\n';
  } else {
    os << "cayley n=" << d.size << '\n';
    for (u32 a = 0; a < d.size; ++a) {
      for (u32 b = 0; b < d.size; ++b) os << (b ? " " : "") << d.table[a * d.size + b];
      os << '\n';
    }
  }
  return os.str();
}

InputDocument builtin_document(const std::string& name) {
  InputDocument d;
  d.generators = catalog::builtin(name);
  d.size = static_cast<u32>(d.generators.front().degree());
  d.name = name;
  return d;
}

FiniteSemigroup to_semigroup(const InputDocument& d, const Limits& lim) {
  if (d.format == InputDocument::Format::Generators) return FiniteSemigroup::from_generators(d.generators, lim);
  return FiniteSemigroup::from_table(d.table, d.size, false);
}

std::string digest(const InputDocument& d) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : write_input(d)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace kr
