#pragma once

#include <string>
#include <vector>

#include "kr/core.hpp"

namespace kr {

/// Line-oriented semigroup input:
///
///   # comment
///   name T2
///   gens d=2
///   0 0
///   1 -        ('-' is undefined)
///
/// or
///
///   cayley n=2
///   0 1
///   1 1
struct InputDocument {
  enum class Format { Generators, Cayley };
  Format format = Format::Generators;
  u32 size = 0;  // degree for generators, order for cayley
  std::vector<PartialTransformation> generators;
  std::vector<u32> table;  // row-major
  std::string name;
};

/// Throws ParseError with a 1-based line and column.
struct ParseError : Error {
  std::size_t line, column;
  ParseError(std::size_t l, std::size_t c, const std::string& msg);
};

InputDocument parse_input(const std::string& text);
/// Canonical text; parse_input(write_input(d)) reproduces d.
std::string write_input(const InputDocument& d);
/// Document for a catalog name such as T3 or SIS2.
InputDocument builtin_document(const std::string& name);

FiniteSemigroup to_semigroup(const InputDocument& d, const Limits& lim = {});

/// 64-bit FNV-1a of the canonical text, as 16 hex digits.
std::string digest(const InputDocument& d);

}  // namespace kr
