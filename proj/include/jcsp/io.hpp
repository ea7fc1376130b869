#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jcsp/relation.hpp"

namespace jcsp {

inline constexpr int kFormatVersion = 1;

/// Optional "generator" header recording how a file was produced.
struct FileStamp {
  std::string rng;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::uint64_t>> params;
};

/// JSON text; primitive arrays are kept on one line so tables and tuples
/// diff line by line. Output is a pure function of the value.
std::string algebra_to_text(const Algebra& alg, const std::optional<FileStamp>& stamp = std::nullopt);
std::string instance_to_text(const Instance& inst, const std::optional<FileStamp>& stamp = std::nullopt);

/// Throw Error(Parse) naming the line/column of a syntax error or the path of
/// the offending field. Instance scopes are normalized on read.
Algebra algebra_from_text(std::string_view text);
Instance instance_from_text(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

Algebra load_algebra(const std::string& path);
Instance load_instance(const std::string& path);

}  // namespace jcsp
