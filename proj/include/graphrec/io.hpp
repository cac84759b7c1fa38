#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace graphrec::io {

/// Reads a whole text file into lines. Throws std::runtime_error naming the
/// file when it cannot be opened.
std::vector<std::string> read_lines(const std::filesystem::path& path);

void write_file(const std::filesystem::path& path, const std::string& contents);

std::vector<std::string_view> split(std::string_view line, char sep);
std::vector<std::string_view> split_token(std::string_view line, std::string_view sep);

/// Integer/real parsing with file/line context in the error message.
int parse_int(std::string_view field, const std::string& context);
std::int64_t parse_int64(std::string_view field, const std::string& context);
double parse_double(std::string_view field, const std::string& context);

/// Shortest decimal form that round-trips a double (17 significant digits).
std::string format_double(double v);

/// FNV-1a, used for config fingerprints and artifact hashes.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ull);
std::string hex64(std::uint64_t v);

/// Replaces bytes that do not form valid UTF-8 with '?'. Titles in some raw
/// files are latin-1 encoded; they are display-only.
std::string sanitize_utf8(std::string_view s);

}  // namespace graphrec::io
