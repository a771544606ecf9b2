#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace typerank {

inline constexpr std::string_view kToolVersion = "typerank 1.0.0";

// Hex SHA-256 of a file's bytes. Throws DataError if unreadable.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

// Header line stamped on every emitted file: tool version, seed and input
// digests (file name plus the first 16 hex digits of its SHA-256).
struct Provenance {
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> inputs;  // (file name, digest)

  void add_input(const std::filesystem::path& path);
  std::string line() const;
};

}  // namespace typerank
