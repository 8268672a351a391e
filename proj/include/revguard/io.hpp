#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace revguard::io {

/// Reads a whole file. Files ending in ".gz" are inflated transparently.
std::string read_file(const std::filesystem::path& path);

/// Resolves `path` or `path.gz`, whichever exists; throws ConfigError otherwise.
std::filesystem::path resolve_maybe_gz(const std::filesystem::path& path);

/// Writes to a temporary sibling, then renames over `path`. Readers never see
/// a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

}  // namespace revguard::io
