#pragma once

#include <string>

namespace argstruct::io {

/// Reads a whole file as bytes. Throws DataError when unreadable.
std::string read_file(const std::string& path);

/// Writes bytes to a file, creating parent directories. Throws DataError on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace argstruct::io
