#pragma once

#include <filesystem>
#include <string>

#include "gala/math.hpp"

namespace gala {

/// Shortest decimal form that parses back to the same double.
std::string format_real(double v);

/// Writes `text` to `path`, replacing any existing file. Throws Error on I/O failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace gala
