#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace ratiolim {

// Formats a double with 17 significant digits ("%.17g"), enough for exact
// round-trip of IEEE doubles. Never locale-dependent.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Writes text to path, appending a final newline if missing.
// Returns false on I/O failure.
bool write_text_file(const std::string& path, const std::string& text);

// Reads a whole file; throws std::runtime_error when unreadable.
std::string read_text_file(const std::string& path);

}  // namespace ratiolim
