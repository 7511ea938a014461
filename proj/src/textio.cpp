#include "textio.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ratiolim {

bool write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
    out.flush();
    return static_cast<bool>(out);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace ratiolim
