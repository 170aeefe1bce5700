#include "argstruct/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "argstruct/errors.hpp"

namespace argstruct::io {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot read file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw DataError("read failed: " + path);
    }
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write file: " + path);
    }
    out << content;
    if (!out) {
        throw DataError("write failed: " + path);
    }
}

}  // namespace argstruct::io
