#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace iupc::testing {

inline std::filesystem::path fixture_dir() {
#ifdef IUPC_FIXTURE_DIR
    return std::filesystem::path(IUPC_FIXTURE_DIR);
#else
    return std::filesystem::current_path() / "fixtures";
#endif
}

inline std::string read_fixture(const std::string& relative) {
    std::ifstream in(fixture_dir() / relative, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace iupc::testing
