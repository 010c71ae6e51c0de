#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace testutil {

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::filesystem::path scratch_dir() {
    const auto dir =
        std::filesystem::temp_directory_path() / "scit_test_scratch";
    std::filesystem::create_directories(dir);
    return dir;
}

// Runs a command via the shell with stdout/stderr captured in scratch files.
inline CommandResult run_command(const std::string& cmd) {
    static int counter = 0;
    const auto dir = scratch_dir();
    const auto out = dir / ("out" + std::to_string(counter) + ".txt");
    const auto err = dir / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string full =
        cmd + " > " + out.string() + " 2> " + err.string();
    const int rc = std::system(full.c_str());
    CommandResult res;
    res.exit_code = rc == -1 ? -1 : WEXITSTATUS(rc);
    res.out = slurp(out);
    res.err = slurp(err);
    return res;
}

inline std::filesystem::path write_file(const std::string& name,
                                        const std::string& contents) {
    const auto path = scratch_dir() / name;
    std::ofstream out(path, std::ios::binary);
    out << contents;
    return path;
}

}  // namespace testutil
