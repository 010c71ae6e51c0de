#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "scit/model.hpp"

namespace scit {

// BIQMAC sparse-triple text format: line 1 holds `n nnz`, then nnz lines
// `i j c` with 1-based indices; c sets R_ij = R_ji (i != j) or R_ii.
// BIQMAC instances are maximization, so the matrix is negated at ingestion
// and the engine minimizes (Table-style optima come out negated).
inline QuboInstance parse_biqmac(std::istream& in) {
    long long n = 0, nnz = 0;
    if (!(in >> n >> nnz) || n < 1 || nnz < 0)
        throw MalformedHeader("biqmac: expected header `n nnz`");

    QuboInstance inst;
    inst.m = static_cast<int>(n);
    inst.R = IntMat::Zero(inst.m, inst.m);

    std::set<std::pair<int, int>> seen;
    for (long long k = 0; k < nnz; ++k) {
        long long i = 0, j = 0, c = 0;
        if (!(in >> i >> j >> c))
            throw MalformedHeader("biqmac: expected " + std::to_string(nnz) +
                                  " entries, got " + std::to_string(k));
        if (i < 1 || i > n || j < 1 || j > n)
            throw IndexOutOfRange("biqmac: entry index out of range: " +
                                  std::to_string(i) + " " + std::to_string(j));
        const std::pair<int, int> key{static_cast<int>(std::min(i, j)),
                                      static_cast<int>(std::max(i, j))};
        if (!seen.insert(key).second)
            throw DuplicateEntry("biqmac: duplicate entry (" +
                                 std::to_string(i) + ", " + std::to_string(j) +
                                 ")");
        inst.R(i - 1, j - 1) = -c;
        inst.R(j - 1, i - 1) = -c;
    }
    return inst;
}

inline QuboInstance parse_biqmac_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file: " + path);
    return parse_biqmac(in);
}

// Writes the instance back in the triple format (negating to the BIQMAC
// maximization convention), upper triangle only.
inline void write_biqmac(std::ostream& out, const QuboInstance& inst) {
    std::vector<std::tuple<int, int, std::int64_t>> entries;
    for (int i = 0; i < inst.m; ++i)
        for (int j = i; j < inst.m; ++j)
            if (inst.R(i, j) != 0) entries.push_back({i + 1, j + 1, -inst.R(i, j)});
    out << inst.m << ' ' << entries.size() << '\n';
    for (const auto& [i, j, c] : entries)
        out << i << ' ' << j << ' ' << c << '\n';
}

}  // namespace scit
