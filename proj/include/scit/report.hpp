#pragma once

#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "scit/engine.hpp"

namespace scit {

using ordered_json = nlohmann::ordered_json;

inline std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Closed: return "Closed";
        case RunStatus::NotClosed: return "NotClosed";
        case RunStatus::Contradiction: return "Contradiction";
    }
    return "NotClosed";
}

inline RunStatus run_status_from(const std::string& s) {
    if (s == "Closed") return RunStatus::Closed;
    if (s == "NotClosed") return RunStatus::NotClosed;
    if (s == "Contradiction") return RunStatus::Contradiction;
    throw ParseError("unknown run status: " + s);
}

// Stable-key JSON document. All fields are integers or strings, so the
// serialization is byte-reproducible for identical reports; per-iteration
// wall time is deliberately not serialized.
inline ordered_json report_to_json(const Report& r) {
    ordered_json j;
    j["instance"] = r.instance;
    j["m"] = r.m;
    j["eta"] = r.eta;
    j["backend"] = r.backend;
    j["seed"] = r.seed;
    j["max_iterations"] = r.max_iterations;
    j["status"] = to_string(r.status);
    j["records"] = ordered_json::array();
    for (const auto& rec : r.records) {
        ordered_json e;
        e["k"] = rec.k;
        e["d"] = rec.d;
        e["bound"] = rec.zeta_hat;
        e["cuts_validated"] = rec.cuts_validated;
        e["vars_fixed_total"] = rec.vars_fixed_total;
        j["records"].push_back(std::move(e));
    }
    j["fixes"] = ordered_json::array();
    for (const auto& [u, v] : r.final_fixes.values()) {
        ordered_json e;
        e["u"] = u;
        e["value"] = v;
        j["fixes"].push_back(std::move(e));
    }
    j["family"] = ordered_json::array();
    for (const auto& t : r.final_family) {
        ordered_json e;
        e["I"] = t.members;
        e["alpha"] = t.alpha;
        e["beta"] = t.beta;
        j["family"].push_back(std::move(e));
    }
    ordered_json q;
    q["m"] = r.final_qubo.m;
    q["constant"] = r.final_qubo.constant;
    q["entries"] = ordered_json::array();
    for (int i = 0; i < r.final_qubo.m; ++i)
        for (int jj = i; jj < r.final_qubo.m; ++jj)
            if (r.final_qubo.R(i, jj) != 0)
                q["entries"].push_back(
                    ordered_json::array({i + 1, jj + 1, r.final_qubo.R(i, jj)}));
    j["final_qubo"] = std::move(q);
    j["note"] = r.note;
    return j;
}

inline Report report_from_json(const ordered_json& j) {
    Report r;
    r.instance = j.at("instance").get<std::string>();
    r.m = j.at("m").get<int>();
    r.eta = j.at("eta").get<std::int64_t>();
    r.backend = j.at("backend").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.max_iterations = j.at("max_iterations").get<int>();
    r.status = run_status_from(j.at("status").get<std::string>());
    for (const auto& e : j.at("records")) {
        IterationRecord rec;
        rec.k = e.at("k").get<int>();
        rec.d = e.at("d").get<int>();
        rec.zeta_hat = e.at("bound").get<std::int64_t>();
        rec.cuts_validated = e.at("cuts_validated").get<int>();
        rec.vars_fixed_total = e.at("vars_fixed_total").get<int>();
        r.records.push_back(rec);
    }
    for (const auto& e : j.at("fixes"))
        r.final_fixes.fix_u(e.at("u").get<int>(), e.at("value").get<int>());
    for (const auto& e : j.at("family")) {
        CutTriple t;
        t.members = e.at("I").get<IndexSet>();
        t.alpha = e.at("alpha").get<std::int64_t>();
        t.beta = e.at("beta").get<std::int64_t>();
        r.final_family.push_back(std::move(t));
    }
    const auto& q = j.at("final_qubo");
    r.final_qubo.m = q.at("m").get<int>();
    r.final_qubo.constant = q.at("constant").get<std::int64_t>();
    r.final_qubo.R = IntMat::Zero(r.final_qubo.m, r.final_qubo.m);
    for (const auto& e : q.at("entries")) {
        const int a = e.at(0).get<int>() - 1;
        const int b = e.at(1).get<int>() - 1;
        const std::int64_t c = e.at(2).get<std::int64_t>();
        r.final_qubo.R(a, b) = c;
        r.final_qubo.R(b, a) = c;
    }
    r.note = j.at("note").get<std::string>();
    return r;
}

// One `d, bound` cell per iteration, mirroring the usual results-table
// layout; iterations after an early close stay blank.
inline std::string format_table_cells(const Report& r) {
    std::ostringstream os;
    for (int k = 0; k < r.max_iterations; ++k) {
        if (k > 0) os << " | ";
        if (k < static_cast<int>(r.records.size()))
            os << r.records[k].d << ", " << r.records[k].zeta_hat;
    }
    return os.str();
}

inline std::string format_table(const Report& r) {
    std::ostringstream os;
    os << "QUBO | eta";
    for (int k = 0; k < r.max_iterations; ++k) os << " | k=" << k;
    os << '\n';
    os << r.instance << " | " << r.eta << " | " << format_table_cells(r)
       << '\n';
    return os.str();
}

enum class ReportFormat { Json, Table };

inline std::string emit_report(const Report& r, ReportFormat fmt) {
    if (fmt == ReportFormat::Json) return report_to_json(r).dump(2) + "\n";
    return format_table(r);
}

}  // namespace scit
