// scit: successive cutting-inequality solver engine for QUBO instances.
//
// `scit solve` runs the engine on a BIQMAC sparse-triple instance and emits
// a JSON or table report; `scit oracle` prints the exhaustive optimum for
// small instances. Exit codes: 0 Closed, 1 NotClosed, 2 Contradiction,
// 3 usage errors, 4 I/O or parse errors.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>

#include "scit/biqmac.hpp"
#include "scit/engine.hpp"
#include "scit/oracle.hpp"
#include "scit/report.hpp"

namespace {

scit::Rational parse_gamma(const std::string& text) {
    scit::Rational g;
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        g.num = std::stoll(text.substr(0, slash));
        g.den = std::stoll(text.substr(slash + 1));
    } else {
        const auto dot = text.find('.');
        if (dot == std::string::npos) {
            g.num = std::stoll(text);
            g.den = 1;
        } else {
            const std::string frac = text.substr(dot + 1);
            g.num = std::stoll(text.substr(0, dot) + frac);
            g.den = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) g.den *= 10;
        }
    }
    const auto d = std::gcd(g.num, g.den);
    if (d > 1) {
        g.num /= d;
        g.den /= d;
    }
    g.validate();
    return g;
}

std::vector<int> read_binary_vector(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw scit::ParseError("cannot open incumbent file: " + path);
    std::vector<int> out;
    int v;
    while (in >> v) out.push_back(v);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"successive cutting-inequality engine for binary QPs"};
    app.require_subcommand(1);

    std::string instance_path, out_path, format = "json", backend = "exact";
    std::string gamma_text = "1/3", split = "random", incumbent_path;
    scit::EngineConfig cfg;
    bool eta_from_oracle = false;
    std::int64_t eta = 0;

    auto* solve = app.add_subcommand("solve", "run the cutting-plane engine");
    solve->add_option("--instance", instance_path, "BIQMAC sparse instance")
        ->required();
    auto* eta_opt = solve->add_option("--eta", eta,
                                      "integer upper bound on the optimum");
    solve->add_flag("--eta-from-oracle", eta_from_oracle,
                    "derive eta by exhaustive enumeration (small m only)");
    solve->add_option("--backend", backend, "exact|dnn")
        ->check(CLI::IsMember({"exact", "dnn"}));
    solve->add_option("--max-iter", cfg.max_iterations, "iteration cap")
        ->check(CLI::PositiveNumber);
    solve->add_option("--gamma", gamma_text, "initial beta fraction");
    solve->add_option("--q", cfg.q, "sampled candidates per side");
    solve->add_option("--split", split, "random|interleave")
        ->check(CLI::IsMember({"random", "interleave"}));
    solve->add_option("--seed", cfg.seed, "rng seed");
    solve->add_option("--workers", cfg.worker_count, "probe worker threads")
        ->check(CLI::PositiveNumber);
    solve->add_option("--out", out_path, "write the JSON report here");
    solve->add_option("--format", format, "json|table")
        ->check(CLI::IsMember({"json", "table"}));
    solve->add_option("--enum-limit", cfg.enum_limit,
                      "exact backend size limit");
    solve->add_option("--dnn-sweeps", cfg.dnn.max_sweeps,
                      "first-order sweep budget per solve");
    solve->add_option("--dnn-tol", cfg.dnn.primal_tol,
                      "primal residual tolerance");
    solve->add_option("--retire-stalled-after", cfg.retire_stalled_after,
                      "retire a triple after this many stalled probes");
    solve->add_option("--incumbent", incumbent_path,
                      "file with a 0/1 incumbent (length m or 2m)");

    std::string oracle_path;
    int oracle_limit = 24;
    auto* oracle = app.add_subcommand("oracle",
                                      "print the exhaustive optimum");
    oracle->add_option("--instance", oracle_path, "BIQMAC sparse instance")
        ->required();
    oracle->add_option("--limit", oracle_limit, "enumeration size limit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        if (oracle->parsed()) {
            const auto inst = scit::parse_biqmac_file(oracle_path);
            const auto res = scit::brute_force_optimum(inst, oracle_limit);
            std::cout << "zeta " << res.zeta << "\n";
            std::cout << "optima " << res.minimizers.size() << "\n";
            const auto u = scit::mask_to_u(res.minimizers.front(), inst.m);
            std::cout << "u";
            for (int v : u) std::cout << ' ' << v;
            std::cout << "\n";
            return 0;
        }

        const auto inst = scit::parse_biqmac_file(instance_path);
        cfg.gamma = parse_gamma(gamma_text);
        cfg.backend = backend == "exact" ? scit::BackendKind::Exact
                                         : scit::BackendKind::Dnn;
        cfg.split_rule = split == "interleave" ? scit::SplitRule::Interleave
                                               : scit::SplitRule::SeededRandom;
        cfg.instance_name =
            std::filesystem::path(instance_path).stem().string();
        if (!incumbent_path.empty())
            cfg.incumbent = read_binary_vector(incumbent_path);

        if (eta_from_oracle)
            cfg.eta = scit::brute_force_optimum(inst, cfg.enum_limit).zeta;
        else if (eta_opt->count() > 0)
            cfg.eta = eta;
        else {
            std::cerr << "either --eta or --eta-from-oracle is required\n";
            return 3;
        }

        const scit::Report report = scit::run(inst, cfg);

        const std::string rendered = scit::emit_report(
            report, format == "json" ? scit::ReportFormat::Json
                                     : scit::ReportFormat::Table);
        if (!out_path.empty()) {
            std::ofstream out(out_path);
            if (!out) throw scit::Error("cannot write " + out_path);
            out << scit::emit_report(report, scit::ReportFormat::Json);
            if (format == "table") std::cout << rendered;
        } else {
            std::cout << rendered;
        }

        switch (report.status) {
            case scit::RunStatus::Closed: return 0;
            case scit::RunStatus::NotClosed: return 1;
            case scit::RunStatus::Contradiction:
                std::cerr << "contradiction: " << report.note << "\n";
                return 2;
        }
        return 1;
    } catch (const scit::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
