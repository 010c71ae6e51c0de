#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include "scit/biqmac.hpp"
#include "scit/engine.hpp"
#include "scit/oracle.hpp"
#include "scit/report.hpp"
#include "subprocess.hpp"
#include "testutil.hpp"

using namespace scit;

TEST_CASE("parse_biqmac applies the negation convention") {
    std::istringstream in("3 2\n1 1 5\n1 2 -3\n");
    const QuboInstance inst = parse_biqmac(in);
    REQUIRE(inst.m == 3);
    REQUIRE(inst.R(0, 0) == -5);
    REQUIRE(inst.R(0, 1) == 3);
    REQUIRE(inst.R(1, 0) == 3);
    REQUIRE(inst.R(2, 2) == 0);
    REQUIRE(inst.constant == 0);
}

TEST_CASE("parse_biqmac error paths") {
    SECTION("zero-based index") {
        std::istringstream in("3 1\n0 1 2\n");
        REQUIRE_THROWS_AS(parse_biqmac(in), IndexOutOfRange);
    }
    SECTION("index above n") {
        std::istringstream in("3 1\n1 4 2\n");
        REQUIRE_THROWS_AS(parse_biqmac(in), IndexOutOfRange);
    }
    SECTION("duplicate pair, transposed") {
        std::istringstream in("3 2\n1 2 2\n2 1 5\n");
        REQUIRE_THROWS_AS(parse_biqmac(in), DuplicateEntry);
    }
    SECTION("bad header") {
        std::istringstream in("x 2\n");
        REQUIRE_THROWS_AS(parse_biqmac(in), MalformedHeader);
    }
    SECTION("truncated entries") {
        std::istringstream in("3 2\n1 1 5\n");
        REQUIRE_THROWS_AS(parse_biqmac(in), MalformedHeader);
    }
}

TEST_CASE("negated maximization instance keeps bounds below -max") {
    // max x^T Q x with Q = [[2,1],[1,3]]: the all-ones point gives 7
    std::istringstream in("2 3\n1 1 2\n2 2 3\n1 2 1\n");
    const QuboInstance inst = parse_biqmac(in);
    const auto oracle = brute_force_optimum(inst);
    REQUIRE(oracle.zeta == -7);
    EngineConfig cfg;
    cfg.eta = oracle.zeta;
    const Report rep = run(inst, cfg);
    REQUIRE(rep.status == RunStatus::Closed);
    for (const auto& rec : rep.records) REQUIRE(rec.zeta_hat <= -7);
}

TEST_CASE("biqmac round-trip preserves the matrix") {
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = testutil::random_instance(1 + trial % 9, 999 + trial);
        std::ostringstream out;
        write_biqmac(out, inst);
        std::istringstream in(out.str());
        const auto back = parse_biqmac(in);
        REQUIRE(back.m == inst.m);
        REQUIRE(back.R == inst.R);
    }
}

namespace {

Report synthetic_report() {
    Report r;
    r.instance = "bqp100-1";
    r.m = 100;
    r.eta = -7970;
    r.backend = "dnn";
    r.seed = 1;
    r.max_iterations = 10;
    r.status = RunStatus::Closed;
    r.records.push_back({0, 100, -8036, 12, 58, 0.0});
    r.records.push_back({1, 42, -7970, 3, 70, 0.0});
    r.final_fixes.fix_u(3, 1);
    r.final_fixes.fix_u(9, 0);
    r.final_family.push_back({{1, 2}, 1, 0, 0});
    r.final_qubo.m = 2;
    r.final_qubo.R = IntMat::Zero(2, 2);
    r.final_qubo.R << 4, -1, -1, 0;
    r.final_qubo.constant = -12;
    return r;
}

}  // namespace

TEST_CASE("table cells mirror the `d, bound` layout") {
    const Report r = synthetic_report();
    const std::string cells = format_table_cells(r);
    REQUIRE(cells.substr(0, 22) == "100, -8036 | 42, -7970");
    // blank cells for the unreached iterations
    REQUIRE(cells == "100, -8036 | 42, -7970 |  |  |  |  |  |  |  | ");
    const std::string table = format_table(r);
    REQUIRE(table.find("bqp100-1 | -7970 | 100, -8036 | 42, -7970") !=
            std::string::npos);
}

TEST_CASE("empty record list renders a header-only table") {
    Report r;
    r.instance = "empty";
    r.max_iterations = 3;
    const std::string table = format_table(r);
    REQUIRE(table.find("k=0 | k=1 | k=2") != std::string::npos);
    REQUIRE(table.find("empty | 0 |  | ") != std::string::npos);
}

TEST_CASE("json report round-trips") {
    const Report r = synthetic_report();
    const auto j = report_to_json(r);
    const Report back = report_from_json(j);
    REQUIRE(back == r);
    REQUIRE(report_to_json(back).dump() == j.dump());
}

#ifdef SCIT_CLI_PATH

TEST_CASE("cli solve: closed run, byte-identical reports, exit codes") {
    const auto inst = testutil::random_instance(8, 271);
    std::ostringstream body;
    write_biqmac(body, inst);
    const auto path = testutil::write_file("cli_small.sparse", body.str());
    const auto oracle = brute_force_optimum(inst);
    const std::string base = std::string(SCIT_CLI_PATH) + " solve --instance " +
                             path.string() + " --seed 11";

    SECTION("closed at eta = zeta with exit code 0") {
        const auto res = testutil::run_command(
            base + " --eta " + std::to_string(oracle.zeta));
        REQUIRE(res.exit_code == 0);
        const auto j = ordered_json::parse(res.out);
        REQUIRE(j.at("status") == "Closed");
        REQUIRE(j.at("m") == 8);
    }

    SECTION("worker count does not change the bytes") {
        const std::string flags =
            base + " --eta " + std::to_string(oracle.zeta + 3);
        const auto one = testutil::run_command(flags + " --workers 1");
        const auto eight = testutil::run_command(flags + " --workers 8");
        REQUIRE(one.exit_code == 1);  // cannot close: NotClosed
        REQUIRE(one.out == eight.out);
        REQUIRE(!one.out.empty());
    }

    SECTION("identical flags give identical bytes") {
        const std::string flags =
            base + " --eta " + std::to_string(oracle.zeta + 1);
        const auto first = testutil::run_command(flags);
        const auto second = testutil::run_command(flags);
        REQUIRE(first.out == second.out);
    }

    SECTION("eta from the oracle closes too") {
        const auto res = testutil::run_command(base + " --eta-from-oracle");
        REQUIRE(res.exit_code == 0);
    }

    SECTION("table format") {
        const auto res = testutil::run_command(
            base + " --eta " + std::to_string(oracle.zeta) +
            " --format table");
        REQUIRE(res.exit_code == 0);
        REQUIRE(res.out.find("QUBO | eta | k=0") != std::string::npos);
        REQUIRE(res.out.find("cli_small | " + std::to_string(oracle.zeta)) !=
                std::string::npos);
    }

    SECTION("contradiction exits with 2") {
        const auto res = testutil::run_command(base + " --eta -100000");
        REQUIRE(res.exit_code == 2);
    }

    SECTION("missing eta is a usage error") {
        const auto res = testutil::run_command(base);
        REQUIRE(res.exit_code == 3);
    }

    SECTION("unreadable instance is an IO error") {
        const auto res = testutil::run_command(
            std::string(SCIT_CLI_PATH) +
            " solve --instance /nonexistent.sparse --eta 0");
        REQUIRE(res.exit_code == 4);
    }
}

TEST_CASE("cli oracle prints the exhaustive optimum") {
    const auto inst = testutil::random_instance(6, 4);
    std::ostringstream body;
    write_biqmac(body, inst);
    const auto path = testutil::write_file("cli_oracle.sparse", body.str());
    const auto expected = brute_force_optimum(inst);
    const auto res = testutil::run_command(std::string(SCIT_CLI_PATH) +
                                           " oracle --instance " +
                                           path.string());
    REQUIRE(res.exit_code == 0);
    REQUIRE(res.out.find("zeta " + std::to_string(expected.zeta)) !=
            std::string::npos);
}

#endif  // SCIT_CLI_PATH
