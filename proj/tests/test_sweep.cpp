#include "iga/sweep.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace iga;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content)
{
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream(p) << content;
    return p;
}

std::vector<std::string> read_lines(const fs::path& p)
{
    std::ifstream in(p);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::string strip_timing(const std::string& csv_line)
{
    // drop the last two comma-separated fields (assembly_ms, analysis_ms)
    auto pos = csv_line.rfind(',');
    pos = csv_line.rfind(',', pos - 1);
    return csv_line.substr(0, pos);
}

}  // namespace

TEST_CASE("config parsing")
{
    SECTION("minimal file fills the defaults")
    {
        const auto p = write_temp("iga_min.json", R"({"p":[2],"h_den":[3],"k":"min"})");
        const SweepSpec spec = parse_config(p.string());
        CHECK(spec.p == std::vector<int>{2});
        CHECK(spec.h_den == std::vector<int>{3});
        REQUIRE(spec.k.size() == 1);
        CHECK(spec.k[0].resolve(5) == 1);
        CHECK(spec.dt == std::vector<double>{0.1, 0.01});
        CHECK(spec.beta == std::vector<double>{0.0, 0.5});
        CHECK(spec.gamma == 0.5);
        CHECK(spec.c0 == 1.0);
        REQUIRE(spec.bc.size() == 1);
        CHECK(spec.bc[0] == BoundaryCondition::Dirichlet);
        REQUIRE(spec.targets.size() == 1);
        CHECK(spec.targets[0] == MatrixTarget::Stiffness);
        CHECK(spec.analyses.cond);
        CHECK_FALSE(spec.analyses.eig);
    }
    SECTION("k=max resolves per degree")
    {
        const auto p = write_temp("iga_max.json", R"({"p":[2,4],"h_den":[3],"k":"max"})");
        const SweepSpec spec = parse_config(p.string());
        CHECK(spec.k[0].resolve(2) == 1);
        CHECK(spec.k[0].resolve(4) == 3);
    }
    SECTION("figure-style mass replication enumerates 50 configurations")
    {
        const auto p = write_temp("iga_fig1.json",
                                  R"({"p":[2,4,6,8,10],"h_den":[3,5,7,9,11],"k":["min","max"],
                                      "target":"mass"})");
        const SweepSpec spec = parse_config(p.string());
        CHECK(enumerate_configs(spec).size() == 50);
    }
    SECTION("default stiffness spec multiplies the dt and beta lists")
    {
        const auto p = write_temp("iga_stiff.json", R"({"p":[2],"h_den":[3],"k":"min"})");
        CHECK(enumerate_configs(parse_config(p.string())).size() == 4);
    }
    SECTION("invalid regularity lists the offenders")
    {
        const auto p = write_temp("iga_badk.json", R"({"p":[2,3],"h_den":[3],"k":5})");
        CHECK_THROWS_WITH(parse_config(p.string()),
                          Catch::Matchers::ContainsSubstring("(p=2,k=5)") &&
                              Catch::Matchers::ContainsSubstring("(p=3,k=5)"));
    }
    SECTION("malformed json reports the line")
    {
        const auto p = write_temp("iga_badjson.json", "{\n\"p\": [2],\n\"h_den\": oops\n}");
        CHECK_THROWS_WITH(parse_config(p.string()), Catch::Matchers::ContainsSubstring("line 3"));
    }
    SECTION("unknown keys are rejected")
    {
        const auto p = write_temp("iga_unknown.json", R"({"p":[2],"h_den":[3],"k":1,"dx":[1]})");
        CHECK_THROWS_WITH(parse_config(p.string()), Catch::Matchers::ContainsSubstring("dx"));
    }
}

TEST_CASE("thread count resolution")
{
    unsetenv("IGA_SPECTRA_THREADS");
    CHECK(resolve_thread_count(3) == 3);
    setenv("IGA_SPECTRA_THREADS", "2", 1);
    CHECK(resolve_thread_count(8) == 2);
    setenv("IGA_SPECTRA_THREADS", "junk", 1);
    CHECK(resolve_thread_count(5) == 5);
    unsetenv("IGA_SPECTRA_THREADS");
}

TEST_CASE("sweep execution")
{
    SECTION("single mass config produces one row with cond >= 1")
    {
        SweepSpec spec;
        spec.p = {2};
        spec.h_den = {3};
        spec.k = {{KSelector::Kind::Min, 0}};
        spec.targets = {MatrixTarget::Mass};
        spec.out_dir = (fs::temp_directory_path() / "iga_sweep_single").string();
        const RunLedger ledger = run_sweep(spec, 1);
        REQUIRE(ledger.entries.size() == 1);
        CHECK(ledger.entries[0].status == "ok");
        CHECK(ledger.entries[0].report.cond_est >= 1.0);
        const auto lines = read_lines(fs::path(spec.out_dir) / "results.csv");
        REQUIRE(lines.size() == 2);
        CHECK(lines[0] == kResultsCsvHeader);
    }
    SECTION("reruns are byte-identical up to timing columns")
    {
        SweepSpec spec;
        spec.p = {2, 3};
        spec.h_den = {3, 4};
        spec.k = {{KSelector::Kind::Min, 0}, {KSelector::Kind::Max, 0}};
        spec.dt = {0.1};
        spec.beta = {0.5};
        spec.bc = {BoundaryCondition::Neumann};
        spec.analyses = {true, true, true};
        spec.out_dir = (fs::temp_directory_path() / "iga_sweep_a").string();
        const RunLedger l1 = run_sweep(spec, 4);
        const auto lines1 = read_lines(fs::path(spec.out_dir) / "results.csv");
        spec.out_dir = (fs::temp_directory_path() / "iga_sweep_b").string();
        const RunLedger l2 = run_sweep(spec, 1);
        const auto lines2 = read_lines(fs::path(spec.out_dir) / "results.csv");
        REQUIRE(lines1.size() == lines2.size());
        CHECK(lines1.size() == 9);  // header + 2*2*2 configs
        for (std::size_t i = 1; i < lines1.size(); ++i)
            CHECK(strip_timing(lines1[i]) == strip_timing(lines2[i]));
        // eigen and spy dumps must be byte-identical outright
        REQUIRE(l1.entries.size() == l2.entries.size());
        for (const auto& e1 : l1.entries)
            for (const auto& f1 : e1.outputs) {
                const fs::path p1(f1);
                const fs::path p2 = fs::path(spec.out_dir) / p1.filename();
                CHECK(read_lines(p1) == read_lines(p2));
            }
    }
    SECTION("ledger covers the whole product, failures do not stop the sweep")
    {
        SweepSpec spec;
        spec.p = {2};
        spec.h_den = {3, 5};
        spec.k = {{KSelector::Kind::Min, 0}};
        spec.dt = {0.1};
        spec.beta = {0.0};
        spec.out_dir = (fs::temp_directory_path() / "iga_sweep_count").string();
        const RunLedger ledger = run_sweep(spec, 2);
        CHECK(ledger.entries.size() == 2);
        CHECK(ledger.count_status("ok") == 2);
    }
}

TEST_CASE("report emission")
{
    SECTION("empty ledger warns and still writes the bundle")
    {
        SweepSpec spec;
        spec.out_dir = (fs::temp_directory_path() / "iga_report_empty").string();
        const std::string summary = emit_report(RunLedger{}, spec);
        CHECK(summary.find("warning") != std::string::npos);
        CHECK(fs::exists(fs::path(spec.out_dir) / "report_summary.txt"));
    }
    SECTION("cond-vs-k bundle shows the spike next to maximal regularity")
    {
        // coarsest mesh at p=12: the near-polynomial space drives the spike
        SweepSpec spec;
        spec.p = {12};
        spec.h_den = {3};
        spec.k = {{KSelector::Kind::Explicit, 9}, {KSelector::Kind::Explicit, 10}};
        spec.targets = {MatrixTarget::Mass};
        spec.out_dir = (fs::temp_directory_path() / "iga_report_k").string();
        const RunLedger ledger = run_sweep(spec, 2);
        emit_report(ledger, spec);
        REQUIRE(ledger.entries.size() == 2);
        const double cond_k9 = ledger.entries[0].report.cond_est;
        const double cond_k10 = ledger.entries[1].report.cond_est;
        CHECK(cond_k10 > cond_k9);
        const auto lines = read_lines(fs::path(spec.out_dir) / "report_cond_vs_k.csv");
        REQUIRE(lines.size() == 3);
        CHECK(lines[0] == "target,bc,p,h_den,dt,beta,k,cond_est");
        const auto ledger_lines = read_lines(fs::path(spec.out_dir) / "report_ledger.csv");
        REQUIRE(ledger_lines.size() == 3);
        CHECK(ledger_lines[1] == "mass_dirichlet_p12_k9_h3,ok,");
    }
    SECTION("exponent table for the neumann implicit small-step maximal-regularity series")
    {
        SweepSpec spec;
        spec.p = {2, 3, 4, 5, 6, 7, 8, 9, 10};
        spec.h_den = {5};
        spec.k = {{KSelector::Kind::Max, 0}};
        spec.dt = {0.01};
        spec.beta = {0.5};
        spec.bc = {BoundaryCondition::Neumann};
        spec.out_dir = (fs::temp_directory_path() / "iga_report_alpha").string();
        const RunLedger ledger = run_sweep(spec, 0);
        const std::string summary = emit_report(ledger, spec);
        CHECK(summary.find("alpha=") != std::string::npos);
        std::vector<int> ps;
        std::vector<double> conds;
        for (const auto& e : ledger.entries) {
            ps.push_back(e.config.p);
            conds.push_back(e.report.cond_est);
        }
        const double alpha = fit_p_alpha(ps, conds);
        // the published trend for this series is 4^p; measured growth runs a
        // little hotter at desk scale
        CHECK(alpha > 1.0);
        CHECK(alpha < 1.45);
    }
}
