#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

const char* cli_path() {
    if (const char* p = std::getenv("TORICOUNT_CLI_PATH")) return p;
#ifdef TORICOUNT_CLI_PATH
    return TORICOUNT_CLI_PATH;
#else
    FAIL("set TORICOUNT_CLI_PATH to the toricount binary");
    return nullptr;
#endif
}

struct RunResult {
    int code = -1;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch_file(const std::string& stem) {
    static int seq = 0;
    return fs::temp_directory_path() /
           ("toricount_e2e_" + std::to_string(::getpid()) + "_" + std::to_string(seq++) +
            "_" + stem);
}

RunResult run_cli(const std::vector<std::string>& args) {
    fs::path op = scratch_file("stdout"), ep = scratch_file("stderr");
    std::string cmd = std::string("'") + cli_path() + "'";
    for (const auto& a : args) cmd += " '" + a + "'";
    cmd += " > '" + op.string() + "' 2> '" + ep.string() + "'";
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(op);
    r.err = slurp(ep);
    fs::remove(op);
    fs::remove(ep);
    return r;
}

fs::path write_fan_file(const std::string& stem, const ordered_json& j) {
    fs::path p = scratch_file(stem);
    std::ofstream f(p);
    f << j.dump(2) << "\n";
    return p;
}

ordered_json p2_json() {
    return ordered_json{{"name", "P2"},
                        {"dim", 2},
                        {"rays", {{1, 0}, {0, 1}, {-1, -1}}},
                        {"max_cones", {{0, 1}, {1, 2}, {2, 0}}}};
}

ordered_json hirzebruch3_json() {
    return ordered_json{{"name", "H3"},
                        {"dim", 2},
                        {"rays", {{1, 0}, {0, 1}, {-1, 3}, {0, -1}}},
                        {"max_cones", {{0, 1}, {1, 2}, {2, 3}, {3, 0}}}};
}

// projective 20-space: 21 rays, one past the sieve table's ray budget, while
// still being smooth, complete, and anticanonically globally generated
ordered_json p20_json() {
    const int n = 20;
    ordered_json jr = ordered_json::array(), jc = ordered_json::array();
    for (int i = 0; i < n; ++i) {
        std::vector<int> e(n, 0);
        e[i] = 1;
        jr.push_back(e);
    }
    jr.push_back(std::vector<int>(n, -1));
    for (int drop = 0; drop <= n; ++drop) {
        std::vector<int> cone;
        for (int j = 0; j <= n; ++j)
            if (j != drop) cone.push_back(j);
        jc.push_back(cone);
    }
    return ordered_json{{"name", "P20"}, {"dim", n}, {"rays", jr}, {"max_cones", jc}};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::string> data_rows(const std::string& csv) {
    std::vector<std::string> rows;
    for (const auto& line : split(csv, '\n'))
        if (!line.empty() && line[0] != '#' && line[0] != 'B') rows.push_back(line);
    return rows;
}

} // namespace

TEST_CASE("count: csv shape, reproducibility, seed independence") {
    std::vector<std::string> args{"count", "--fan", "P1xP1", "--field-D", "1",
                                  "--B",   "100,1000"};
    RunResult r = run_cli(args);
    REQUIRE(r.code == 0);
    CHECK(r.err.empty());
    auto lines = split(r.out, '\n');
    REQUIRE(lines.size() >= 6);
    CHECK(lines[0] == "# fan=P1xP1 D=1 r=2 h=1 omega=4");
    CHECK(lines[1].rfind("# C_numeric = ", 0) == 0);
    CHECK(lines[2].rfind("# C_interval = [", 0) == 0);
    CHECK(lines[3] == "B,N_direct,N_moebius,per_class_counts,seconds,predicted,ratio");
    auto rows = data_rows(r.out);
    REQUIRE(rows.size() == 2);
    auto f0 = split(rows[0], ',');
    REQUIRE(f0.size() == 7);
    CHECK(f0[0] == "100");
    CHECK(std::stol(f0[1]) > 0);
    CHECK(f0[2].empty()); // no sieved route requested
    CHECK(f0[4] == "0.000");
    double ratio = std::stod(f0[6]);
    CHECK(ratio > 0.1);
    CHECK(ratio < 10.0);
    auto f1 = split(rows[1], ',');
    CHECK(f1[0] == "1000");
    CHECK(std::stol(f1[1]) > std::stol(f0[1]));

    // byte-identical rerun, and the seed only drives the validation sampling
    CHECK(run_cli(args).out == r.out);
    std::vector<std::string> seeded = args;
    seeded.insert(seeded.end(), {"--seed", "999"});
    CHECK(run_cli(seeded).out == r.out);
    std::vector<std::string> sharded = args;
    sharded.insert(sharded.end(), {"--shards", "3"});
    CHECK(run_cli(sharded).out == r.out);
}

TEST_CASE("count: sieved column and class breakdown") {
    RunResult r = run_cli({"count", "--fan", "P1", "--field-D", "5", "--B", "20,60",
                           "--moebius"});
    REQUIRE(r.code == 0);
    auto rows = data_rows(r.out);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        auto f = split(row, ',');
        REQUIRE(f.size() == 7);
        CHECK(f[1] == f[2]); // the two routes agree
        auto cells = split(f[3], '|');
        REQUIRE(cells.size() == 2); // one cell per ideal class
        long total = std::stol(cells[0]) + std::stol(cells[1]);
        CHECK(total == 2 * std::stol(f[1])); // unit group of Q(sqrt(-5))
    }
}

TEST_CASE("count: timings column is the only nondeterminism") {
    RunResult r = run_cli({"count", "--fan", "P1", "--field-D", "1", "--B", "50",
                           "--timings"});
    REQUIRE(r.code == 0);
    auto f = split(data_rows(r.out)[0], ',');
    CHECK(std::stod(f[4]) > 0.0);
}

TEST_CASE("fan file and library fan produce identical reports") {
    fs::path p = write_fan_file("p2.json", p2_json());
    RunResult lib = run_cli({"count", "--fan", "P2", "--field-D", "1", "--B", "50"});
    RunResult file = run_cli({"count", "--fan-file", p.string(), "--field-D", "1",
                              "--B", "50"});
    fs::remove(p);
    REQUIRE(lib.code == 0);
    REQUIRE(file.code == 0);
    CHECK(lib.out == file.out);
}

TEST_CASE("constant: json payload and key order") {
    RunResult r = run_cli({"constant", "--fan", "P2", "--field-D", "5"});
    REQUIRE(r.code == 0);
    ordered_json j = ordered_json::parse(r.out);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"alpha", "kappa", "h", "omega", "disc", "N",
                                           "r", "max_cones", "C_numeric", "C_interval"});
    CHECK(j["alpha"] == "1/3");
    CHECK(j["h"] == 2);
    CHECK(j["omega"] == 2);
    CHECK(j["disc"] == 20);
    CHECK(j["N"] == 3);
    CHECK(j["r"] == 1);
    CHECK(j["max_cones"] == 3);
    CHECK(j["kappa"]["prime_norm_bound"] == 10000);
    REQUIRE(j["C_interval"].size() == 2);
    double lo = std::stod(j["C_interval"][0].get<std::string>());
    double hi = std::stod(j["C_interval"][1].get<std::string>());
    double mid = std::stod(j["C_numeric"].get<std::string>());
    CHECK(lo < mid);
    CHECK(mid < hi);
}

TEST_CASE("check: verdict json and exit codes") {
    RunResult ok = run_cli({"check", "--fan", "F2"});
    REQUIRE(ok.code == 0);
    ordered_json j = ordered_json::parse(ok.out);
    CHECK(j["ok"] == true);
    CHECK(j["r"] == 2);
    CHECK(j["f"] == 2);
    CHECK(j["globally_generated"] == true);
    CHECK(j["min_exponent"] == 0);

    // valid fan whose anticanonical class is not globally generated: check
    // passes (that gate belongs to the counting modes)
    fs::path h3 = write_fan_file("h3.json", hirzebruch3_json());
    RunResult h = run_cli({"check", "--fan-file", h3.string()});
    REQUIRE(h.code == 0);
    ordered_json jh = ordered_json::parse(h.out);
    CHECK(jh["ok"] == true);
    CHECK(jh["globally_generated"] == false);
    CHECK(jh["min_exponent"] == -1);

    ordered_json bad = hirzebruch3_json();
    bad["max_cones"] = {{0, 1}, {1, 2}, {2, 3}}; // drop a cone: not complete
    fs::path bp = write_fan_file("bad.json", bad);
    RunResult b = run_cli({"check", "--fan-file", bp.string()});
    CHECK(b.code == 3);
    CHECK(b.err.rfind("error: hypothesis:", 0) == 0);
    ordered_json jb = ordered_json::parse(b.out);
    CHECK(jb["ok"] == false);
    CHECK(jb["complete"] == false);

    RunResult cnt = run_cli({"count", "--fan-file", bp.string(), "--field-D", "1",
                             "--B", "10"});
    CHECK(cnt.code == 3);
    CHECK(cnt.err.rfind("error: hypothesis:", 0) == 0);
    RunResult cst = run_cli({"constant", "--fan-file", h3.string(), "--field-D", "1"});
    CHECK(cst.code == 3);
    CHECK(cst.err.find("not globally generated") != std::string::npos);
    fs::remove(h3);
    fs::remove(bp);
}

TEST_CASE("convergence: geometric ladder expansion") {
    RunResult r = run_cli({"convergence", "--fan", "P1", "--field-D", "1", "--B", "1000"});
    REQUIRE(r.code == 0);
    auto rows = data_rows(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(split(rows[0], ',')[0] == "10");
    CHECK(split(rows[1], ',')[0] == "100");
    CHECK(split(rows[2], ',')[0] == "1000");

    RunResult mid = run_cli({"convergence", "--fan", "P1", "--field-D", "1", "--B", "500"});
    auto mrows = data_rows(mid.out);
    REQUIRE(mrows.size() == 3);
    CHECK(split(mrows[2], ',')[0] == "500");

    RunResult small = run_cli({"convergence", "--fan", "P1", "--field-D", "1", "--B", "5"});
    CHECK(data_rows(small.out).size() == 1);

    RunResult expl = run_cli({"convergence", "--fan", "P1", "--field-D", "1", "--B", "10,30"});
    CHECK(data_rows(expl.out).size() == 2);
}

TEST_CASE("configuration failures exit with code 2") {
    auto expect_config = [](const std::vector<std::string>& args) {
        RunResult r = run_cli(args);
        INFO("args:" << [&] {
            std::string s;
            for (const auto& a : args) s += " " + a;
            return s;
        }());
        CHECK(r.code == 2);
        CHECK(r.err.rfind("error: config:", 0) == 0);
    };
    expect_config({"count", "--fan", "NOPE", "--field-D", "1", "--B", "10"});
    expect_config({"count", "--fan", "P1", "--field-D", "1", "--B", "abc"});
    expect_config({"count", "--fan", "P1", "--field-D", "1", "--B", "50,20"});
    expect_config({"count", "--fan", "P1", "--field-D", "1", "--B", "0"});
    expect_config({"count", "--fan", "P1", "--field-D", "12", "--B", "10"});
    expect_config({"count", "--field-D", "1", "--B", "10"});           // no fan source
    expect_config({"count", "--fan", "P1", "--B", "10"});              // missing field
    expect_config({"constant", "--fan", "P1"});
    expect_config({"nonsense"});

    fs::path p = write_fan_file("p2.json", p2_json());
    expect_config({"count", "--fan", "P2", "--fan-file", p.string(), "--field-D", "1",
                   "--B", "10"});
    ordered_json extra = p2_json();
    extra["color"] = "blue";
    fs::path px = write_fan_file("extra.json", extra);
    expect_config({"check", "--fan-file", px.string()});
    fs::path garbled = scratch_file("garbled.json");
    std::ofstream(garbled) << "{nope";
    expect_config({"check", "--fan-file", garbled.string()});
    expect_config({"check", "--fan-file", (garbled.string() + ".missing")});
    fs::remove(p);
    fs::remove(px);
    fs::remove(garbled);
}

TEST_CASE("oversized fan trips the budget gate") {
    fs::path p = write_fan_file("p20.json", p20_json());
    RunResult chk = run_cli({"check", "--fan-file", p.string()});
    CHECK(chk.code == 0); // the fan itself is fine
    RunResult r = run_cli({"constant", "--fan-file", p.string(), "--field-D", "1"});
    CHECK(r.code == 4);
    CHECK(r.err.rfind("error: budget:", 0) == 0);
    fs::remove(p);
}

TEST_CASE("output file handling") {
    fs::path out = scratch_file("report.csv");
    RunResult direct = run_cli({"count", "--fan", "P1", "--field-D", "1", "--B", "25"});
    RunResult filed = run_cli({"count", "--fan", "P1", "--field-D", "1", "--B", "25",
                               "--out", out.string()});
    REQUIRE(filed.code == 0);
    CHECK(filed.out.empty());
    CHECK(slurp(out) == direct.out);
    fs::remove(out);

    // failures upstream of report assembly must not leave files behind
    fs::path never = scratch_file("never.csv");
    RunResult bad = run_cli({"count", "--fan", "P1", "--field-D", "1", "--B", "9,3",
                             "--out", never.string()});
    CHECK(bad.code == 2);
    CHECK_FALSE(fs::exists(never));

    RunResult unwritable = run_cli({"check", "--fan", "P1", "--out", "/"});
    CHECK(unwritable.code == 2);
}
