#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(GERMKIT_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) r.output += buf.data();
    int status = pclose(pipe);
    r.exit_code = WEXITSTATUS(status);
    return r;
}

std::string germ(const std::string& name) {
    return std::string(GERMKIT_SOURCE_DIR) + "/germs/" + name;
}

std::string strip_timing(std::string s) {
    // remove the timing_ms line/field wherever it appears
    std::string out;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t nl = s.find('\n', pos);
        if (nl == std::string::npos) nl = s.size();
        std::string line = s.substr(pos, nl - pos);
        if (line.find("timing_ms") == std::string::npos) out += line + "\n";
        pos = nl + 1;
    }
    return out;
}

}  // namespace

TEST_CASE("cli: nicedim") {
    RunResult r = run("nicedim 9 9");
    CHECK(r.exit_code == 0);
    CHECK(r.output == "BoundaryNice, sigma=9\n");
    CHECK(run("nicedim 8 8").output == "Nice, sigma=9\n");
    CHECK(run("nicedim 10 7").output == "BoundaryNice, sigma=10 (exceptional pair)\n");
    CHECK(run("nicedim 2 5").output == "Nice, sigma=31\n");
}

TEST_CASE("cli: codim on the Thom family reports 10 and the exceptional factors") {
    RunResult r = run("codim --group K --json " + germ("thom99.germ"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"value\": 10") != std::string::npos);
    CHECK(r.output.find("exceptional_pivot_factors") != std::string::npos);
}

TEST_CASE("cli: determinacy and stability") {
    CHECK(run("determinacy --group A " + germ("cusp.germ")).exit_code == 0);
    RunResult s = run("stability --json " + germ("cusp.germ"));
    CHECK(s.exit_code == 0);
    CHECK(s.output.find("\"stable\": true") != std::string::npos);
}

TEST_CASE("cli: analyze plane germs") {
    RunResult r = run("analyze --json " + germ("fold.germ"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"plane_type\": \"Fold\"") != std::string::npos);
}

TEST_CASE("cli: usage errors exit 2") {
    CHECK(run("codim --group Q " + germ("fold.germ")).exit_code == 2);
    CHECK(run("codim --group K /no/such/file.germ").exit_code == 2);
}

TEST_CASE("cli: undecided computations exit 1") {
    // the zero germ cannot be certified finitely determined
    std::string tmp = std::string(GERMKIT_SOURCE_DIR) + "/build_test_zero.germ";
    {
        FILE* f = fopen(tmp.c_str(), "w");
        REQUIRE(f != nullptr);
        fputs("vars = x\nmap = x^2 - x^2 + 0\n", f);
        fclose(f);
    }
    // map must be rejected: constant-free zero map parses but never certifies
    RunResult r = run("codim --group K " + tmp);
    CHECK(r.exit_code == 1);
    std::remove(tmp.c_str());
}

TEST_CASE("cli: germ file diagnostics carry line numbers") {
    std::string tmp = std::string(GERMKIT_SOURCE_DIR) + "/build_test_bad.germ";
    {
        FILE* f = fopen(tmp.c_str(), "w");
        REQUIRE(f != nullptr);
        fputs("vars = x y\nmap = x + 1 ; y\n", f);
        fclose(f);
    }
    RunResult r = run("codim --group K " + tmp);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find(":2:") != std::string::npos);  // constant term rejected at the map line
    std::remove(tmp.c_str());
}

TEST_CASE("cli: byte-deterministic json modulo the timing field") {
    RunResult a = run("codim --group K --json " + germ("b23.germ"));
    RunResult b = run("codim --group K --json " + germ("b23.germ"));
    CHECK(strip_timing(a.output) == strip_timing(b.output));
    CHECK(a.exit_code == 0);
}

TEST_CASE("cli: ideal-check and trivialize") {
    RunResult r = run("ideal-check --power 3 --at l=3 " + germ("thom99.germ"));
    CHECK(r.exit_code == 1);  // the three quadrics alone do not span M^3
    RunResult r2 = run("trivialize --group A --order 3 --time t " + germ("thom_family_t.germ"));
    CHECK(r2.exit_code == 1);  // no certificate across the excluded value t = 0
    RunResult r3 = run("trivialize --lipschitz --time t --at t=3 " + germ("thom_family_t.germ"));
    CHECK(r3.exit_code == 0);
}

TEST_CASE("cli: atlas-verify single table") {
    RunResult r = run("atlas-verify --table StableNP8 --jobs 2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("FAIL") == std::string::npos);
    CHECK(r.output.find("all rows PASS") != std::string::npos);
}

TEST_CASE("cli: unfold golden values") {
    std::string tmp = std::string(GERMKIT_SOURCE_DIR) + "/build_test_a3.germ";
    {
        FILE* f = fopen(tmp.c_str(), "w");
        REQUIRE(f != nullptr);
        fputs("vars = x\nmap = x^4\n", f);
        fclose(f);
    }
    RunResult r = run("unfold --json " + tmp);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"r\": 2") != std::string::npos);  // A_3 unfolds with u1 x + u2 x^2
    std::remove(tmp.c_str());
}

TEST_CASE("cli: classify golden values") {
    RunResult r = run("classify --json " + germ("b23.germ"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("B+_{p,q}") != std::string::npos);
}

TEST_CASE("cli: open-orbit subcommand") {
    RunResult r = run("open-orbit 9 9 --at l=3");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("open-orbit condition holds") != std::string::npos);
    RunResult bad = run("open-orbit 9 9 --at l=1");
    CHECK(bad.exit_code == 2);  // excluded modulus rejected with the witness factor
    CHECK(bad.output.find("l^3 - 1") != std::string::npos);
}

TEST_CASE("cli: echo round-trips the germ file") {
    RunResult r = run("analyze --echo " + germ("thom99.germ"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("vars = x y z") != std::string::npos);
    CHECK(r.output.find("params = l") != std::string::npos);
    // echo output parses back to the same germ
    std::string tmp = std::string(GERMKIT_SOURCE_DIR) + "/build_test_echo.germ";
    {
        FILE* f = fopen(tmp.c_str(), "w");
        REQUIRE(f != nullptr);
        fputs(r.output.c_str(), f);
        fclose(f);
    }
    RunResult r2 = run("analyze --echo " + tmp);
    CHECK(r2.output == r.output);
    std::remove(tmp.c_str());
}

TEST_CASE("cli: nicedim json shape") {
    RunResult r = run("nicedim 9 9 --json");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"class\": \"BoundaryNice\"") != std::string::npos);
    CHECK(r.output.find("\"sigma\": 9") != std::string::npos);
}
