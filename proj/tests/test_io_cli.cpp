#include "catch_amalgamated.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

#include "cfgf/io.hpp"

using namespace cfgf;

namespace {

// Runs the CLI binary, captures stdout+stderr, returns the exit code.
int run_cmd(const std::string& args, std::string* output = nullptr) {
    const std::string out_file = "io_cli_capture.txt";
    const std::string cmd =
        std::string(CFGF_BIN_PATH) + " " + args + " > " + out_file + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (output) *output = read_text_file(out_file);
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
}

}  // namespace

TEST_CASE("fnv1a64 matches the published test vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("format helpers") {
    CHECK(format_g17(50.0) == "50");
    const double third = 1.0 / 3.0;
    CHECK(std::stod(format_g17(third)) == third);  // %.17g round-trips
    CHECK(hex64(0) == "0000000000000000");
    CHECK(hex64(0xdeadbeefull) == "00000000deadbeef");
}

TEST_CASE("manifest digest covers configuration and nothing else") {
    RunManifest m;
    m.subcommand = "count";
    m.argv = {"cfgf", "count", "--n", "2"};
    m.master_seed = 7;
    m.parameters = {{"n", "2"}, {"s", "1"}, {"L", "400"}};
    const std::uint64_t d = m.digest();

    RunManifest same = m;
    same.wall_time_seconds = 123.0;            // excluded
    same.output_digests = {{"x.csv", "00"}};   // excluded
    same.argv = {"cfgf", "count", "--n", "2", "--out", "elsewhere.csv"};
    CHECK(same.digest() == d);                 // replay to a new path reproduces

    RunManifest other = m;
    other.parameters["L"] = "401";
    CHECK(other.digest() != d);
    other = m;
    other.master_seed = 8;
    CHECK(other.digest() != d);
    other = m;
    other.subcommand = "scaling";
    CHECK(other.digest() != d);
}

TEST_CASE("manifest json round trip") {
    RunManifest m;
    m.subcommand = "barrier";
    m.argv = {"cfgf", "barrier", "--rho", "12"};
    m.master_seed = 0x243F6A8885A308D3ull;
    m.parameters = {{"rho", "12"}, {"seeds", "50"}};
    m.wall_time_seconds = 1.5;
    m.output_digests = {{"b.csv", "0011223344556677"}};
    const auto back = RunManifest::from_json_text(m.to_json());
    CHECK(back.subcommand == m.subcommand);
    CHECK(back.argv == m.argv);
    CHECK(back.master_seed == m.master_seed);
    CHECK(back.parameters == m.parameters);
    CHECK(back.version_tag == m.version_tag);
    CHECK(back.wall_time_seconds == m.wall_time_seconds);
    CHECK(back.output_digests == m.output_digests);
    CHECK(back.digest() == m.digest());
    CHECK_THROWS_AS(RunManifest::from_json_text("not json"), ParamError);
    CHECK_THROWS_AS(RunManifest::from_json_text("{}"), ParamError);
}

TEST_CASE("table rendering") {
    Table t;
    t.columns = {"L", "q"};
    t.add_row({100.0, 0.5});
    t.add_row({400.0, 1.0 / 3.0});
    const std::string csv = render_csv(t, 0xabcull);
    CHECK(csv ==
          "# manifest 0000000000000abc\n"
          "L,q\n"
          "100,0.5\n"
          "400,0.33333333333333331\n");
    const auto j = nlohmann::json::parse(render_json(t, 0xabcull));
    CHECK(j["manifest_digest"] == "0000000000000abc");
    CHECK(j["columns"] == std::vector<std::string>{"L", "q"});
    CHECK(j["rows"].size() == 2);
    CHECK(j["rows"][1][1].get<double>() == 1.0 / 3.0);
    CHECK_THROWS_AS(t.add_row({1.0}), ParamError);
}

TEST_CASE("cli: error paths use distinct exit codes with one-line reasons") {
    std::string out;
    CHECK(run_cmd("sample --n 2 --s 2 --L 50", &out) == 3);  // supercritical
    CHECK(out.substr(0, 14) == "error: regime:");
    CHECK(out.find('\n') == out.size() - 1);  // exactly one line

    CHECK(run_cmd("count --bogus-flag", &out) == 2);
    CHECK(out.substr(0, 13) == "error: usage:");

    CHECK(run_cmd("scaling --regime subcritical --n 2 --s 1.7 "
                  "--L-grid 20:80:2 --seeds 3",
                  &out) == 3);
    CHECK(out.substr(0, 14) == "error: regime:");

    CHECK(run_cmd("scaling --regime critical --n 2 --L-grid bad --seeds 3",
                  &out) == 6);
    CHECK(out.substr(0, 13) == "error: param:");

    CHECK(run_cmd("barrier --L-grid 400:400:1 --rho 0.05 --seeds 5", &out) == 5);
    CHECK(out.substr(0, 18) == "error: resolution:");

    CHECK(run_cmd("detcheck --m 9 --a 3 --samples 1000", &out) == 4);
    CHECK(out.substr(0, 16) == "error: capacity:");
}

TEST_CASE("cli: detcheck and constants reference values") {
    std::string out;
    CHECK(run_cmd("detcheck --m 4 --a 3 --samples 50000", &out) == 0);
    CHECK(out.find("m,a,wick,mc_value") != std::string::npos);
    CHECK(out.find("\n4,3,0,") != std::string::npos);  // wick exactly zero

    CHECK(run_cmd("constants --n 2 --samples 20000", &out) == 0);
    // c_2 = 1/(4 pi) and C_2 = 1/(8 pi^(3/2))
    CHECK(out.find("0.079577471545947673") != std::string::npos);
    CHECK(out.find("0.02244839026564582") != std::string::npos);
}

TEST_CASE("cli: identical configurations give identical artifacts") {
    std::string out;
    REQUIRE(run_cmd("scaling --regime critical --n 2 --L-grid 100:400:2 "
                    "--seeds 5 --out io_cli_s1.csv",
                    &out) == 0);
    REQUIRE(run_cmd("scaling --regime critical --n 2 --L-grid 100:400:2 "
                    "--seeds 5 --out io_cli_s2.csv",
                    &out) == 0);
    const auto s1 = read_text_file("io_cli_s1.csv");
    CHECK(s1 == read_text_file("io_cli_s2.csv"));
    CHECK(s1.substr(0, 11) == "# manifest ");

    // thread count changes neither the rows nor the digest
    REQUIRE(run_cmd("scaling --regime critical --n 2 --L-grid 100:400:2 "
                    "--seeds 5 --threads 3 --out io_cli_s3.csv",
                    &out) == 0);
    CHECK(s1 == read_text_file("io_cli_s3.csv"));
}

TEST_CASE("cli: manifest replay reproduces the artifact byte-identically") {
    std::string out;
    REQUIRE(run_cmd("count --n 2 --s 1 --L 100 --rho 20 --out io_cli_c1.csv",
                    &out) == 0);
    const auto manifest_text = read_text_file("io_cli_c1.csv.manifest.json");
    const auto m = RunManifest::from_json_text(manifest_text);
    CHECK(m.subcommand == "count");
    CHECK(m.version_tag == kVersionTag);

    // the CSV header digest matches the manifest digest
    const auto csv = read_text_file("io_cli_c1.csv");
    CHECK(csv.substr(11, 16) == hex64(m.digest()));
    // the recorded output digest matches the file bytes
    CHECK(m.output_digests.at("io_cli_c1.csv") == hex64(fnv1a64(csv)));

    REQUIRE(run_cmd("replay --manifest io_cli_c1.csv.manifest.json "
                    "--out io_cli_c2.csv",
                    &out) == 0);
    CHECK(read_text_file("io_cli_c2.csv") == csv);

    // json format carries the same digest (same configuration)
    REQUIRE(run_cmd("count --n 2 --s 1 --L 100 --rho 20 --format json "
                    "--out io_cli_c1.json",
                    &out) == 0);
    const auto j = nlohmann::json::parse(read_text_file("io_cli_c1.json"));
    CHECK(j["manifest_digest"] == hex64(m.digest()));
}

TEST_CASE("cli: fkg orthant and instances pass") {
    std::string out;
    CHECK(run_cmd("fkg --instances 3 --samples 20000", &out) == 0);
    CHECK(out.find("instance,dim,p_ab") != std::string::npos);
    // four data rows: orthant reference plus three instances, all pass
    CHECK(out.find(",0\n") == std::string::npos);  // no pass=0 rows
}
