/*
 * Copyright 2026 the dkh authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <string>

namespace {

struct CliResult {
    int exit_code;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    std::string command = std::string(DKH_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buffer[512];
    while (std::size_t got = fread(buffer, 1, sizeof buffer, pipe))
        out.append(buffer, got);
    int status = pclose(pipe);
    return CliResult{WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string model(const char* name) { return std::string(DKH_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("check exit codes: 0 true, 1 false, 2 error") {
    CHECK(run_cli("check -m " + model("ex5.model.json") + " -f \"Kh{0,1}(~p & ~q)\" -s s_pq")
              .exit_code == 0);
    CHECK(run_cli("check -m " + model("ex5.model.json") + " -f \"Kh{0}~p\" -s s_pq").exit_code ==
          1);
    CHECK(run_cli("check -m " + model("ex5.model.json") + " -f \"p &\" -s s_pq").exit_code == 2);
    CHECK(run_cli("check -m /no/such/file -f p").exit_code == 2);
    CHECK(run_cli("check -m " + model("ex5.model.json") + " -f p -s nowhere").exit_code == 2);
    // Group beyond the model's agents is a validation error.
    CHECK(run_cli("check -m " + model("ex5.model.json") + " -f \"K{7}p\" -s s_pq").exit_code == 2);
}

TEST_CASE("check without a state prints one line per state") {
    CliResult all = run_cli("check -m " + model("ex3.model.json") + " -f q");
    CHECK(all.exit_code == 1);  // not true everywhere
    CHECK(all.out == "s_pq: true\ns_pnq: false\ns_npq: true\ns_npnq: false\n");
    CHECK(run_cli("check -m " + model("ex3.model.json") + " -f \"p | ~p\"").exit_code == 0);
}

TEST_CASE("closure handles the empty group flag") {
    CliResult empty = run_cli("closure -m " + model("ex4.model.json") + " -g \"\"");
    CHECK(empty.exit_code == 0);
    CHECK(empty.out.empty());
}

TEST_CASE("synth reports missing strategies with exit 1") {
    CliResult none =
        run_cli("synth -m " + model("ex5.model.json") + " -s s_pq -g 0 -f \"~p\"");
    CHECK(none.exit_code == 1);
    CHECK(none.out == "no strategy\n");
}

TEST_CASE("synth output feeds verify") {
    std::string tmp = "/tmp/dkh_cli_test_" + std::to_string(getpid()) + ".strategy";
    CHECK(run_cli("synth -m " + model("ex3.model.json") + " -s s_pq -g 0,1 -f \"~p & ~q\" -o " +
                  tmp)
              .exit_code == 0);
    CliResult verify = run_cli("verify -m " + model("ex3.model.json") + " -g 0,1 --strategy " +
                               tmp + " -s s_pq -f \"~p & ~q\"");
    std::remove(tmp.c_str());
    CHECK(verify.exit_code == 0);
    CHECK(verify.out.find("terminating: true") != std::string::npos);
    CHECK(verify.out.find("success: true") != std::string::npos);
}

TEST_CASE("prove exit codes") {
    CHECK(run_cli("prove " + model("monokh.prf")).exit_code == 0);

    std::string tmp = "/tmp/dkh_cli_test_" + std::to_string(getpid()) + ".prf";
    std::ofstream(tmp) << "1: p -> q ; TAUT\n";
    CliResult bad = run_cli("prove " + tmp);
    CHECK(bad.exit_code == 1);
    CHECK(bad.out.find("1: FAIL") != std::string::npos);
    std::ofstream(tmp) << "1: p -> q TAUT\n";  // missing ';'
    CHECK(run_cli("prove " + tmp).exit_code == 2);
    std::remove(tmp.c_str());
}

TEST_CASE("counter exit codes") {
    CHECK(run_cli("counter --schema khconj --seed 7 --budget 10000").exit_code == 0);
    CHECK(run_cli("counter --schema AxKhbot --seed 7 --budget 100").exit_code == 1);
    CHECK(run_cli("counter --schema \"p & (\" --seed 7 --budget 100").exit_code == 2);
}

TEST_CASE("fuzz exits clean on a small sweep") {
    CliResult sweep = run_cli("fuzz --seed 5 --models 20 --instances 1");
    CHECK(sweep.exit_code == 0);
    CHECK(sweep.out.find("\"violations\": []") != std::string::npos);
}
