#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

#ifndef DIAGFORGE_CLI_PATH
#error "DIAGFORGE_CLI_PATH must point at the built binary"
#endif

namespace {

using Json = nlohmann::ordered_json;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& stdin_data = "") {
  std::string in_file = "/tmp/diagforge_cli_in.json";
  std::string cmd = std::string(DIAGFORGE_CLI_PATH) + " " + args;
  if (!stdin_data.empty()) {
    std::ofstream f(in_file);
    f << stdin_data;
    f.close();
    cmd += " < " + in_file;
  }
  cmd += " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("flatten emits the constant trace diagonal") {
  Json in;
  in["matrix"] = Json::array(
      {Json::array({Json::array({0.0, 0.0}), Json::array({0.0, 0.0}),
                    Json::array({0.0, 0.0})}),
       Json::array({Json::array({0.0, 0.0}), Json::array({1.0, 0.0}),
                    Json::array({0.0, 0.0})}),
       Json::array({Json::array({0.0, 0.0}), Json::array({0.0, 0.0}),
                    Json::array({0.0, 1.0})})});
  RunResult r = run_cli("flatten", in.dump());
  REQUIRE(r.exit_code == 0);
  Json rep = Json::parse(r.out);
  CHECK(rep["dim"] == 3);
  CHECK(rep["max_deviation"].get<double>() < 1e-10);
  double tre = rep["trace"][0].get<double>();
  double tim = rep["trace"][1].get<double>();
  CHECK(tre == doctest::Approx(1.0 / 3.0));
  CHECK(tim == doctest::Approx(1.0 / 3.0));
  for (const Json& d : rep["diagonal"]) {
    CHECK(d[0].get<double>() == doctest::Approx(1.0 / 3.0));
    CHECK(d[1].get<double>() == doctest::Approx(1.0 / 3.0));
  }
}

TEST_CASE("carpenter block round-trips through verify family") {
  RunResult r = run_cli(
      "carpenter block --alpha 0.3,0.7 --beta 0.5,0.5 --eps 0.05");
  REQUIRE(r.exit_code == 0);
  Json rep = Json::parse(r.out);
  CHECK(rep["diag_residual"].get<double>() < 0.05);
  CHECK(rep["check"]["pass"].get<bool>());

  // feed the emitted family back through the verifier
  RunResult v = run_cli("verify family --tol 1e-9", rep.dump());
  CHECK(v.exit_code == 0);
  Json vrep = Json::parse(v.out);
  CHECK(vrep["check"]["pass"].get<bool>());
}

TEST_CASE("obstruct square exits with the infeasible code") {
  RunResult r = run_cli("obstruct square");
  CHECK(r.exit_code == 2);
  Json rep = Json::parse(r.out);
  CHECK(rep["status"] == "infeasible");
  CHECK_FALSE(rep["certificate"]["dual"].empty());
  // pairing is a positive rational p/q
  std::string pairing = rep["certificate"]["pairing"].get<std::string>();
  CHECK_FALSE(pairing.empty());
  CHECK(pairing[0] != '-');
}

TEST_CASE("feasibility reports witnesses and certificates by exit code") {
  Json in;
  in["spectrum"]["values"] =
      Json::array({Json::array({0.0, 0.0}), Json::array({1.0, 0.0}),
                   Json::array({0.0, 1.0})});
  in["spectrum"]["weights"] = Json::array({"1/3", "1/3", "1/3"});
  Json blocks = Json::array();
  Json b;
  b["value"] = Json::array({"1/3", "1/3"});
  b["weight"] = "1";
  blocks.push_back(b);
  in["blocks"] = blocks;
  RunResult r = run_cli("feasibility", in.dump());
  CHECK(r.exit_code == 0);
  Json rep = Json::parse(r.out);
  CHECK(rep["status"] == "feasible");
  CHECK(rep["three_point"]["feasible"].get<bool>());
}

TEST_CASE("synth discrete emits a verifiable diagonal") {
  Json in;
  in["spectrum"]["finite_eigs"] = Json::array();
  in["spectrum"]["essential"] =
      Json::array({Json::array({0.0, 0.0}), Json::array({1.0, 0.0}),
                   Json::array({0.0, 1.0})});
  in["target"]["head"] = Json::array(
      {Json::array({0.5, 0.0}), Json::array({0.0, 0.5}),
       Json::array({0.5, 0.5})});
  in["target"]["tail_pattern"] =
      Json::array({Json::array({0.0, 0.0}), Json::array({0.0, 1.0}),
                   Json::array({1.0, 0.0})});
  in["eps"] = 0.05;
  RunResult r = run_cli("synth discrete", in.dump());
  REQUIRE(r.exit_code == 0);
  Json rep = Json::parse(r.out);
  CHECK(rep["residual"].get<double>() < 0.05);

  // the emitted report feeds verify necessity directly
  RunResult v = run_cli("verify necessity --tol 0.06", rep.dump());
  CHECK(v.exit_code == 0);
  Json vrep = Json::parse(v.out);
  CHECK(vrep["inside"].get<bool>());
}

TEST_CASE("invalid input maps to exit 3") {
  RunResult r = run_cli("carpenter discrete", "{\"specs\": []}");
  CHECK(r.exit_code == 3);
  RunResult r2 = run_cli("flatten", "{not json");
  CHECK(r2.exit_code == 3);
}

TEST_CASE("necessity violations map to exit 2") {
  Json in;
  in["spectrum"]["essential"] =
      Json::array({Json::array({0.0, 0.0}), Json::array({1.0, 0.0})});
  in["diagonal"] = Json::array({Json::array({5.0, 0.0})});
  RunResult r = run_cli("verify necessity", in.dump());
  CHECK(r.exit_code == 2);
}

TEST_CASE("the dimension cap honors DIAGFORGE_MAX_DIM") {
  Json uhf;
  uhf["columns"] =
      Json::array({Json::array({1.0 / 3.0}), Json::array({2.0 / 3.0})});
  uhf["eps"] = 0.01;
  std::ofstream f("/tmp/diagforge_cap_in.json");
  f << uhf.dump();
  f.close();
  std::string cmd = std::string("DIAGFORGE_MAX_DIM=8 ") + DIAGFORGE_CLI_PATH +
                    " carpenter uhf --input /tmp/diagforge_cap_in.json "
                    "> /dev/null 2>/dev/null";
  int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 4);  // thirds need level 6 at eps 0.01
  // the explicit flag wins over the environment
  cmd = std::string("DIAGFORGE_MAX_DIM=8 ") + DIAGFORGE_CLI_PATH +
        " carpenter uhf --max-dim 4096 --input /tmp/diagforge_cap_in.json "
        "> /dev/null 2>/dev/null";
  status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 0);
}

TEST_CASE("reports are byte-identical across runs") {
  for (const std::string& cmd :
       {std::string("carpenter block --alpha 0.3,0.7 --beta 0.5,0.5 --eps "
                    "0.05"),
        std::string("obstruct arveson --restarts 3 --iters 50 --seed 11"),
        std::string("obstruct square")}) {
    RunResult a = run_cli(cmd);
    RunResult b = run_cli(cmd);
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("uhf and tracial subcommands run end to end") {
  Json uhf;
  uhf["columns"] = Json::array({Json::array({1.0 / 3.0}),
                                Json::array({2.0 / 3.0})});
  uhf["eps"] = 0.01;
  RunResult r = run_cli("carpenter uhf", uhf.dump());
  REQUIRE(r.exit_code == 0);
  Json rep = Json::parse(r.out);
  CHECK(rep["diag_residual"].get<double>() < 0.01);
  RunResult v = run_cli("verify family --tol 1e-9", rep.dump());
  CHECK(v.exit_code == 0);

  Json tr;
  tr["dim"] = 1;
  tr["columns"] = Json::array({Json::array({0.5}), Json::array({0.5})});
  tr["trace_targets"] = Json::array({"1/2", "1/2"});
  tr["eps"] = 0.1;
  RunResult t = run_cli("carpenter tracial", tr.dump());
  REQUIRE(t.exit_code == 0);
  Json trep = Json::parse(t.out);
  CHECK(trep["model_dim"] == 2);
  CHECK(trep["trace_ledger"][0]["exact"].get<bool>());
}
