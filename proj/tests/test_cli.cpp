#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"

using namespace innerlab::cli;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "innerlab");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("innerlab_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("help and version") {
  CHECK(run_cli({"--help"}).code == kOk);
  const Result v = run_cli({"--version"});
  CHECK(v.code == kOk);
  CHECK(v.out.find("0.1.0") != std::string::npos);
}

TEST_CASE("count output carries the header") {
  const std::string model = write_temp("deg2.inner", "kind=disk\nrotation=1,0\nzero=0,0\nzero=0.5,0\n");
  const Result r = run_cli({"count", "--model", model, "--z", "0.3,0", "--R", "4"});
  REQUIRE(r.code == kOk);
  CHECK(r.out.rfind("# innerlab 0.1.0\n# [count]\n", 0) == 0);
  CHECK(r.out.find("# model: zero=0.5,0") != std::string::npos);
  CHECK(r.out.find("R,count,count_over_eR,cesaro,target,ratio,cesaro_ratio\n") != std::string::npos);
  CHECK(r.out.find("\n4,51,") != std::string::npos);
  const Result t1 = run_cli({"--threads", "1", "cesaro", "--model", model, "--z", "0.3,0", "--R", "6"});
  const Result t4 = run_cli({"--threads", "4", "cesaro", "--model", model, "--z", "0.3,0", "--R", "6"});
  CHECK(t1.out == t4.out);
}

TEST_CASE("config file") {
  const std::string model = write_temp("z2.inner", "kind=disk\nzero=0,0\nzero=0,0\n");
  const std::string cfg = write_temp("run.ini", "[lyapunov]\nmodel = " + model + "\nmethod = jensen\n");
  const Result r = run_cli({"--config", cfg, "lyapunov"});
  REQUIRE(r.code == kOk);
  CHECK(r.out.find("jensen,0.69314718055994") != std::string::npos);
}

TEST_CASE("exit codes") {
  const std::string model = write_temp("deg2b.inner", "kind=disk\nzero=0,0\nzero=0.5,0\n");
  CHECK(run_cli({}).code == kUsage);
  CHECK(run_cli({"count", "--z", "0.3,0"}).code == kUsage);
  CHECK(run_cli({"count", "--model", "/nonexistent/model", "--z", "0.3,0"}).code == kUsage);
  CHECK(run_cli({"count", "--model", model, "--z", "1.5,0"}).code == kPrecondition);
  CHECK(run_cli({"count", "--model", model, "--z", "0.3,0", "--R", "12", "--budget", "100"}).code == kResource);
  const std::string hp = write_temp("fin.hp", "kind=halfplane\nbeta=3\natom=0,1\n");
  CHECK(run_cli({"parabolic-count", "--model", hp, "--R", "3"}).code == kPrecondition);
}
