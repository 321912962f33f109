#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("casimir_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result run(const std::string& args) {
  const auto out = scratch() / "stdout.txt";
  const auto err = scratch() / "stderr.txt";
  const std::string cmd =
      std::string("\"") + CASIMIR_MAPS_EXE + "\" " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return {WEXITSTATUS(status), slurp(out), slurp(err)};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("rotation at the reference parameters reports 1/3") {
  const auto r = run("rotation --alpha 0.34 --beta 0.2 --gamma 0.3");
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 3);
  CHECK(l[0].rfind("# casimir-maps v", 0) == 0);
  CHECK(l[1] == "alpha,beta,gamma,tau,p,q,error_bound");
  CHECK(l[2].rfind("0.34,0.2,0.3,0.333333333333333,1,3,", 0) == 0);
}

TEST_CASE("static cavity reports no locking") {
  const auto r = run("rotation --alpha 0.35 --beta 0 --gamma 0");
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 3);
  CHECK(l[2].rfind("0.35,0,0,0.35,,,", 0) == 0);
}

TEST_CASE("output file is written only on success") {
  const auto cfg = scratch() / "bad.cfg";
  std::ofstream(cfg) << "alpha 0.34\n";
  const auto out = scratch() / "bad.csv";
  fs::remove(out);
  const auto r = run("rotation --config " + cfg.string() + " --out " + out.string());
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
  CHECK_FALSE(fs::exists(out));

  const auto good = scratch() / "good.csv";
  REQUIRE(run("rotation --out " + good.string()).code == 0);
  CHECK(slurp(good).rfind("# casimir-maps v", 0) == 0);
}

TEST_CASE("input errors exit with code 2") {
  CHECK(run("staircase --set alpha_min=0.5 --set alpha_max=0.4").code == 2);
  CHECK(run("rotation --set alpha=abc").code == 2);
  CHECK(run("rotation --no-such-flag").code == 2);
  const auto fast = run("rotation --beta 0.9 --gamma 0.7");
  CHECK(fast.code == 2);
  CHECK(fast.err.find("gamma") != std::string::npos);
}

TEST_CASE("unlocked parameters exit with code 3") {
  const auto r = run("sigma --alpha 0.36180339887 --beta 1e-6 --gamma 0");
  CHECK(r.code == 3);
  CHECK(r.out.empty());
  CHECK(r.err.find("0.36") != std::string::npos);
}

TEST_CASE("exhausted pullback budget exits with code 4") {
  const auto r = run("energy --set t=50 --set pullback_limit=5 --set n_grid=10");
  CHECK(r.code == 4);
  CHECK(r.err.find("50") != std::string::npos);
}

TEST_CASE("output does not depend on the thread count") {
  const std::string args = "staircase --set n_points=40 --set n_iters=2000 --set alpha_min=0.3 --set alpha_max=0.4";
  const auto one = run(args + " --threads 1");
  const auto many = run(args + " --threads 3");
  REQUIRE(one.code == 0);
  REQUIRE(many.code == 0);
  CHECK(one.out == many.out);
  CHECK(lines(one.out).size() == 42);
}

TEST_CASE("provenance hash follows the configuration") {
  const auto a = lines(run("rotation --alpha 0.34").out);
  const auto b = lines(run("rotation --set alpha=0.34").out);
  const auto c = lines(run("rotation --alpha 0.341").out);
  REQUIRE(!a.empty());
  REQUIRE(!c.empty());
  CHECK(a[0] == b[0]);
  CHECK(a[0] != c[0]);
}

TEST_CASE("every command produces a header") {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"tongues --set n_beta=3 --set beta_max=0.2", "beta,alpha_left,alpha_right,p,q"},
      {"sigma --set n=3 --set n_grid=20", "t,sigma_n"},
      {"sigma --set what=modes --set k=1 --set n_grid=10", "t,x,re,im"},
      {"energy --set n_grid=10", "t,x,T00"},
      {"packets --set t_list=12 --set n_grid=2000", "t,j,x_left,x_right,width,energy"},
      {"packets --set what=shape --set n_list=9 --set n_grid=51", "n,x_rescaled,T00_rescaled"},
      {"classical --set n_grid=10", "t,x,A"},
      {"classical --set what=events --set t_end=2", "k,time,mirror,n_plus,n_minus"},
  };
  for (const auto& [args, header] : cases) {
    INFO(args);
    const auto r = run(args);
    REQUIRE(r.code == 0);
    const auto l = lines(r.out);
    REQUIRE(l.size() >= 3);
    CHECK(l[1] == header);
  }
}
