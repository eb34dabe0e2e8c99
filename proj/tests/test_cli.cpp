#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "graphnorm/cli.hpp"
#include "graphnorm/norming.hpp"
#include "json.hpp"

using graphnorm::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("graphnorm_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("density command") {
  auto r = call({"density", "C4", "const:0.5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("t = 0.0625\n") != std::string::npos);
  CHECK(r.out.find("elimination_width = 2") != std::string::npos);
  r = call({"density", "K1,2", "half-square"});
  CHECK(r.out.find("t = 0.125\n") != std::string::npos);
  r = call({"density", "C4", "special:1:1,1"});
  CHECK(r.out.find("t = 2\n") != std::string::npos);
  // Twelve significant digits.
  r = call({"density", "K2", "const:1/3"});
  CHECK(r.out.find("t = 0.333333333333\n") != std::string::npos);
}

TEST_CASE("density command reads files") {
  const auto g = temp_file("square.txt", "0 1\n1 2\n2 3\n3 0\n");
  const auto k = temp_file("kernel.json", R"({"measures":[0.5,0.5],"values":[[1,0],[0,0]]})");
  auto r = call({"density", g, k, "--format", "json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["t"] == "0.0625");
  const auto gj = temp_file("square.json", R"({"vertices":4,"edges":[[0,1],[1,2],[2,3],[0,3]]})");
  CHECK(call({"density", gj, "const:0.5"}).out.find("t = 0.0625") != std::string::npos);
}

TEST_CASE("input errors exit with 2") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"density", "C4"}).code == 2);
  CHECK(call({"density", "NOPE", "const:0.5"}).code == 2);
  CHECK(call({"density", "C4", "const:abc"}).code == 2);
  CHECK(call({"density", temp_file("loop.txt", "0 0\n"), "const:0.5"}).code == 2);
  CHECK(call({"density", "C4", temp_file("asym.json", R"({"measures":[0.5,0.5],"values":[[1,0],[1,0]]})")}).code == 2);
  CHECK(call({"check", "C4", "--mode", "strong"}).code == 2);
  CHECK(call({"check", "C4", "--budget", "0"}).code == 2);
  CHECK(call({"moduli", "C4", "--format", "xml"}).code == 2);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("check command exit codes") {
  auto r = call({"check", "C4", "--budget", "200"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["overall"] == "consistent");
  r = call({"check", "C4+C6", "--budget", "50"});
  CHECK(r.code == 3);
  bool saw = false;
  const auto mixed = nlohmann::json::parse(r.out);
  for (const auto& c : mixed["checks"])
    if (c.contains("certificate") && c["certificate"]["kind"] == "edge-count-mismatch") saw = true;
  CHECK(saw);
  r = call({"check", "2*K1,2", "--budget", "200"});
  CHECK(r.code == 0);
  const auto stars = nlohmann::json::parse(r.out);
  for (const auto& c : stars["checks"]) CHECK(c["status"] == "pass");
}

TEST_CASE("moduli command") {
  auto r = call({"moduli", "C4", "--kind", "smoothness", "--eps-grid", "0.5", "--n-grid", "8,16", "--seeds", "0-2"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("h,kind,epsilon,n,seed,value\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 7);
  r = call({"moduli", "C4", "--eps-grid", "1.5"});
  CHECK(r.code == 2);
  CHECK(r.err.find("(0, 1)") != std::string::npos);
  r = call({"moduli", "C4", "--n-grid", "16,8"});
  CHECK(r.code == 2);
  r = call({"moduli", "C4", "--n-grid", "8", "--seeds", "0", "--format", "json", "--witnesses"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["records"][0].contains("witnesses"));
}

TEST_CASE("validate command") {
  const auto verdict = call({"check", "C4+C6", "--budget", "20"});
  const auto j = nlohmann::json::parse(verdict.out);
  nlohmann::json cert;
  for (const auto& c : j["checks"])
    if (c.contains("certificate")) cert = c["certificate"];
  REQUIRE_FALSE(cert.is_null());

  CHECK(call({"validate", temp_file("cert.json", cert.dump())}).code == 0);
  CHECK(call({"validate", temp_file("verdict.json", verdict.out)}).code == 0);

  auto bad = cert;
  auto& v = bad["decoration"]["kernels"][0]["values"];
  v[0][0] = v[0][0].get<double>() * 1.1;
  CHECK(call({"validate", temp_file("bad.json", bad.dump())}).code == 3);

  // An off-diagonal edit breaks symmetry; the certificate no longer holds.
  auto asym = cert;
  asym["decoration"]["kernels"][0]["values"][0][1] = 0.5;
  CHECK(call({"validate", temp_file("asym_cert.json", asym.dump())}).code == 3);

  CHECK(call({"validate", temp_file("malformed.json", "{\"kind\": ")}).code == 2);
  CHECK(call({"validate", temp_file("partial.json", R"({"kind":"holder-violation"})")}).code == 2);
  CHECK(call({"validate", "/nonexistent/cert.json"}).code == 2);
}

TEST_CASE("embedding and concentration commands") {
  auto r = call({"embedding", "C4", "--a", "1,1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("t(H, W) = 2\n") != std::string::npos);
  CHECK(call({"embedding", "2*C4"}).code == 2);
  r = call({"concentration", "C4", "--dist", "d1", "--n-grid", "8,16", "--trials", "3"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["target"] == 0.0625);
  CHECK(call({"concentration", "C4", "--dist", "d3", "--eps", "1.5"}).code == 2);
}

TEST_CASE("outputs are byte-identical across runs") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"check", "K3", "--budget", "300", "--seed", "4"},
        std::vector<std::string>{"moduli", "C4", "--n-grid", "8,16", "--seeds", "0-3", "--format", "json"},
        std::vector<std::string>{"concentration", "C4", "--n-grid", "8,16", "--trials", "4"},
        std::vector<std::string>{"density", "C6", "special:1:0.3,0.9"}}) {
    const auto a = call(args);
    const auto b = call(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
}
