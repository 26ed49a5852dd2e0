#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cmrs/cli.hpp"
#include "cmrs/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cmrs");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cmrs::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("decide exit codes") {
  CHECK(cli({"decide", "-g", "Z6", "-a", "3", "-b", "2", "-c", "1"}).code == 3);
  const auto yes = cli({"decide", "-g", "Z3xZ2xZ2", "-a", "3", "-b", "4", "-c", "1"});
  CHECK(yes.code == 0);
  CHECK(yes.out.find("\"Exists\"") != std::string::npos);
  CHECK(cli({"decide", "-g", "Z3xZ8xZ2", "-a", "3", "-b", "8", "-c", "2"}).code == 2);
  CHECK(cli({"decide", "-g", "Z0", "-a", "3", "-b", "8", "-c", "2"}).code == 1);
  CHECK(cli({"decide", "-g", "Z6", "-a", "3", "-b", "3", "-c", "1"}).code == 1);
  CHECK(cli({"decide", "-g", "Z6"}).code == 1);
  CHECK(cli({}).code == 1);
}

TEST_CASE("construct") {
  const auto m = cli({"construct", "mrs", "-g", "Z9xZ2xZ2", "-a", "9", "-b", "4", "-c", "1"});
  REQUIRE(m.code == 0);
  const auto j = nlohmann::json::parse(m.out);
  CHECK(j.at("provenance") == nlohmann::json::array({"p3-base", "lemgl2:h=3", "glue-rows:3"}));
  const auto cm = cli({"construct", "cm", "-g", "Z4xZ4"});
  REQUIRE(cm.code == 0);
  CHECK(nlohmann::json::parse(cm.out).at("m") == 4);
  const auto refused = cli({"construct", "partition", "-g", "Z6", "-m", "3"});
  CHECK(refused.code == 3);
  CHECK(refused.err.find("refused") != std::string::npos);
  CHECK(cli({"construct", "kas", "-g", "Z4xZ4", "-j", "5"}).code == 0);
  CHECK(cli({"construct", "mrs", "-g", "Z3xZ8xZ2", "-a", "3", "-b", "8", "-c", "2"}).code == 2);
  CHECK(cli({"construct", "mrs", "-g", "Z12"}).code == 1);
  CHECK(cli({"construct", "bogus", "-g", "Z12"}).code == 1);
}

TEST_CASE("verify files") {
  const auto dir = fs::temp_directory_path() / "cmrs_cli_verify";
  fs::create_directories(dir);
  const auto good = (dir / "good.json").string();
  REQUIRE(cli({"construct", "mrs", "-g", "Z3xZ2xZ2", "-a", "3", "-b", "4", "-c", "1", "--out", good}).code == 0);
  CHECK(cli({"verify", good}).code == 0);

  auto j = nlohmann::json::parse(std::ifstream(good));
  std::swap(j["rects"][0][0][0], j["rects"][0][1][1]);
  const auto bad = (dir / "bad.json").string();
  std::ofstream(bad) << j.dump();
  const auto r = cli({"verify", bad});
  CHECK(r.code == 1);
  CHECK(nlohmann::json::parse(r.out).at("locus").get<std::string>().rfind("rects[0]", 0) == 0);

  j = nlohmann::json::parse(std::ifstream(good));
  j["group"] = "Z12";
  const auto wrong = (dir / "wrong.json").string();
  std::ofstream(wrong) << j.dump();
  CHECK(cli({"verify", wrong}).code == 1);
  CHECK(cli({"verify", (dir / "missing.json").string()}).code == 1);
  fs::remove_all(dir);
}

TEST_CASE("catalog command") {
  const auto root = fs::temp_directory_path() / "cmrs_cli_catalog";
  fs::remove_all(root);
  CHECK(cli({"catalog", "--max-order", "8", "--root", root.string()}).code == 0);
  CHECK(cli({"catalog", "--load", "--root", root.string()}).code == 0);
  CHECK(cli({"catalog", "--max-order", "100", "--root", root.string()}).code == 1);
  setenv("CMRS_CATALOG_ROOT", root.string().c_str(), 1);
  CHECK(cli({"catalog", "--load"}).code == 0);
  unsetenv("CMRS_CATALOG_ROOT");
  fs::remove_all(root);
}

TEST_CASE("selftest") { CHECK(cli({"selftest"}).code == 0); }
