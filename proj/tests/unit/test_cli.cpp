#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kLib = FOCAL_PAPERLIB;

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli {
 public:
  Cli() {
    dir_ = fs::temp_directory_path() / ("focal_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  ~Cli() { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }

  Run operator()(const std::string& args) {
    fs::path out = dir_ / "stdout", err = dir_ / "stderr";
    std::string cmd = "FOCAL_COLOR=0 '" + std::string(FOCAL_BINARY) + "' " + args + " >'" +
                      out.string() + "' 2>'" + err.string() + "'";
    int raw = std::system(cmd.c_str());
    Run r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

 private:
  fs::path dir_;
};

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) {
    if (!l.empty()) out.push_back(l);
  }
  return out;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("check exit codes") {
  Cli cli;
  Run ok = cli("check " + q(kLib / "commute_sharp.fcl"));
  CHECK(ok.status == 0);
  CHECK(ok.err.empty());
  CHECK(ok.out.find("0 errors") != std::string::npos);

  Run bad = cli("check " + q(kLib / "neg" / "neg_sharp_elim.fcl"));
  CHECK(bad.status == 1);
  CHECK(bad.err.find("error[E001]") != std::string::npos);
  CHECK(bad.err.find("\x1b[") == std::string::npos);

  CHECK(cli("check missing.fcl").status == 2);
  CHECK(cli("").status == 2);
  CHECK(cli("frobnicate").status == 2);
  CHECK(cli("check").status == 2);
}

TEST_CASE("multiple paths share one signature") {
  Cli cli;
  auto prelude = cli.write("prelude.fcl", "focus s;\npostulate A : Type 0;\n");
  auto user = cli.write("user.fcl", "postulate a : A;\ndef b : flat{s} A -> A := fun x => let flat{s} u := x in u;\n");
  CHECK(cli("check " + q(prelude) + " " + q(user)).status == 0);
  CHECK(cli("check " + q(user)).status == 1);
}

TEST_CASE("max-errors limits the report") {
  Cli cli;
  auto f = cli.write("many.fcl", "postulate a : X;\npostulate b : Y;\npostulate c : Z;\n");
  Run all = cli("check " + q(f));
  CHECK(all.status == 1);
  Run one = cli("check --max-errors 1 " + q(f));
  CHECK(one.status == 1);
  std::size_t n = 0;
  for (const auto& l : lines(one.err)) n += l.find("error[") != std::string::npos;
  CHECK(n == 1);
  CHECK(one.err.find("2 more") != std::string::npos);
}

TEST_CASE("json output agrees with the human report") {
  Cli cli;
  auto f = cli.write("errs.fcl",
                     "focus s;\npostulate A : Type 0;\npostulate x : flat{t} A;\n"
                     "postulate a : A;\ndef b : flat{s} A := a .flat{s};\ndef c : A := a a;\n"
                     "postulate y : Nope;\n");
  Run human = cli("check " + q(f));
  Run json = cli("check --json " + q(f));
  CHECK(human.status == 1);
  CHECK(json.status == 1);

  std::vector<std::string> human_codes;
  for (const auto& l : lines(human.err)) {
    auto at = l.find("error[");
    if (at != std::string::npos) human_codes.push_back(l.substr(at + 6, 4));
  }
  std::vector<std::string> json_codes;
  for (const auto& l : lines(json.err)) {
    auto j = nlohmann::json::parse(l);
    REQUIRE(j.is_object());
    for (const char* key : {"file", "code", "message", "start", "end"}) CHECK(j.contains(key));
    CHECK(j["start"]["line"].is_number_integer());
    CHECK(j["start"]["col"].is_number_integer());
    CHECK(j["end"]["line"].is_number_integer());
    CHECK(j["file"] == f.string());
    json_codes.push_back(j["code"]);
  }
  CHECK(human_codes == json_codes);
  CHECK(json_codes == std::vector<std::string>{"E005", "E003", "E001"});
}

TEST_CASE("eval prints normal forms") {
  Cli cli;
  auto f = cli.write("eval.fcl",
                     "focus s;\n"
                     "postulate B : Type 0;\n"
                     "postulate k a : B;\n"
                     "def counit : flat{s} B -> B := fun x => let flat{s} u := x in u;\n"
                     "def t1 : B := counit (k .flat{s});\n"
                     "def t2 : B := (a .sharp{s}) .unsharp{s};\n"
                     "def t3 : B -> B := fun x => x;\n");
  auto eval = [&](const char* name) { return cli("eval " + q(f) + " " + name); };
  Run r1 = eval("t1");
  CHECK(r1.status == 0);
  CHECK(r1.out == "k\n");
  CHECK(eval("t2").out == "a\n");
  CHECK(eval("t3").out == "fun x => x\n");
  CHECK(eval("k").out == "k\n");
  CHECK(eval("nope").status == 1);
  CHECK(cli("eval missing.fcl t1").status == 2);
}

TEST_CASE("lattice dumps") {
  Cli cli;
  auto count = [](const std::string& out, const std::string& header) {
    auto at = out.find(header + " (");
    REQUIRE(at != std::string::npos);
    return std::stoul(out.substr(at + header.size() + 2));
  };
  Run free2 = cli("lattice " + q(cli.write("free.fcl", "focus s d;\n")));
  CHECK(free2.status == 0);
  CHECK(count(free2.out, "elements") == 4);
  CHECK(count(free2.out, "meet table") == 16);

  Run ord = cli("lattice " + q(cli.write("ord.fcl", "focus diff <= super;\n")));
  CHECK(count(ord.out, "elements") == 3);
  CHECK(ord.out.find("{diff} . {super} = {diff}") != std::string::npos);
  CHECK(ord.out.find("{diff} <= {super}") != std::string::npos);

  Run none = cli("lattice " + q(cli.write("none.fcl", "focus ;\n")));
  CHECK(count(none.out, "elements") == 1);
  CHECK(count(none.out, "meet table") == 1);

  CHECK(cli("lattice " + q(cli.write("dup.fcl", "focus s s;\n"))).status == 1);
}

TEST_CASE("corpus and proptest subcommands") {
  Cli cli;
  Run corpus = cli("corpus " + q(kLib / "MANIFEST"));
  CHECK(corpus.status == 0);
  CHECK(corpus.out.find("passed") != std::string::npos);
  CHECK(cli("corpus missing/MANIFEST").status == 2);

  Run prop = cli("proptest --seed 5 --cases 20 --lattice s,d");
  CHECK(prop.status == 0);
  CHECK(prop.out.find("seed 5") != std::string::npos);
  CHECK(cli("proptest --lattice '<=x'").status == 2);
}
