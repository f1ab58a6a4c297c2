// End-to-end checks of the installed CLI binary: spawns the real executable
// and inspects stdout plus exit codes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string &args) {
  std::string cmd = std::string(SYMCIRC_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE *pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    out.append(buf.data(), got);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream f(path);
  REQUIRE(f.good());
  f << text;
}

const char *kDir = "/tmp/symcirc_cli_test";

} // namespace

TEST_CASE("cli end to end") {
  REQUIRE(std::system((std::string("mkdir -p ") + kDir).c_str()) == 0);
  std::string dir = kDir;
  write_file(dir + "/graph.struct",
             "vocab E/2\nuniverse a b c\nrel E a b\n");
  write_file(dir + "/empty.struct", "vocab E/2\nuniverse a b c\n");
  write_file(dir + "/phi.formula", "(exists x (exists y (E x y)))\n");
  write_file(dir + "/gamma.bij", "a=2\nb=1\nc=3\n");

  SUBCASE("compile then validate, check-sym, eval, compare") {
    auto compiled = run("compile -f " + dir + "/phi.formula -n 3 -o " + dir +
                        "/phi.circ");
    CHECK(compiled.exit_code == 0);

    auto validated = run("validate -c " + dir + "/phi.circ");
    CHECK(validated.exit_code == 0);
    CHECK(validated.out == "ok\n");

    auto sym = run("check-sym -c " + dir + "/phi.circ");
    CHECK(sym.exit_code == 0);
    CHECK(sym.out == "symmetric\n");

    auto ev = run("eval -c " + dir + "/phi.circ -s " + dir + "/graph.struct");
    CHECK(ev.exit_code == 0);
    CHECK(ev.out == "result true\n");

    auto ev0 = run("eval -c " + dir + "/phi.circ -s " + dir + "/empty.struct");
    CHECK(ev0.exit_code == 0);
    CHECK(ev0.out == "result false\n");

    auto naive = run("eval-naive -c " + dir + "/phi.circ -s " + dir +
                     "/graph.struct -b " + dir + "/gamma.bij");
    CHECK(naive.exit_code == 0);
    CHECK(naive.out == "result true\n");

    auto cmp = run("compare -c " + dir + "/phi.circ -s " + dir +
                   "/graph.struct");
    CHECK(cmp.exit_code == 0);
    CHECK(cmp.out == "agree\n");

    auto supports = run("supports -c " + dir + "/phi.circ");
    CHECK(supports.exit_code == 0);
    CHECK(supports.out.find("orbit=") != std::string::npos);
    CHECK(supports.out.find("hypotheses_met=false") != std::string::npos);

    auto bound = run("bound-report -c " + dir + "/phi.circ --epsilon 0.8");
    CHECK(bound.exit_code == 0);
    CHECK(bound.out.find("theorem_bound=") != std::string::npos);
  }

  SUBCASE("rigidify output re-parses and passes") {
    write_file(dir + "/dup.circ", "circuit n=2 q=0 basis=standard\n"
                                  "gate a rel E 1 2\n"
                                  "gate g1 op NOT <- a\n"
                                  "gate g2 op NOT <- a\n"
                                  "gate f op OR <- g1 g2\n"
                                  "output () f\n");
    auto r = run("rigidify -c " + dir + "/dup.circ -o " + dir + "/rigid.circ");
    CHECK(r.exit_code == 0);
    auto v = run("validate -c " + dir + "/rigid.circ");
    CHECK(v.exit_code == 0);
  }

  SUBCASE("check-sym reports a counterexample with exit 1") {
    write_file(dir + "/asym.circ", "circuit n=3 q=0 basis=standard\n"
                                   "gate a rel E 1 2\n"
                                   "output () a\n");
    auto r = run("check-sym -c " + dir + "/asym.circ");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("not symmetric") != std::string::npos);
    CHECK(r.out.find("(") != std::string::npos);
  }

  SUBCASE("validate prints violations with exit 1") {
    write_file(dir + "/bad.circ", "circuit n=2 q=0 basis=standard\n"
                                  "gate one const 1\n"
                                  "gate uno const 1\n"
                                  "gate g op OR <- one uno\n"
                                  "output () g\n");
    auto r = run("validate -c " + dir + "/bad.circ");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("duplicate constant") != std::string::npos);
  }

  SUBCASE("usage and file errors exit 2") {
    CHECK(run("validate -c /nonexistent.circ").exit_code == 2);
    CHECK(run("frobnicate").exit_code == 2);
    CHECK(run("compile -n 3 -o /tmp/x.circ").exit_code == 2); // no formula
    CHECK(run("lemma-check --lemma small-large --n 256 --epsilon 0.5")
              .exit_code == 2); // seed is mandatory
  }

  SUBCASE("supports on a non-rigid circuit points at rigidify, exit 2") {
    write_file(dir + "/nonrigid.circ", "circuit n=2 q=0 basis=standard\n"
                                       "gate a rel E 1 2\n"
                                       "gate g1 op NOT <- a\n"
                                       "gate g2 op NOT <- a\n"
                                       "gate f op OR <- g1 g2\n"
                                       "output () f\n");
    auto r = run("supports -c " + dir + "/nonrigid.circ");
    CHECK(r.exit_code == 2);
    auto r2 = run("check-sym -c " + dir + "/nonrigid.circ");
    CHECK(r2.exit_code == 2);
  }

  SUBCASE("lemma-check reports zero violations") {
    auto r = run("lemma-check --lemma small-large --n 256 --epsilon 0.5 "
                 "--samples 500 --seed 9");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("violations=0") != std::string::npos);
    CHECK(r.out.find("seed=9") != std::string::npos);
    // determinism: identical run, identical output
    auto r2 = run("lemma-check --lemma small-large --n 256 --epsilon 0.5 "
                  "--samples 500 --seed 9");
    CHECK(r2.out == r.out);
  }

  SUBCASE("compile with majority basis and q = 1 output") {
    auto c = run("compile -e \"(exists y (E x y))\" -n 3 -o " + dir +
                 "/q1.circ");
    CHECK(c.exit_code == 0);
    auto ev = run("eval -c " + dir + "/q1.circ -s " + dir + "/graph.struct");
    CHECK(ev.exit_code == 0);
    CHECK(ev.out == "a\n");

    auto m = run("compile -e \"(maj x (E x x))\" -n 3 --basis majority -o " +
                 dir + "/maj.circ");
    CHECK(m.exit_code == 0);
    auto mev = run("eval -c " + dir + "/maj.circ -s " + dir + "/empty.struct");
    CHECK(mev.exit_code == 0);
    CHECK(mev.out == "result false\n");
  }
}
