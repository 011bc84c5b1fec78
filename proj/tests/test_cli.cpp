#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <string>

#include "skewrat/io.hpp"

using namespace skewrat;

namespace {

const std::string kCli = SKEWRAT_CLI_PATH;

int run(const std::string& args) {
    int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

std::string tmp_path(const std::string& name) {
    return std::string("/tmp/skewrat_test_") + name;
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("verify nosuchsuite") == 2);
    CHECK(run("blocks --level 2") == 2);  // neither --digits nor --beta
    CHECK(run("") == 2);
}

TEST_CASE("resource caps exit with code 3") {
    CHECK(run("blocks --digits '{\"tail\":[3]}' --level 60 --cap-block 1000") == 3);
}

TEST_CASE("expand writes the digit csv") {
    auto out = tmp_path("digits.csv");
    CHECK(run("expand --beta 0.38196601125010515179541316563436 --digits 8 --out " + out) == 0);
    auto text = io::read_file(out);
    CHECK(text.rfind("k,digit\n1,3\n2,3", 0) == 0);
    auto manifest = io::read_file(out + ".manifest.json");
    CHECK(manifest.find("config_hash") != std::string::npos);
}

TEST_CASE("verify suites run from the command line") {
    CHECK(run("verify thm21 --digits '{\"tail\":[2,3]}' --max-len 500") == 0);
    CHECK(run("verify biohazard --digits '{\"tail\":[3]}' --levels 4") == 0);
    CHECK(run("verify variance --instances 20 --seed 7") == 0);
}

TEST_CASE("identical configs produce byte-identical artifacts") {
    auto corpus = tmp_path("corpus.json");
    CHECK(run("rat corpus --digits '{\"tail\":[3]}' --levels 6 --out " + corpus) == 0);

    auto out1 = tmp_path("sim1.csv"), out2 = tmp_path("sim2.csv");
    CHECK(run("rat simulate --corpus " + corpus + " --n 50 --trials 2000 --seed 11 --out " +
              out1) == 0);
    CHECK(run("rat simulate --corpus " + corpus + " --n 50 --trials 2000 --seed 11 --out " +
              out2) == 0);
    CHECK(io::read_file(out1) == io::read_file(out2));

    auto out3 = tmp_path("sim3.csv");
    CHECK(run("rat simulate --corpus " + corpus + " --n 50 --trials 2000 --seed 12 --out " +
              out3) == 0);
    CHECK(io::read_file(out1) != io::read_file(out3));
}

TEST_CASE("checkpointed recursion resumes exactly") {
    auto ckpt = tmp_path("frame.json");
    auto direct = tmp_path("direct.csv");
    auto resumed = tmp_path("resumed.csv");
    CHECK(run("visits --digits '{\"tail\":[2,3]}' --level 6 --checkpoint " + ckpt +
              " --out " + tmp_path("ckpt_run.csv")) == 0);
    CHECK(run("visits --digits '{\"tail\":[2,3]}' --level 12 --out " + direct) == 0);
    CHECK(run("visits --digits '{\"tail\":[2,3]}' --level 12 --resume " + ckpt + " --out " +
              resumed) == 0);
    CHECK(io::read_file(direct) == io::read_file(resumed));
}

TEST_CASE("experiment subcommands emit their documented headers") {
    auto rail = tmp_path("rail.csv");
    CHECK(run("experiment railways --digits '{\"tail\":[3]}' --nmax 200 --out " + rail) == 0);
    CHECK(io::read_file(rail).rfind("n,sup,integral_num,integral_den,ratio1,ratio2", 0) == 0);

    auto wr = tmp_path("wrllt.csv");
    CHECK(run("experiment wrllt --digits '{\"tail\":[3]}' --levels 5 --p 2 --out " + wr) == 0);
    CHECK(io::read_file(wr).rfind("k,nu_k,I0,I1,scaled0,scaled1,bound0,bound1", 0) == 0);

    auto clt = tmp_path("clt.csv");
    CHECK(run("experiment clt --digits '{\"tail\":[3]}' --offset 2 --period 3 --nmax 4 --out " +
              clt) == 0);
    CHECK(io::read_file(clt).rfind("n,level,mu_hat,c_hat,ks", 0) == 0);
}
