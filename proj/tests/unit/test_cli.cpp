#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

#include "../../tools/commands.hpp"
#include "costtree/tree.hpp"

using namespace costtree;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = costtree::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("gendata is reproducible and validates its generator") {
    auto a = run_cli({"gendata", "xor", "--relevant", "3", "--irrelevant", "2", "-n", "50", "--seed", "4"});
    auto b = run_cli({"gendata", "xor", "--relevant", "3", "--irrelevant", "2", "-n", "50", "--seed", "4"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("r0:{0,1},r1:{0,1},r2:{0,1},n0:{0,1},n1:{0,1},class:{0,1}\n", 0) == 0);
    CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 51);
    auto bad = run_cli({"gendata", "parity", "-n", "5"});
    CHECK(bad.code == 2);
    CHECK(!bad.err.empty());
    CHECK(run_cli({"gendata", "multiplexer", "--address-bits", "0"}).code == 2);
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("gencosts writes a cost file") {
    testsupport::TempDir dir;
    auto data = dir.file("d.csv");
    REQUIRE(run_cli({"gendata", "multi-xor", "-n", "60", "-o", data}).code == 0);

    auto flat = run_cli({"gencosts", "--data", data, "--rho", "0", "--cr", "5:5", "--g", "0", "--mc", "100"});
    REQUIRE(flat.code == 0);
    auto j = nlohmann::json::parse(flat.out);
    REQUIRE(j["tests"].size() == 11);
    for (const auto& t : j["tests"]) CHECK(t["cost"].get<double>() == 5.0);
    CHECK(j["matrix"][0][1].get<double>() == 100);

    CHECK(run_cli({"gencosts", "--data", data, "--d", "0.1", "--mc", "1"}).code == 2);
    CHECK(run_cli({"gencosts", "--data", data, "--cr", "9", "--mc", "1"}).code == 2);
    CHECK(run_cli({"gencosts", "--data", data}).code == 2);
    CHECK(run_cli({"gencosts", "--data", dir.file("missing.csv"), "--mc", "1"}).code == 3);

    auto matrix = dir.file("m.json");
    std::ofstream(matrix) << "[[0,1],[199,0]]";
    auto skew = run_cli({"gencosts", "--data", data, "--mc-matrix", matrix});
    REQUIRE(skew.code == 0);
    CHECK(nlohmann::json::parse(skew.out)["matrix"][1][0].get<double>() == 199);
    CHECK(run_cli({"gencosts", "--data", data, "--mc-matrix", matrix, "--mc", "1"}).code == 2);
}

TEST_CASE("train writes a tree that reads back") {
    testsupport::TempDir dir;
    auto data = dir.file("d.csv"), costs = dir.file("c.json"), tree = dir.file("t.txt");
    REQUIRE(run_cli({"gendata", "xor", "--relevant", "2", "--irrelevant", "2", "-n", "80", "-o", data}).code == 0);
    REQUIRE(run_cli({"gencosts", "--data", data, "--mc", "500", "-o", costs}).code == 0);
    for (std::string algo : {"id3", "c45", "eg2", "dtmc", "idx", "csid3", "lsid3", "act"}) {
        auto r = run_cli({"train", "--data", data, "--costs", costs, "--algo", algo, "--r", "1", "-o", tree});
        CHECK(r.code == 0);
        CHECK(r.out.find("total\t") != std::string::npos);
        auto schema = load_dataset(data);
        auto t = tree_from_string(slurp(tree), schema);
        CHECK(tree_to_string(t, schema) == slurp(tree));
    }
    auto warned = run_cli({"train", "--data", data, "--costs", costs, "--algo", "id3", "--w", "2"});
    CHECK(warned.code == 0);
    CHECK(!warned.err.empty());
    CHECK(run_cli({"train", "--data", data, "--costs", costs, "--algo", "c50"}).code == 2);
    CHECK(run_cli({"train", "--data", data, "--costs", dir.file("none.json")}).code == 3);
}

TEST_CASE("eval and bench outputs") {
    testsupport::TempDir dir;
    auto data = dir.file("xor.csv"), costs = dir.file("c.json");
    REQUIRE(run_cli({"gendata", "xor", "--relevant", "2", "--irrelevant", "1", "-n", "60", "-o", data}).code == 0);
    REQUIRE(run_cli({"gencosts", "--data", data, "--mc", "100", "-o", costs}).code == 0);

    auto ev = run_cli({"eval", "--data", data, "--costs", costs, "--algo", "eg2", "-k", "3"});
    CHECK(ev.code == 0);
    CHECK(run_cli({"eval", "--data", data, "--costs", costs, "-k", "1"}).code == 2);

    auto prefix = dir.file("run");
    std::vector<std::string> bench{"bench", "--data", data, "--costs", costs, "--algos", "eg2,act", "--r", "1",
                                   "-k", "3", "--seeds", "0,1", "-o", prefix};
    auto first = run_cli(bench);
    REQUIRE(first.code == 0);
    auto summary = slurp(prefix + ".tsv");
    CHECK(summary.rfind("algo\tmc\tr\tunits\tmean_normalized", 0) == 0);
    CHECK(summary.find("act\tmatrix\t1\t") != std::string::npos);
    CHECK(slurp(prefix + ".comparisons.tsv").find("act(r=1)") != std::string::npos);
    CHECK(!slurp(prefix + ".folds.tsv").empty());
    CHECK(run_cli(bench).code == 2);
    bench.push_back("--force");
    CHECK(run_cli(bench).code == 0);
    CHECK(slurp(prefix + ".tsv") == summary);
    CHECK(run_cli({"bench", "--data", dir.file("none.csv"), "--algos", "eg2", "-o", dir.file("x")}).code == 3);
}
