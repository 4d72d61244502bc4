#include "hsde/cli.hpp"
#include "hsde/serialize.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace hsde;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "hsde");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path temp_dir(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("hsde_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
    const auto p = dir / name;
    std::ofstream(p) << text;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

const std::vector<std::string> kPitchfork06{"--model.kind", "Pitchfork", "--model.lambda", "1", "--model.sigma", "1",
                                            "--model.alpha", "0.6"};

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
}

}  // namespace

TEST_CASE("classify reports absorption") {
    const auto r = run(with({"classify"}, kPitchfork06));
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["report"]["absorption"]["absorption"] == "AlmostSurelyFinite");
    CHECK(j["metadata"]["command"] == "classify");
}

TEST_CASE("config errors exit with 2") {
    const auto low = run({"classify", "--model.kind", "Pitchfork", "--model.sigma", "1", "--model.alpha", "0.4"});
    CHECK(low.code == 2);
    CHECK(low.err.find("alpha below strong-uniqueness threshold") != std::string::npos);

    const auto dir = temp_dir("bad");
    const auto bad = write_file(dir, "bad.json", "{ \"model\": ");
    CHECK(run({"--config", bad.string(), "classify"}).code == 2);
    CHECK(run({"--config", (dir / "missing.json").string(), "classify"}).code == 2);
    CHECK(run({"classify", "--model.kind", "Pitchfork", "--model.lamda", "1"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--format", "xml", "classify"}).code == 2);
}

TEST_CASE("analytic refusals exit with 3") {
    const auto r = run({"density", "--model.kind", "Pitchfork", "--model.lambda", "-1", "--model.sigma", "1",
                        "--model.alpha", "2"});
    CHECK(r.code == 3);
    CHECK(r.err.find("no integrable solution") != std::string::npos);
}

TEST_CASE("config file and flag overrides") {
    const auto dir = temp_dir("cfg");
    const auto cfg = write_file(dir, "c.json",
                                R"({"model": {"kind": "Pitchfork", "lambda": 1, "sigma": 1, "alpha": 1.2}})");
    const auto base = json::parse(run({"--config", cfg.string(), "classify"}).out);
    CHECK(base["report"]["absorption"]["absorption"] == "Never");
    const auto over = json::parse(run({"--config", cfg.string(), "classify", "--model.alpha=0.6"}).out);
    CHECK(over["report"]["absorption"]["absorption"] == "AlmostSurelyFinite");
    CHECK(over["metadata"]["config"]["model"]["alpha"] == 0.6);
    CHECK(over["metadata"]["config_hash"] != base["metadata"]["config_hash"]);
}

TEST_CASE("ldp output") {
    const auto r = run({"ldp", "--ldp.lambda", "1", "--ldp.mu", "1", "--ldp.kappa", "2", "--ldp.alpha", "0.5"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["report"]["U0"].get<double>() == doctest::Approx(2.0 / 3.0));
    const auto inf = run({"ldp", "--ldp.alpha", "0.75", "--ldp.c", "\"inf\""});
    REQUIRE(inf.code == 0);
    CHECK(json::parse(inf.out)["report"]["regime"] == "SuperExponential");
}

TEST_CASE("artifacts carry metadata and are reproducible") {
    const auto dir = temp_dir("sim");
    const auto args = with({"--seed", "9", "--out", (dir / "a").string(), "simulate", "--sim.n_particles", "200",
                            "--sim.horizon", "3", "--sim.snapshot_times", "[1,2,3]", "--sim.histogram.hi", "1"},
                           {"--model.kind", "Pitchfork", "--model.lambda", "-0.5", "--model.sigma", "0.5",
                            "--model.alpha", "0.6"});
    REQUIRE(run(args).code == 0);
    auto args_b = args;
    args_b[3] = (dir / "b").string();
    args_b.insert(args_b.begin(), {"--threads", "3"});
    REQUIRE(run(args_b).code == 0);

    for (const char* name : {"histograms.csv", "absorption_times.csv", "summary.json"}) {
        CHECK(fs::exists(dir / "a" / name));
        CHECK(read_file(dir / "a" / name) == read_file(dir / "b" / name));
    }
    const auto csv = read_file(dir / "a" / "histograms.csv");
    CHECK(csv.rfind("# command: simulate\n# config_hash: ", 0) == 0);
    CHECK(csv.find("# seed: 9\n") != std::string::npos);
    CHECK(csv.find("snapshot_time,bin_lo,bin_hi,mass,survivor_count\n") != std::string::npos);

    const auto summary = json::parse(read_file(dir / "a" / "summary.json"));
    const auto md = summary["metadata"];
    CHECK(md["config_hash"] == hex64(fnv1a64(md["config"].dump())));
}

TEST_CASE("scale and density write CSV tables") {
    const auto s = run({"--format", "csv", "scale", "--model.kind", "Pitchfork", "--model.lambda", "1", "--model.sigma",
                        "1", "--model.alpha", "0.5", "--scale.c", "1", "--scale.grid", "[2]"});
    REQUIRE(s.code == 0);
    CHECK(s.out.find("x,G,p,v\n2,-1.33333333333") != std::string::npos);

    const auto d = run({"--format", "csv", "density", "--model.kind", "SaddleNode", "--model.a", "0.4",
                        "--model.sigma", "0.8", "--model.alpha", "1", "--density.grid", "[-2,-1]"});
    REQUIRE(d.code == 0);
    CHECK(d.out.find("x,density\n-2,") != std::string::npos);
}
