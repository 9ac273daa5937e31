#include "metriclab/cli.hpp"
#include "metriclab/errors.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace metriclab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("metric_lab_cli_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_command(args, out, err);
    return {code, out.str(), err.str()};
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("parse_real and parse_scales") {
    CHECK(parse_real("1/64") == 1.0 / 64);
    CHECK(parse_real("2^-3") == 0.125);
    CHECK(parse_real(" 0.5 ") == 0.5);
    CHECK_THROWS_AS(parse_real("abc"), LabError);
    CHECK_THROWS_AS(parse_real("1/0"), LabError);

    auto s = parse_scales("2^-3..2^-8");
    REQUIRE(s.size() == 6);
    CHECK(s.front() == 0.125);
    CHECK(s.back() == std::ldexp(1.0, -8));
    CHECK(parse_scales("0.5,0.25") == std::vector<double>{0.5, 0.25});
    CHECK(parse_real_list("1,2/4") == std::vector<double>{1.0, 0.5});
}

TEST_CASE("space specs") {
    auto spec = parse_space_spec("slit-carpet:r=harmonic;levels=3");
    CHECK(spec.kind == "slit-carpet");
    CHECK(spec.params.at("r") == "harmonic");
    CHECK(spec.params.at("levels") == "3");
    CHECK(parse_space_spec("square").params.empty());
    CHECK_THROWS_AS(parse_space_spec("slit-carpet:r"), LabError);
    CHECK_THROWS_AS(parse_space_spec(""), LabError);

    CHECK(make_generator(parse_space_spec("square")));
    CHECK(make_generator(parse_space_spec("snowflake:l=flat;metric=chordal")));
    CHECK(make_generator(parse_space_spec("model:kind=t")));
    try {
        make_generator(parse_space_spec("square:bogus=1"));
        FAIL("expected an unknown key error");
    } catch (const LabError& e) {
        CHECK(e.kind() == ErrorKind::malformed_input);
    }
    CHECK_THROWS_AS(make_generator(parse_space_spec("teapot")), LabError);
}

TEST_CASE("fnv1a64") {
    CHECK(fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("gen, validate and gh") {
    TempDir tmp;
    const std::string carpet = tmp / "carpet.json";
    auto g = run({"gen", "--kind", "slit-carpet", "--r", "0.5", "--levels", "1", "--h", "1/8", "--out", carpet});
    CHECK_MESSAGE(g.code == 0, g.err);
    CHECK(run({"validate", carpet}).code == 0);

    auto self = run({"gh", "--x", carpet, "--y", carpet, "--mode", "bounds"});
    CHECK(self.code == 0);
    auto doc = nlohmann::json::parse(self.out);
    CHECK(doc["upper"].get<double>() == 0.0);

    const std::string a = tmp / "a.json", b = tmp / "b.json";
    write(a, R"({"labels":["p","q"],"dist":[[0,1],[1,0]]})");
    write(b, R"({"labels":["p","q"],"dist":[[0,3],[3,0]]})");
    auto two = run({"gh", "--x", a, "--y", b, "--mode", "exact"});
    CHECK(two.code == 0);
    CHECK(nlohmann::json::parse(two.out)["exact"].get<double>() == 1.0);

    const std::string bad = tmp / "bad.json";
    write(bad, R"({"labels":["p","q","r"],"dist":[[0,1,5],[1,0,1],[5,1,0]]})");
    auto v = run({"validate", bad});
    CHECK(v.code == 1);
    CHECK(v.err.find("triangle") != std::string::npos);
    const std::string asym = tmp / "asym.json";
    write(asym, R"({"labels":["p","q"],"dist":[[0,1],[2,0]]})");
    CHECK(run({"validate", asym}).code == 2);
}

TEST_CASE("exit statuses") {
    TempDir tmp;
    const std::string broken = tmp / "broken.json";
    write(broken, "{\n  \"labels\": [\"p\",\n  ]\n}\n");
    auto m = run({"validate", broken});
    CHECK(m.code == 2);
    CHECK(m.err.find("line 3, column 3") != std::string::npos);

    CHECK(run({"scan", "--space", "square", "--bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"scan", "--space", "square:bogus=1", "--scales", "2^-2..2^-4"}).code == 2);

    // a window finer than the mesh cap is a domain error
    auto d = run({"scan", "--space", "model:kind=t", "--scales", "0.5,0.25,0.125", "--kappa", "100000"});
    CHECK(d.code == 1);
    CHECK(d.err.find(": ") != std::string::npos);

    const std::string a = tmp / "a.json";
    write(a, R"({"labels":["p","q"],"dist":[[0,1],[1,0]]})");
    CHECK(run({"gh", "--x", a, "--y", a, "--base-x", "5", "--base-y", "0"}).code == 1);
}

TEST_CASE("scan and qs outputs") {
    TempDir tmp;
    const std::string csv = tmp / "scan.csv";
    auto s = run({"scan", "--space", "square", "--center", "0,0", "--scales", "2^-2..2^-4", "--models", "quarter,half",
                  "--kappa", "8", "--no-timing", "--out", csv});
    CHECK_MESSAGE(s.code == 0, s.err);
    const std::string text = slurp(csv);
    CHECK(text.rfind("lambda,model,lower,upper,points,seconds\n", 0) == 0);
    CHECK(text.find(",NA\n") != std::string::npos);

    const std::string line = tmp / "line.json";
    std::string rows;
    for (int i = 0; i < 8; ++i) {
        rows += i ? ",[" : "[";
        for (int j = 0; j < 8; ++j) rows += (j ? "," : "") + std::to_string(std::abs(i - j));
        rows += "]";
    }
    write(line, R"({"labels":["0","1","2","3","4","5","6","7"],"dist":[)" + rows + "]}");
    const std::string env = tmp / "env.csv";
    auto q = run({"qs", "--domain", line, "--out", env});
    CHECK_MESSAGE(q.code == 0, q.err);
    CHECK(slurp(env).rfind("t,s", 0) == 0);
}

TEST_CASE("reproduce") {
    TempDir tmp;
    const std::string empty = tmp / "empty.json";
    write(empty, R"({"experiments":[]})");
    auto e = run({"reproduce", empty, "--out-dir", tmp / "out0"});
    CHECK(e.code == 0);
    auto index = nlohmann::json::parse(slurp(tmp / "out0/index.json"));
    CHECK(index["status"] == "ok");
    CHECK(index["experiments"].empty());

    write(tmp / "gen.json", R"({"args":["gen","--kind","square","--h","1/4","--out","{out}/square.json"]})");
    write(tmp / "manifest.json",
          R"({"experiments":[{"name":"square","spec":"gen.json"},{"name":"gap","spec":"absent.json"}]})");
    auto r = run({"reproduce", tmp / "manifest.json", "--out-dir", tmp / "out1"});
    CHECK(r.code == 1);
    index = nlohmann::json::parse(slurp(tmp / "out1/index.json"));
    CHECK(index["status"] == "failed");
    REQUIRE(index["experiments"].size() == 2);
    CHECK(index["experiments"][0]["status"] == "ok");
    CHECK(index["experiments"][0]["outputs"][0]["path"] == "square.json");
    CHECK(index["experiments"][0]["outputs"][0]["fnv1a64"].is_string());
    CHECK(index["experiments"][1]["status"] == "missing");

    write(tmp / "ok.json", R"({"experiments":[{"name":"square","spec":"gen.json"}]})");
    CHECK(run({"reproduce", tmp / "ok.json", "--out-dir", tmp / "out2"}).code == 0);
    CHECK(run({"reproduce", tmp / "ok.json", "--out-dir", tmp / "out3"}).code == 0);
    CHECK(slurp(tmp / "out2/square.json") == slurp(tmp / "out3/square.json"));
    auto i2 = nlohmann::json::parse(slurp(tmp / "out2/index.json"));
    auto i3 = nlohmann::json::parse(slurp(tmp / "out3/index.json"));
    CHECK(i2["experiments"][0]["outputs"] == i3["experiments"][0]["outputs"]);

    write(tmp / "nested.json", R"({"args":["reproduce","x.json"]})");
    write(tmp / "nm.json", R"({"experiments":[{"name":"n","spec":"nested.json"}]})");
    CHECK(run({"reproduce", tmp / "nm.json", "--out-dir", tmp / "out4"}).code != 0);
}
