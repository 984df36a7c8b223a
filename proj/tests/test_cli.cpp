#include "snctrop/cli.hpp"
#include "snctrop/io.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace snctrop;

namespace {

struct Result {
    int code;
    std::string out, err;
};

std::string data(const std::string& name) { return std::string(SNCTROP_DATA_DIR) + "/" + name; }

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "snctrop");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

io::Json payload(const Result& r, const std::string& schema) { return io::payload_of(io::parse(r.out), schema); }

}  // namespace

TEST(Cli, StaircaseHasTwentyFourCells) {
    auto r = run({"triangulate", "staircase", "--left", data("2d2.json"), "--right", data("2d1.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(payload(r, "subdivision").at("cells").size(), 24u);
}

TEST(Cli, RigidityVerdicts) {
    auto r = run({"check", "rigid", "--complex", data("triangle.json"), "--curve", data("spider.json")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "OK\nrigid, deformation dimension 0\n");
    r = run({"check", "rigid", "--complex", data("triangle.json"), "--curve", data("inner-triangle.json")});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(first_line(r.out), "FAIL reason=deformable dimension=1");
    r = run({"check", "--strict", "rigid", "--complex", data("triangle.json"), "--curve", data("inner-triangle.json")});
    EXPECT_EQ(r.code, 1);
    r = run({"check", "rigid", "--strict", "--complex", data("triangle.json"), "--curve", data("inner-triangle.json")});
    EXPECT_EQ(r.code, 1);
}

TEST(Cli, StarOrder) {
    auto r = run({"star", "order", "--w", data("line.json"), "--v", data("conic.json"), "--rank2-exact"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(first_line(r.out), "less, witness attached");
    r = run({"star", "order", "--w", data("conic.json"), "--v", data("line.json"), "--rank2-exact", "--json"});
    ASSERT_EQ(r.code, 0);
    auto p = payload(r, "ordering-report");
    EXPECT_EQ(p.at("relation"), "incomparable");
    EXPECT_EQ(p.at("certificate").at("kind"), "volume");
}

TEST(Cli, CheckCommands) {
    auto S = data("four-triangles.json");
    EXPECT_EQ(run({"check", "unimodular", "--subdivision", S}).out.substr(0, 3), "OK\n");
    EXPECT_EQ(run({"check", "regular", "--subdivision", S}).out.substr(0, 3), "OK\n");
    EXPECT_EQ(first_line(run({"check", "flat", "--map", data("diagonal-blowup.json")}).out), "FAIL reason=cone-not-surjective cone={2}");
    EXPECT_EQ(first_line(run({"check", "disjoint", "--contact", data("contact.json")}).out).substr(0, 26), "FAIL reason=shared-column ");
    EXPECT_EQ(first_line(run({"check", "balanced", "--curve", data("spider.json")}).out), "OK");
    EXPECT_EQ(first_line(run({"check", "balanced", "--star", data("conic.json")}).out), "OK");
    EXPECT_EQ(first_line(run({"check", "stable", "--curve", data("spider.json")}).out), "OK");
    // An explicit context overrides the embedded one.
    auto r = run({"check", "balanced", "--curve", data("spider.json"), "--context", data("triangle-context.json")});
    EXPECT_EQ(first_line(r.out), "OK");
}

TEST(Cli, Constructions) {
    auto r = run({"polytope", "newton", "--dims", "2,1", "--degrees", "2,2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(payload(r, "polytope").at("vertices").size(), 6u);
    r = run({"triangulate", "search", "--polytope", data("figure2.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(payload(r, "subdivision").at("cells").size(), 3u);
    r = run({"lift-contact", "--contact", data("contact.json"), "--map", data("diagonal-blowup.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(payload(r, "contactmatrix").at("rows")[0], io::Json::array({0, 0, 1}));
    r = run({"dualcomplex", "--subdivision", data("four-triangles.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(payload(r, "polyhedralcomplex").at("vertices").size(), 4u);
    r = run({"star", "downset", "--v", data("conic.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_GT(payload(r, "star-list").at("count").get<std::size_t>(), 2u);
}

TEST(Cli, CurveDualityRoundTrip) {
    auto r = run({"curve", "from-subdivision", "--subdivision", data("four-triangles.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto path = testing::TempDir() + "snctrop_curve.json";
    {
        std::ofstream f(path);
        f << r.out;
    }
    auto d = run({"curve", "dualize", "--curve", path});
    ASSERT_EQ(d.code, 0) << d.err;
    auto orig = io::payload_of(io::read_file(data("four-triangles.json")), "subdivision");
    EXPECT_EQ(payload(d, "subdivision").at("cells"), orig.at("cells"));
    auto a = run({"curve", "asymptotic", "--curve", path});
    EXPECT_EQ(payload(a, "star").at("vectors").size(), 3u);
}

TEST(Cli, EnumerateRigid) {
    auto r = run({"enumerate", "rigid", "--complex", data("triangle.json"), "--context", data("triangle-context.json"), "--beta", "1,1,1",
                  "--max-vertices", "4", "--max-weight", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto p = payload(r, "rigid-report");
    EXPECT_EQ(p.at("count"), p.at("types").size());
    EXPECT_GT(p.at("count").get<std::size_t>(), 0u);
}

TEST(Cli, InputErrors) {
    EXPECT_EQ(run({"check", "rigid", "--complex", "/nonexistent.json", "--curve", data("spider.json")}).code, 2);
    EXPECT_EQ(run({"check", "stable", "--curve", data("line.json")}).code, 2);
    EXPECT_EQ(run({"check", "bogus"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"polytope", "hull", "--point", "0,0", "--point", "1"}).code, 2);
    EXPECT_EQ(run({"enumerate", "subdivisions", "--polytope", data("figure2.json")}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, DeterministicAcrossThreads) {
    std::vector<std::string> cmd{"enumerate", "rigid", "--complex", data("triangle.json"), "--context", data("triangle-context.json"),
                                 "--beta", "1,1,1", "--max-vertices", "3"};
    auto base = run(cmd).out;
    for (const char* t : {"1", "4", "8"}) {
        auto args = cmd;
        args.insert(args.begin(), {"--threads", t});
        EXPECT_EQ(run(args).out, base);
    }
}
