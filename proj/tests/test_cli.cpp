#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "braidlab/cli.hpp"

using namespace braidlab;
using nlohmann::json;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("braidlab_test_" + std::to_string(std::rand()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    if (out_text) *out_text = out.str() + err.str();
    return code;
}

std::string write_flip(const TempDir& dir) {
    auto b = flip_braiding(2);
    std::ofstream f(dir.file("flip.braid"));
    f << save_braiding(b).dump();
    return dir.file("flip.braid");
}

std::string write_jordan(const TempDir& dir) {
    auto b = jordan_braiding(Scalar(1L));
    std::ofstream f(dir.file("jordan.braid"));
    f << save_braiding(b).dump();
    return dir.file("jordan.braid");
}

} // namespace

TEST_CASE("braidcheck exit codes") {
    TempDir dir;
    CHECK(run_cli({"braidcheck", write_flip(dir)}) == 0);
    // mutate one entry so the braid equation fails
    auto b = flip_braiding(2);
    SparseMat t = b.table;
    t.set(pair_index(1, 2, 2), pair_index(1, 1, 2), Scalar(1L));
    std::ofstream f(dir.file("bad.braid"));
    f << save_braiding(make_braiding(2, Field::Q, std::move(t))).dump();
    f.close();
    std::string text;
    CHECK(run_cli({"braidcheck", dir.file("bad.braid")}, &text) == 1);
    CHECK(text.find("fail") != std::string::npos);
}

TEST_CASE("usage and input errors exit 3") {
    TempDir dir;
    CHECK(run_cli({"braidcheck", dir.file("missing.braid")}) == 3);
    CHECK(run_cli({"bogus"}) == 3);
    CHECK(run_cli({}) == 3);
    std::ofstream f(dir.file("broken.json"));
    f << "{ not json";
    f.close();
    CHECK(run_cli({"braidcheck", dir.file("broken.json")}) == 3);
    // singular table
    json doc = {{"field", "Q"},
                {"dim", 1},
                {"entries", {{{"k", 1}, {"l", 1}, {"i", 1}, {"j", 1}, {"c", "0"}}}}};
    std::ofstream g(dir.file("singular.braid"));
    g << doc.dump();
    g.close();
    CHECK(run_cli({"braidcheck", dir.file("singular.braid")}) == 3);
}

TEST_CASE("rigid subcommand") {
    TempDir dir;
    CHECK(run_cli({"rigid", write_jordan(dir)}) == 0);
}

TEST_CASE("triangular subcommand: jordan left yes, right refuted") {
    TempDir dir;
    std::string path = write_jordan(dir);
    std::string text;
    CHECK(run_cli({"triangular", path, "--side", "left"}, &text) == 0);
    CHECK(run_cli({"triangular", path, "--side", "right"}, &text) == 1);
    CHECK(text.find("defective line operator") != std::string::npos);
}

TEST_CASE("triangular certificate JSON round trips through the schema") {
    TempDir dir;
    std::string path = write_jordan(dir);
    std::string report = dir.file("report.json");
    CHECK(run_cli({"triangular", path, "--side", "left", "--emit-json", report}) == 0);
    std::ifstream in(report);
    json doc;
    in >> doc;
    CHECK(doc["schema"] == "braidlab/1");
    CHECK(doc["subcommand"] == "triangular");
    CHECK(doc["verdict"] == "holds");
    CHECK(doc["certificate"]["side"] == "left");
    CHECK(doc["certificate"]["basis_matrix"].size() == 2);
    // the two stated jordan residuals
    CHECK(doc["certificate"]["residuals"].size() == 2);
}

TEST_CASE("diagonal subcommand") {
    TempDir dir;
    CHECK(run_cli({"diagonal", write_flip(dir)}) == 0);
    std::string text;
    CHECK(run_cli({"diagonal", write_jordan(dir)}, &text) == 1);
    CHECK(text.find("defective") != std::string::npos);
}

TEST_CASE("frt subcommand report") {
    TempDir dir;
    // c = 2 tau
    SparseMat t(4, 4);
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) t.set(pair_index(j, i, 2), pair_index(i, j, 2), Scalar(2));
    std::ofstream f(dir.file("qtau.braid"));
    f << save_braiding(make_braiding(2, Field::Q, std::move(t))).dump();
    f.close();
    std::string report = dir.file("frt.json");
    std::string text;
    CHECK(run_cli({"frt", dir.file("qtau.braid"), "--degree", "2", "--emit-json", report},
                  &text) == 0);
    CHECK(text.find("A dims: 1 4 10") != std::string::npos);
    std::ifstream in(report);
    json doc;
    in >> doc;
    CHECK(doc["report"]["a_dims"] == json::array({1, 4, 10}));
    CHECK(doc["report"]["radical_filtered_dims"][1] == 3);
    CHECK(doc["report"]["reconstruction_ok"] == true);
}

TEST_CASE("grouptype subcommand with braiding emission") {
    TempDir dir;
    json doc = {
        {"group", {{"kind", "fg_abelian"}, {"orders", {4}}}},
        {"degrees", {{1}, {1}}},
        {"action",
         {{"g1", json::array({json::array({"-1", "0"}), json::array({"0", "-1"})})}}},
    };
    std::ofstream f(dir.file("z4.yd"));
    f << doc.dump();
    f.close();
    std::string text;
    std::string braid_out = dir.file("z4.braid");
    CHECK(run_cli({"grouptype", dir.file("z4.yd"), "--degree", "2", "--emit-braiding", braid_out},
                  &text) == 0);
    CHECK(text.find("invariant factors: 2") != std::string::npos);
    // the emitted braiding is a valid braidcore input
    CHECK(run_cli({"braidcheck", braid_out}) == 0);
}

TEST_CASE("grouptype rejects invalid data with exit 1") {
    TempDir dir;
    json doc = {
        {"group", {{"kind", "fg_abelian"}, {"orders", {2}}}},
        {"degrees", {{1}, {1}}},
        {"action", {{"g1", json::array({json::array({"1", "1"}), json::array({"0", "1"})})}}},
    };
    std::ofstream f(dir.file("bad.yd"));
    f << doc.dump();
    f.close();
    std::string text;
    CHECK(run_cli({"grouptype", dir.file("bad.yd")}, &text) == 1);
    CHECK(text.find("g1^2") != std::string::npos);
}

TEST_CASE("uq subcommand emits a braidcore-compatible braiding over Qv") {
    TempDir dir;
    std::string braid_out = dir.file("uq1.braid");
    std::string report = dir.file("uq1.json");
    std::string text;
    CHECK(run_cli({"uq", "--n", "1", "--degree", "2", "--emit-braiding", braid_out, "--emit-json",
                   report},
                  &text) == 0);
    CHECK(text.find("right triangular: yes") != std::string::npos);
    CHECK(run_cli({"braidcheck", braid_out}) == 0);
    CHECK(run_cli({"triangular", braid_out, "--side", "right"}) == 0);
    std::ifstream in(report);
    json doc;
    in >> doc;
    CHECK(doc["report"]["grouplike_image_count"] == 2);
    CHECK(doc["report"]["skew_primitives"].size() == 1);
    CHECK(doc["relations_match"] == true);
}

TEST_CASE("convert round trip through files") {
    TempDir dir;
    std::string flip_path = write_flip(dir);
    std::string r_path = dir.file("r.braid");
    std::string text;
    CHECK(run_cli({"convert", flip_path, "--direction", "c-to-R", "--out", r_path}, &text) == 0);
    CHECK(text.find("pass") != std::string::npos);
    std::string back = dir.file("back.braid");
    CHECK(run_cli({"convert", r_path, "--direction", "R-to-c", "--out", back}) == 0);
    std::ifstream a(flip_path), b(back);
    json da, db;
    a >> da;
    b >> db;
    CHECK(da["entries"] == db["entries"]);
}

TEST_CASE("identical runs produce byte-identical reports") {
    TempDir dir;
    std::string path = write_jordan(dir);
    std::string r1 = dir.file("r1.json"), r2 = dir.file("r2.json");
    CHECK(run_cli({"frt", path, "--degree", "2", "--emit-json", r1}) == 0);
    CHECK(run_cli({"frt", path, "--degree", "2", "--emit-json", r2}) == 0);
    std::ifstream f1(r1), f2(r2);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    CHECK_FALSE(s1.str().empty());
}
