#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "suborbit/cli.hpp"
#include "suborbit/error.hpp"
#include "suborbit/io.hpp"
#include "suborbit/sphere_triangles.hpp"
#include "suborbit/witness.hpp"

using namespace suborbit;
using cli::dispatch;
using io::Json;

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "suborbit_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

Json run_doc(const std::vector<std::string>& args, int expected_exit) {
    const auto r = dispatch(args);
    CHECK_MESSAGE(r.exit_code == expected_exit, r.output);
    return io::parse(r.output);
}

std::string error_type(const std::vector<std::string>& args) {
    const auto r = dispatch(args);
    CHECK(r.exit_code == 1);
    const auto doc = io::parse(r.output);
    CHECK(doc["kind"] == "error");
    return doc["error"]["type"].get<std::string>();
}

}  // namespace

TEST_CASE("json helpers") {
    Vec v(3);
    v << 0.1, -2.5, 1e-300;
    CHECK(io::vec_from_json(io::parse(io::dump(io::to_json(v)))) == v);
    Mat m(2, 3);
    m << 1.0 / 3, 2, 3, 4, 5, 6.02e23;
    CHECK(io::mat_from_json(io::parse(io::dump(io::to_json(m)))) == m);
    CHECK_THROWS_AS(io::parse("{not json"), Error);
    CHECK_THROWS_AS(io::expect_kind(io::document("witness"), "certificate"), Error);
    auto future = io::document("witness");
    future["version"] = "2.0.0";
    CHECK_THROWS_AS(io::expect_kind(future, "witness"), Error);
    CHECK_THROWS_AS(io::to_json(Vec(Vec::Constant(1, NAN))), Error);
    CHECK(io::dump(io::document("x")).back() == '\n');
}

TEST_CASE("witness documents round-trip bit for bit") {
    const auto c = sphere::decompose_in_Rp({2.5, 1.5, 2.0}, 7);
    REQUIRE(c.has_value());
    const auto w = sphere::witness_from_certificate(*c);
    const auto text = io::dump(io::witness_document(w));
    const auto back = io::witness_from_json(io::parse(text));
    CHECK(io::dump(io::witness_document(back)) == text);
    CHECK(verify_witness(back, 1e-8).pass);
    const auto cert_text = io::dump(io::certificate_document(*c, {2.5, 1.5, 2.0}));
    const auto cert = io::certificate_from_json(io::parse(cert_text));
    CHECK(cert.p == 7);
    CHECK(cert.atoms.size() == c->atoms.size());
    CHECK(cert.origin_weight == c->origin_weight);
}

TEST_CASE("worked examples") {
    const auto a = run_doc({"classify-circle-triangle", "--arcs", "1/4,1/4,1/2"}, 0);
    CHECK(a["verdict"] == "right_angled");
    CHECK(a["witness"]["kind"] == "witness");
    CHECK(a["verification"]["pass"] == true);

    const auto b = run_doc({"decompose", "--sides", "4,3,3", "--p", "5"}, 2);
    CHECK(b["verdict"] == "infeasible");

    const auto t = run_doc({"torus-gap-verify", "--n", "4", "--trials", "50", "--seed", "7"}, 0);
    CHECK(t["min_total"].get<double>() >= 0.0625);
}

TEST_CASE("exit codes follow verdicts") {
    CHECK(run_doc({"classify-circle-triangle", "--arcs", "5/18,5/18,8/18"}, 2)["verdict"] == "not_subtoral");
    CHECK(run_doc({"classify-circle-triangle", "--arcs", "1/5,1/5,3/5"}, 0)["verdict"] == "zp_suborbit");
    CHECK(run_doc({"orbit-harness", "--p", "7", "--j", "2", "--k", "5", "--blocks", "3"}, 0)["residual"].get<double>() <
          1e-9);
    CHECK(run_doc({"far-point", "--n", "3", "--trials", "5"}, 0)["min_distance"].get<double>() >= 0.25);
    CHECK(run_doc({"embed-triangle", "--sides", "1,1,1"}, 0)["kind"] == "embedding");
    CHECK(run_doc({"knaster-search", "--pgon", "3", "--dim", "4", "--map", "x1", "--restarts", "16"}, 0)["verdict"] ==
          "found");
}

TEST_CASE("errors are machine-readable") {
    CHECK(error_type({"bogus"}) == "unknown_command");
    CHECK(error_type({"--seed", "3", "frobnicate"}) == "unknown_command");
    CHECK(error_type({"verify-witness", "--input", "/nonexistent/file.json"}) == "invalid_input");
    const auto bad = scratch("bad.json");
    write_file(bad, "{\"kind\": ");
    CHECK(error_type({"verify-witness", "--input", bad.string()}) == "parse_error");
    const auto mixed = scratch("mixed.json");
    write_file(mixed, R"({"kind":"config","version":"1.0.0","points":[[0,0],[1,0,0]],"labels":["a","b"]})");
    CHECK(error_type({"embed-simplex", "--input", mixed.string(), "--p", "5"}) == "dimension_mismatch");
    CHECK(error_type({"orbit-harness", "--p", "2", "--j", "1", "--k", "1"}) == "invalid_input");
    CHECK(error_type({"classify-circle-triangle", "--arcs", "1/2,1/2"}) == "parse_error");
    CHECK(error_type({"knaster-search", "--pgon", "3", "--dim", "4", "--map", "x1 +"}) == "parse_error");
    CHECK(error_type({}) != "");
}

TEST_CASE("documents cross subcommand boundaries") {
    const auto cert = scratch("cert.json");
    const auto wit = scratch("wit.json");
    auto r = dispatch({"decompose", "--sides", "1.5,1.5,1.5", "--p", "3", "--output", cert.string()});
    CHECK(r.exit_code == 0);
    REQUIRE(r.output_path.has_value());
    write_file(*r.output_path, r.output);
    r = dispatch({"witness", "--input", cert.string()});
    CHECK(r.exit_code == 0);
    write_file(wit, r.output);
    const auto v = run_doc({"verify-witness", "--input", wit.string()}, 0);
    CHECK(v["verdict"] == "verified");

    // Embedding reports carry their witness; verify it against the input.
    const auto cfg = scratch("tri.json");
    write_file(cfg, R"({"kind":"config","version":"1.0.0","points":[[0,0],[1,0],[0.25,0.9]],"labels":["A","B","C"]})");
    const auto emb = scratch("emb.json");
    r = dispatch({"embed-simplex", "--input", cfg.string(), "--p", "7"});
    CHECK(r.exit_code == 0);
    write_file(emb, r.output);
    const auto ev = run_doc({"verify-witness", "--input", emb.string(), "--target", cfg.string()}, 0);
    CHECK(ev["verdict"] == "verified");

    // A tampered witness is rejected with exit 2.
    auto doc = io::parse(r.output)["witness"];
    doc["base"][0] = doc["base"][0].get<double>() + 0.5;
    write_file(wit, io::dump(doc));
    CHECK(run_doc({"verify-witness", "--input", wit.string()}, 2)["verdict"] == "rejected");
}

TEST_CASE("output is deterministic and quiet suppresses diagnostics") {
    const std::vector<std::string> args{"knaster-search", "--pgon", "3", "--dim", "4", "--random-quadratic", "1",
                                        "--restarts", "16"};
    const auto a = dispatch(args);
    const auto b = dispatch(args);
    CHECK(a.output == b.output);
    auto quiet = args;
    quiet.push_back("--quiet");
    const auto q = dispatch(quiet);
    CHECK(q.diagnostics.empty());
    CHECK(q.output == a.output);
    auto other = args;
    other.insert(other.end(), {"--seed", "43"});
    CHECK(dispatch(other).output != a.output);
}
