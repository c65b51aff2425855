#include <catch2/catch_amalgamated.hpp>

#include "nforge/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace nforge;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string("nf_test_") + name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

const char* kSweedler = R"({
  "cyclotomic_order": 2,
  "F": [2],
  "G": [2],
  "tau0_exponents": [[1]],
  "index": [{"f": [1], "g": [1]}],
  "max_degree": 6
})";

} // namespace

TEST_CASE("document round trip is canonical") {
    Json doc = Json::parse(kSweedler);
    DoubleDatum d = parse_double_datum(doc);
    Json ser = serialize_double_datum(d);
    DoubleDatum d2 = parse_double_datum(ser);
    CHECK(serialize_double_datum(d2) == ser);
    CHECK(d2.root_order() == 2);
    CHECK(d2.rank() == 1);
}

TEST_CASE("schema errors carry JSON pointer paths") {
    Json missing = Json::parse(R"({"cyclotomic_order": 2, "F": [2], "G": [2],
                                   "tau0_exponents": [[1]]})");
    try {
        parse_double_datum(missing);
        FAIL("expected InvalidInput");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("/index") != std::string::npos);
    }

    Json badshape = Json::parse(R"({"cyclotomic_order": 2, "F": [2, 2], "G": [2],
                                    "tau0_exponents": [[1]],
                                    "index": [{"f": [1, 0], "g": [1]}]})");
    try {
        parse_double_datum(badshape);
        FAIL("expected InvalidInput");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("tau0_exponents") != std::string::npos);
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
}

TEST_CASE("scalar literals") {
    using detail_io::parse_scalar;
    CHECK(parse_scalar(Json("2/3"), 4, "/x") == Cyc::from_rational(4, Rational(2, 3)));
    CHECK(parse_scalar(Json("-1"), 4, "/x") == Cyc::from_rational(4, -1));
    CHECK(parse_scalar(Json("z^2"), 4, "/x") == Cyc::zeta_pow(4, 2));
    CHECK(parse_scalar(Json("-z"), 4, "/x") == -Cyc::zeta_pow(4, 1));
    CHECK(parse_scalar(Json("3*z^2"), 4, "/x") == Cyc::zeta_pow(4, 2) * Rational(3));
    CHECK(parse_scalar(Json(2), 4, "/x") == Cyc::zeta_pow(4, 2));
    CHECK(parse_scalar(Json::array({1, 2}), 4, "/x") ==
          Cyc::from_rational(4, Rational(1, 2)));
    CHECK_THROWS_AS(parse_scalar(Json("2x"), 4, "/x"), InvalidInput);
}

TEST_CASE("run: reports are deterministic and embed the input hash") {
    std::string path = write_temp("sweedler.json", kSweedler);
    std::ostringstream out1, out2, err;
    int rc1 = run({"double", "build", "--input", path}, out1, err);
    int rc2 = run({"double", "build", "--input", path}, out2, err);
    CHECK(rc1 == 0);
    CHECK(rc2 == 0);
    CHECK(out1.str() == out2.str());
    Json rep = Json::parse(out1.str());
    CHECK(rep["input_hash"] == content_hash(kSweedler));
    CHECK(rep["result"]["dimension"] == 16);
    std::remove(path.c_str());
}

TEST_CASE("run: exit codes") {
    std::ostringstream out, err;
    // missing file -> validation failure
    CHECK(run({"nichols", "dims", "--input", "nf_no_such_file.json"}, out, err) == 1);
    // schema violation -> 1 with a diagnostic on the error stream
    std::string bad = write_temp("bad.json", R"({"cyclotomic_order": 2})");
    std::ostringstream err2;
    CHECK(run({"nichols", "dims", "--input", bad}, out, err2) == 1);
    CHECK(err2.str().find("schema") != std::string::npos);
    std::remove(bad.c_str());
    // resource bound -> 2
    std::string huge = write_temp("huge.json", R"({
        "cyclotomic_order": 2, "F": [1048576], "G": [1048576],
        "tau0_exponents": [[1]], "index": [{"f": [1], "g": [1]}]})");
    std::ostringstream err3;
    CHECK(run({"double", "center", "--input", huge}, out, err3) == 2);
    std::remove(huge.c_str());
}

TEST_CASE("run: text format renders flat tables") {
    std::string path = write_temp("sweedler2.json", kSweedler);
    std::ostringstream out, err;
    CHECK(run({"nichols", "dims", "--input", path, "--format", "text"}, out, err) == 0);
    CHECK(out.str().find("result.total\t2") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("run: gelaki document defaults its cyclotomic order") {
    std::string path = write_temp("gelaki.json", R"({
        "G": [2], "tau0_exponents": [[1]],
        "carriers": [{"g": [1], "n": 1, "M_exponents": [[0]]}]})");
    std::ostringstream out, err;
    CHECK(run({"triangular", "validate", "--input", path}, out, err) == 0);
    Json rep = Json::parse(out.str());
    CHECK(rep["result"]["quotient_dimension"] == 4);
    CHECK(rep["result"]["quotient_triangular"] == true);
    std::remove(path.c_str());
}
