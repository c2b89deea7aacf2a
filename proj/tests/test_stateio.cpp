#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pptbound/families.hpp"
#include "pptbound/stateio.hpp"
#include "test_support.hpp"

using namespace pptbound;
using namespace pptbound::testing;

namespace {

std::filesystem::path scratch_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "pptbound_stateio";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_SUITE("stateio") {

TEST_CASE("state files round-trip bit-exactly") {
    const QuantumState s = cckkl_a_state(0.03, 0.03);
    const auto path = scratch_file("roundtrip.json");
    const std::map<std::string, std::string> metadata = {{"family", "cckkl-a"},
                                                         {"params", "q=0.03;r=0.03"}};
    write_state_file(path, s.matrix(), s.factors(), metadata);

    const StateFile file = read_state_file(path);
    CHECK(max_abs_diff(file.matrix, s.matrix()) == 0.0);
    CHECK(file.factors == s.factors());
    CHECK(file.metadata.at("family") == "cckkl-a");

    const QuantumState back = to_state(file);
    CHECK(max_abs_diff(back.matrix(), s.matrix()) == 0.0);
}

TEST_CASE("awkward double values survive the round trip") {
    ComplexMatrix m(2, 2);
    m(0, 0) = Complex{1.0 / 3.0, 5e-324};  // repeating binary fraction + denormal
    m(0, 1) = Complex{-0.0, 0.1};
    m(1, 0) = Complex{-0.0, -0.1};
    m(1, 1) = Complex{2.0 / 3.0, 1e-308};
    const auto path = scratch_file("doubles.json");
    write_state_file(path, m, {{2, Owner::alice, Role::key}}, {});
    const StateFile file = read_state_file(path);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(file.matrix(i, j).real() == m(i, j).real());
            CHECK(file.matrix(i, j).imag() == m(i, j).imag());
        }
    }
}

TEST_CASE("non-finite entries are rejected on write") {
    ComplexMatrix m = ComplexMatrix::identity(2);
    m(0, 0) = Complex{std::numeric_limits<double>::quiet_NaN(), 0.0};
    CHECK_THROWS_AS(write_state_file(scratch_file("nan.json"), m,
                                     {{2, Owner::alice, Role::key}}, {}),
                    IoError);
}

TEST_CASE("schema violations are IoErrors") {
    const auto path = scratch_file("schema.json");

    auto write_text = [&](const std::string& text) {
        std::ofstream out(path);
        out << text;
    };

    write_text("{ not json");
    CHECK_THROWS_AS(read_state_file(path), IoError);

    write_text(R"({"dims": [{"dim": 2, "owner": "alice", "role": "key"}],
                  "matrix": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]})");
    CHECK_THROWS_AS(read_state_file(path), IoError);  // missing schema_version

    write_text(R"({"schema_version": "1",
                  "dims": [{"dim": 2, "owner": "carol", "role": "key"}],
                  "matrix": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]})");
    CHECK_THROWS_AS(read_state_file(path), IoError);  // unknown owner

    write_text(R"({"schema_version": "1",
                  "dims": [{"dim": 4, "owner": "alice", "role": "key"}],
                  "matrix": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]})");
    CHECK_THROWS_AS(read_state_file(path), IoError);  // dims/matrix mismatch

    write_text(R"({"schema_version": "1",
                  "dims": [{"dim": 2, "owner": "alice", "role": "key"}],
                  "matrix": [[[1.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]})");
    CHECK_THROWS_AS(read_state_file(path), IoError);  // entry is not an [re, im] pair
}

TEST_CASE("format_sig12") {
    CHECK(format_sig12(1.0) == "1.0");
    CHECK(format_sig12(0.5) == "0.5");
    CHECK(format_sig12(0.20710678118654752) == "0.207106781187");
    CHECK(format_sig12(1e-15) == "1e-15");
    CHECK(format_sig12(-2.0 / 3.0) == "-0.666666666667");
}

TEST_CASE("report rows serialize to the fixed CSV layout") {
    CHECK(report_csv_header() ==
          "family,params,dims,is_ppt,min_pt_eig,a0011_hermitian,a0011_norm,prop1_lower,"
          "theorem1_lower,hphh_lower,lemma1_margin,opt_upper,seed");

    ReportRow row;
    row.family = "cckkl-a";
    row.params = "q=0.03;r=0.03";
    row.dims = "2x2x2x2";
    row.is_ppt = true;
    row.min_pt_eig = -1e-17;
    row.a0011_hermitian = true;
    row.a0011_norm = 0.2577460325557;
    row.prop1_lower = 0.2422539674443;
    row.theorem1_lower = 1.0 / 6.0;
    const std::string csv = report_csv_row(row);
    CHECK(csv == "cckkl-a,q=0.03;r=0.03,2x2x2x2,true,-1e-17,true,0.257746032556,"
                 "0.242253967444,0.166666666667,,,,");

    // a row-level error leaves the verdict columns empty
    ReportRow failed;
    failed.family = "hphh-fourier";
    failed.params = "d=40";
    failed.error = "dimension cap";
    const std::string bad = report_csv_row(failed);
    CHECK(bad == "hphh-fourier,d=40,,,,,,,,,,,");
}

TEST_CASE("to_state rejects invalid contents") {
    const QuantumState s = cckkl_a_state(0.03, 0.03);
    const auto path = scratch_file("invalid.json");
    ComplexMatrix doubled = 2.0 * s.matrix();
    write_state_file(path, doubled, s.factors(), {});
    CHECK_THROWS_AS(to_state(read_state_file(path)), NormalizationError);
}

} // TEST_SUITE
