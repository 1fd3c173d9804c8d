#include <doctest.h>

#include <cstring>
#include <sstream>

#include "dbar/errors.hpp"
#include "dbar/io.hpp"
#include "dbar/testdata.hpp"

using namespace dbar;

namespace {

QForm sample_form() {
    GridSpec g = GridSpec::uniform(2, 6);
    g.res[1] = 7;
    g.lo[3] = -2.0;
    return testdata::exact_form(g, 1, 9).omega;
}

}  // namespace

TEST_CASE("cfld round trip is bit exact") {
    const QForm w = sample_form();
    std::stringstream a;
    io::write_cfld(a, w);
    const QForm r = io::read_cfld(a);
    CHECK(r.grid == w.grid);
    CHECK(r.q == w.q);
    REQUIRE(r.coeffs.size() == w.coeffs.size());
    for (const auto& [J, f] : w.coeffs)
        CHECK(std::memcmp(f.values.data(), r.coeffs.at(J).values.data(), f.size() * sizeof(cplx)) == 0);
    std::stringstream b;
    io::write_cfld(b, r);
    CHECK(a.str() == b.str());
}

TEST_CASE("cfld header layout") {
    std::stringstream s;
    io::write_cfld(s, QForm(GridSpec::uniform(1, 6), 0));
    const std::string bytes = s.str();
    CHECK(bytes.substr(0, 4) == "CFLD");
    std::uint32_t version = 0;
    std::memcpy(&version, bytes.data() + 4, 4);
    CHECK(version == 1u);
}

TEST_CASE("cfld rejects bad input") {
    std::stringstream bad_magic("XXXX0000");
    CHECK_THROWS_AS(io::read_cfld(bad_magic), FormatError);

    std::stringstream s;
    io::write_cfld(s, sample_form());
    std::string bytes = s.str();
    std::stringstream truncated(bytes.substr(0, bytes.size() - 5));
    CHECK_THROWS_AS(io::read_cfld(truncated), FormatError);

    bytes[4] = 2;
    std::stringstream wrong_version(bytes);
    CHECK_THROWS_AS(io::read_cfld(wrong_version), FormatError);
    CHECK_THROWS_AS(io::read_cfld_file("/nonexistent/field.cfld"), FormatError);
}

TEST_CASE("slice parsing") {
    const GridSpec g = GridSpec::uniform(2, 8);
    const io::Slice s = io::parse_slice("2=0,3=0.5", g);
    CHECK(s.size() == 2);
    CHECK(s.at(3) == 0.5);
    CHECK(io::parse_slice("", g).empty());
    CHECK_THROWS_AS(io::parse_slice("9=0", g), UsageError);
    CHECK_THROWS_AS(io::parse_slice("1=abc", g), UsageError);
    CHECK_THROWS_AS(io::parse_slice("1", g), UsageError);
}

TEST_CASE("csv export of a slice") {
    const GridSpec g = GridSpec::uniform(2, 8);
    QForm w(g, 1);
    w.set_increasing({1}, testdata::random_field(g, 1));
    std::stringstream os;
    io::write_csv(os, w, io::parse_slice("2=0,3=0", g));
    std::string header;
    std::getline(os, header);
    CHECK(header.find("c2_re") != std::string::npos);
    CHECK(header.find("c1_re") != std::string::npos);
    int rows = 0;
    for (std::string line; std::getline(os, line);) ++rows;
    CHECK(rows == 64);
}
