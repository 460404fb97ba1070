#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pplab/config.hpp"
#include "pplab/report_io.hpp"

using namespace pplab;

TEST_CASE("config: minimal valid text with defaults") {
    Config c = Config::parse_text("dim = 2\npoints = 17  # comment\n\n# full-line comment\n");
    CHECK(c.get_long("dim") == 2);
    CHECK(c.get_long("points") == 17);
    CHECK(c.get_double("tol", 1e-8) == 1e-8);  // default fills in
    CHECK(c.get_string("problem", std::string("poisson")) == "poisson");
    c.finish();
}

TEST_CASE("config: unknown key is a hard error naming the line") {
    Config c = Config::parse_text("dim = 2\nlamda = 1\n");
    CHECK(c.get_long("dim") == 2);
    try {
        c.finish();
        FAIL("expected ConfigError");
    } catch (const ConfigError& ex) {
        const std::string msg = ex.what();
        CHECK(msg.find("lamda") != std::string::npos);
        CHECK(msg.find("line 2") != std::string::npos);
    }
}

TEST_CASE("config: constraint violation names the key") {
    try {
        config_require(false, "lambda", "need 0 < lambda <= Lambda");
        FAIL("expected ConfigError");
    } catch (const ConfigError& ex) {
        const std::string msg = ex.what();
        CHECK(msg.find("lambda") != std::string::npos);
        CHECK(msg.find("0 < lambda <= Lambda") != std::string::npos);
    }
}

TEST_CASE("config: malformed lines, duplicates, bad numbers") {
    CHECK_THROWS_AS(Config::parse_text("just some words\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse_text("a = 1\na = 2\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse_text("= 3\n"), ConfigError);

    Config c = Config::parse_text("tol = fast\n");
    try {
        c.get_double("tol");
        FAIL("expected ConfigError");
    } catch (const ConfigError& ex) {
        const std::string msg = ex.what();
        CHECK(msg.find("tol") != std::string::npos);
        CHECK(msg.find("fast") != std::string::npos);
    }

    Config c2 = Config::parse_text("points = 16.5\n");
    CHECK_THROWS_AS(c2.get_long("points"), ConfigError);

    Config c3 = Config::parse_text("");
    CHECK_THROWS_AS(c3.get_double("missing"), ConfigError);
}

TEST_CASE("fmt_num round-trips and is stable") {
    for (double v : {0.0, 1.0, -1.5, 0.1, 1e-17, 3.141592653589793, 1e300}) {
        CHECK(std::stod(fmt_num(v)) == v);
        CHECK(fmt_num(v) == fmt_num(v));
    }
}

TEST_CASE("csv table rejects ragged rows and renders headers") {
    CsvTable t;
    t.header = {"a", "b"};
    t.add_row({"1", "2"});
    CHECK_THROWS_AS(t.add_row({"only-one"}), InvalidInput);
    const std::string s = t.to_string();
    CHECK(s == "a,b\n1,2\n");
}

TEST_CASE("svg writer emits a well-formed polyline document") {
    const std::string svg =
        svg_line_plot("t", "x", "y", {0.0, 1.0, 2.0}, {1.0, 0.5, 0.25});
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg_line_plot("t", "x", "y", {}, {}).find("polyline") == std::string::npos);
    CHECK_THROWS_AS(svg_line_plot("t", "x", "y", {1.0}, {}), InvalidInput);
}
