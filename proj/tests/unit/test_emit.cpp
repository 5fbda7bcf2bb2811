#include <cmath>
#include <limits>

#include "doctest.h"
#include "gosx/emit.hpp"
#include "gosx/errors.hpp"

using namespace gosx;

namespace {

Table sample_table() {
    Table t;
    t.columns = {"x", "df"};
    t.rows = {{-1.0, 0.1}, {0.5, 2.0 / 3.0}, {std::numeric_limits<double>::infinity(), 1.0}};
    t.config = {{"model", "normal"}, {"n", 500}};
    t.command = "gosx limit --model normal";
    return t;
}

}  // namespace

TEST_CASE("numbers print with fifteen significant digits") {
    CHECK(format_number(2.0 / 3.0) == "0.666666666666667");
    CHECK(format_number(1e-20) == "1e-20");
    CHECK(format_number(3.0) == "3");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(round15(2.0 / 3.0) == 0.666666666666667);
    CHECK(json_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(json_number(0.1 + 0.2).get<double>() == 0.3);
}

TEST_CASE("csv round trip keeps the command and the rounded values") {
    const Table t = sample_table();
    const std::string csv = emit(t, Format::csv);
    CHECK(csv.rfind("# gosx limit --model normal\nx,df\n", 0) == 0);
    const Table back = parse_csv(csv);
    CHECK(back.command == t.command);
    CHECK(back.columns == t.columns);
    REQUIRE(back.rows.size() == t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        for (std::size_t j = 0; j < t.columns.size(); ++j) CHECK(back.rows[i][j] == round15(t.rows[i][j]));
    }
    CHECK(emit(back, Format::csv) == csv);
}

TEST_CASE("json carries the config, command and columns") {
    const auto doc = nlohmann::json::parse(emit(sample_table(), Format::json));
    CHECK(doc["command"] == "gosx limit --model normal");
    CHECK(doc["config"]["n"] == 500);
    CHECK(doc["columns"].size() == 2);
    CHECK(doc["data"]["df"][1].get<double>() == 0.666666666666667);
    CHECK(doc["data"]["x"][2] == "inf");
}

TEST_CASE("malformed tables and formats are rejected") {
    Table t = sample_table();
    t.rows.push_back({1.0});
    CHECK_THROWS_AS(emit(t, Format::csv), DomainError);
    t.rows.clear();
    CHECK_THROWS_AS(emit(t, Format::json), DomainError);
    CHECK(parse_format("JSON") == Format::json);
    CHECK_THROWS_AS(parse_format("xml"), DomainError);
    CHECK_THROWS(parse_csv("# only a comment\n"));
}
