#include <doctest.h>

#include <clocale>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "salz/errors.hpp"
#include "salz/io.hpp"

using namespace salz;

TEST_CASE("format_double: 17 significant digits and exact round trip") {
    CHECK(format_double(1.0) == "1.0000000000000000e+00");
    CHECK(format_double(-0.1) == "-1.0000000000000001e-01");
    CHECK(format_double(0.0) == "0.0000000000000000e+00");
    CHECK(format_double(NAN) == "nan");
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-300.0, 300.0);
    for (int i = 0; i < 1000; ++i) {
        const double v = std::pow(10.0, u(rng)) * (i % 2 ? -1.0 : 1.0);
        CHECK(parse_double(format_double(v)) == v);
        CHECK(parse_double(format_shortest(v)) == v);
    }
}

TEST_CASE("formatting ignores the C locale") {
    const char* chosen = nullptr;
    for (const char* loc : {"de_DE.UTF-8", "de_DE.utf8", "fr_FR.UTF-8", "C.UTF-8"})
        if (std::setlocale(LC_ALL, loc)) {
            chosen = loc;
            break;
        }
    CHECK(format_double(1.5) == "1.5000000000000000e+00");
    CHECK(parse_double("2.25") == 2.25);
    CHECK_FALSE(parse_double("2,25").has_value());
    std::setlocale(LC_ALL, "C");
    MESSAGE("locale used: " << (chosen ? chosen : "none available"));
}

TEST_CASE("parse_double is strict") {
    CHECK(parse_double(" 3.5 ") == 3.5);
    CHECK(parse_double("+1e3") == 1000.0);
    CHECK(parse_double("-2") == -2.0);
    CHECK(parse_double("1.5\r") == 1.5);
    CHECK_FALSE(parse_double("").has_value());
    CHECK_FALSE(parse_double("1.5x").has_value());
    CHECK_FALSE(parse_double("abc").has_value());
    CHECK_FALSE(parse_double("1 2").has_value());
}

TEST_CASE("CSV line splitting") {
    CHECK(split_csv_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(split_csv_line("a,,c\r") == std::vector<std::string>{"a", "", "c"});
    CHECK(split_csv_line("") == std::vector<std::string>{""});
    CHECK(split_csv_line("x,") == std::vector<std::string>{"x", ""});
}

TEST_CASE("file helpers") {
    const auto dir = std::filesystem::temp_directory_path() / "salz_io_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "f.txt").string();
    write_text_file(path, "hello\nworld\n");
    CHECK(read_text_file(path) == "hello\nworld\n");
    CHECK_THROWS_AS(read_text_file((dir / "missing.txt").string()), IoError);
    CHECK_THROWS_AS(write_text_file((dir / "no" / "such" / "dir.txt").string(), "x"), IoError);
    std::filesystem::remove_all(dir);
}
