#pragma once

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "etx/errors.hpp"

namespace etx {

// Line-oriented reader shared by the text formats: '#' comments, blank
// lines skipped, first word is the keyword.
struct Line {
    int no;
    std::string keyword;
    std::string rest;  // trimmed remainder after the keyword
};

std::string trim(const std::string& s);
std::vector<std::string> split_ws(const std::string& s);
// Split on a literal separator, trimming pieces.
std::vector<std::string> split_on(const std::string& s, const std::string& sep);
std::vector<Line> read_lines(std::istream& in, const std::string& src);

[[noreturn]] void parse_fail(const std::string& src, int line_no, const std::string& msg);

int parse_int(const std::string& s, const std::string& src, int line_no);

}  // namespace etx
