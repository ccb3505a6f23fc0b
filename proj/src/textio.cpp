#include "etx/textio.hpp"

namespace etx {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

std::vector<std::string> split_on(const std::string& s, const std::string& sep) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (true) {
        size_t next = s.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(trim(s.substr(pos)));
            break;
        }
        out.push_back(trim(s.substr(pos, next - pos)));
        pos = next + sep.size();
    }
    return out;
}

std::vector<Line> read_lines(std::istream& in, const std::string& src) {
    std::vector<Line> out;
    std::string raw;
    int no = 0;
    while (std::getline(in, raw)) {
        ++no;
        size_t hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        raw = trim(raw);
        if (raw.empty()) continue;
        size_t sp = raw.find_first_of(" \t");
        Line ln;
        ln.no = no;
        if (sp == std::string::npos) {
            ln.keyword = raw;
            ln.rest = "";
        } else {
            ln.keyword = raw.substr(0, sp);
            ln.rest = trim(raw.substr(sp + 1));
        }
        out.push_back(std::move(ln));
    }
    (void)src;
    return out;
}

void parse_fail(const std::string& src, int line_no, const std::string& msg) {
    fail(ErrKind::Parse, src + ":" + std::to_string(line_no) + ": " + msg);
}

int parse_int(const std::string& s, const std::string& src, int line_no) {
    try {
        size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        parse_fail(src, line_no, "expected integer, got '" + s + "'");
    }
}

}  // namespace etx
