#include "vsarm/script.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace vsarm {
namespace {

std::vector<std::string_view> split_words(std::string_view s) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
        if (i > start) words.push_back(s.substr(start, i - start));
    }
    return words;
}

template <class T>
bool parse_exact(std::string_view s, T& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return !s.empty() && ec == std::errc{} && ptr == s.data() + s.size();
}

int parse_int(std::string_view s, std::size_t line, const char* what) {
    int v = 0;
    if (!parse_exact(s, v)) throw ScriptError(line, std::string("bad ") + what + " '" + std::string(s) + "'");
    return v;
}

double parse_real(std::string_view s, std::size_t line, const char* what) {
    double v = 0.0;
    if (!parse_exact(s, v) || !std::isfinite(v)) {
        throw ScriptError(line, std::string("bad ") + what + " '" + std::string(s) + "'");
    }
    return v;
}

void expect_args(const std::vector<std::string_view>& w, std::size_t n, std::size_t line) {
    if (w.size() != n + 1) {
        throw ScriptError(line, "'" + std::string(w[0]) + "' takes " + std::to_string(n) + " argument(s)");
    }
}

int parse_knob_id(std::string_view s, std::size_t line) {
    const int id = parse_int(s, line, "knob id");
    if (id < 1 || id > 4) throw ScriptError(line, "knob id must be 1..4");
    return id;
}

Event parse_line(const std::vector<std::string_view>& w, std::size_t line) {
    const auto cmd = w[0];
    if (cmd == "knob") {
        expect_args(w, 2, line);
        const int id = parse_knob_id(w[1], line);
        const int dir = parse_int(w[2], line, "direction");
        if (dir != 1 && dir != -1) throw ScriptError(line, "direction must be +1 or -1");
        return KnobTurn{id, dir};
    }
    if (cmd == "button") {
        expect_args(w, 1, line);
        return ButtonPress{parse_knob_id(w[1], line)};
    }
    if (cmd == "pressure") {
        expect_args(w, 2, line);
        return PressureSet{parse_int(w[1], line, "segment"), parse_real(w[2], line, "pressure")};
    }
    if (cmd == "load") {
        expect_args(w, 2, line);
        const auto point = load_point_from_string(w[1]);
        if (!point) throw ScriptError(line, "load point must be 'tip' or 'connector'");
        return LoadSet{*point, parse_real(w[2], line, "load")};
    }
    throw ScriptError(line, "unknown command '" + std::string(cmd) + "'");
}

}  // namespace

std::vector<ScriptLine> parse_script(std::istream& in) {
    std::vector<ScriptLine> out;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto words = split_words(raw);
        if (words.empty() || words[0].front() == '#') continue;
        out.push_back({line, parse_line(words, line)});
    }
    return out;
}

std::vector<ScriptLine> parse_script(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_script(in);
}

}  // namespace vsarm
