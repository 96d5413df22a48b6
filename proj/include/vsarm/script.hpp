#pragma once

#include "vsarm/simulator.hpp"

#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vsarm {

class ScriptError : public std::runtime_error {
public:
    ScriptError(std::size_t line, const std::string& what)
        : std::runtime_error("script line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// One command per line:
//   knob <1-4> <+1|-1>
//   button <1-4>
//   pressure <segment> <psi>
//   load <tip|connector> <newtons>
//   # comment
std::vector<ScriptLine> parse_script(std::istream& in);
std::vector<ScriptLine> parse_script(std::string_view text);

}  // namespace vsarm
