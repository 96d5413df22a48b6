#include "vsarm/canonical_json.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace vsarm {

std::string format_double(double v) {
    if (!std::isfinite(v)) throw std::domain_error("cannot serialize a non-finite number");
    if (v == 0.0) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void CanonicalWriter::separator() {
    if (after_key_) {
        after_key_ = false;
        return;
    }
    if (!has_items_.empty()) {
        if (has_items_.back()) out_ += ',';
        has_items_.back() = true;
    }
}

CanonicalWriter& CanonicalWriter::begin_object() {
    separator();
    out_ += '{';
    has_items_.push_back(false);
    return *this;
}

CanonicalWriter& CanonicalWriter::end_object() {
    out_ += '}';
    has_items_.pop_back();
    return *this;
}

CanonicalWriter& CanonicalWriter::begin_array() {
    separator();
    out_ += '[';
    has_items_.push_back(false);
    return *this;
}

CanonicalWriter& CanonicalWriter::end_array() {
    out_ += ']';
    has_items_.pop_back();
    return *this;
}

CanonicalWriter& CanonicalWriter::key(std::string_view k) {
    separator();
    out_ += nlohmann::json(std::string(k)).dump();
    out_ += ':';
    after_key_ = true;
    return *this;
}

CanonicalWriter& CanonicalWriter::value(double v) {
    separator();
    out_ += format_double(v);
    return *this;
}

CanonicalWriter& CanonicalWriter::value(bool v) {
    separator();
    out_ += v ? "true" : "false";
    return *this;
}

CanonicalWriter& CanonicalWriter::value(std::string_view v) {
    separator();
    out_ += nlohmann::json(std::string(v)).dump();
    return *this;
}

CanonicalWriter& CanonicalWriter::null() {
    separator();
    out_ += "null";
    return *this;
}

}  // namespace vsarm
