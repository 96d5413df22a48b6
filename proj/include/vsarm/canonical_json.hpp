#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace vsarm {

/// Doubles as %.17g; negative zero prints as 0. Throws on NaN/inf.
std::string format_double(double v);

// Streaming JSON writer with caller-controlled key order and fixed number
// formatting, so equal values always produce equal bytes.
class CanonicalWriter {
public:
    CanonicalWriter& begin_object();
    CanonicalWriter& end_object();
    CanonicalWriter& begin_array();
    CanonicalWriter& end_array();
    CanonicalWriter& key(std::string_view k);

    CanonicalWriter& value(double v);
    CanonicalWriter& value(bool v);
    CanonicalWriter& value(std::string_view v);
    CanonicalWriter& value(const char* v) { return value(std::string_view(v)); }
    template <class T>
        requires(std::is_integral_v<T> && !std::is_same_v<T, bool>)
    CanonicalWriter& value(T v) {
        separator();
        out_ += std::to_string(v);
        return *this;
    }
    CanonicalWriter& null();

    const std::string& str() const { return out_; }

private:
    void separator();

    std::string out_;
    std::vector<bool> has_items_;
    bool after_key_ = false;
};

}  // namespace vsarm
