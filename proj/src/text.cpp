#include "spraylab/text.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "spraylab/error.hpp"

namespace spraylab {

std::string shortest_repr(double v) {
    if (std::isnan(v)) return "NaN";
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    // %g may emit exponent notation for large magnitudes; fall back to a
    // plain fixed form that still round-trips.
    if (std::strchr(buf, 'e') || std::strchr(buf, 'E')) {
        for (int prec = 0; prec <= 17; ++prec) {
            std::snprintf(buf, sizeof buf, "%.*f", prec, v);
            if (std::strtod(buf, nullptr) == v) break;
        }
    }
    return buf;
}

std::string format_time(double v) {
    std::string s = shortest_repr(v);
    if (s.find('.') == std::string::npos && s.find("NaN") == std::string::npos)
        s += ".0";
    return s;
}

std::string format_fixed(double v, int digits) {
    if (std::isnan(v)) return "NaN";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            break;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

double parse_scaled_number(const std::string& text, const std::string& context) {
    std::string t = trim(text);
    if (t.empty()) throw ParseError(context + ": empty number");
    double mult = 1.0;
    char last = t.back();
    if (last == 'k' || last == 'K') mult = 1e3;
    else if (last == 'M') mult = 1e6;
    else if (last == 'G') mult = 1e9;
    if (mult != 1.0) t.pop_back();
    return parse_double(t, context) * mult;
}

double parse_double(const std::string& text, const std::string& context) {
    std::string t = trim(text);
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size())
        throw ParseError(context + ": not a number: '" + t + "'");
    return v;
}

long long parse_int(const std::string& text, const std::string& context) {
    std::string t = trim(text);
    char* end = nullptr;
    long long v = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size())
        throw ParseError(context + ": not an integer: '" + t + "'");
    return v;
}

} // namespace spraylab
