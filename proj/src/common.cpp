#include "fkpp/common.hpp"

#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>

namespace fkpp {

void check_alpha(double alpha, bool allow_one) {
    if (!(alpha > 0.0) || alpha > 1.0 || (!allow_one && alpha == 1.0) || !std::isfinite(alpha))
        throw DomainError("alpha must lie in (0,1" + std::string(allow_one ? "]" : ")") +
                          "), got " + std::to_string(alpha));
}

std::string fmt_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fnv1a_hex(const std::string& bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

}  // namespace fkpp
