#include "yule/numeric.hpp"

#include <charconv>

namespace yule {

std::string format_rational(const Rat& q) {
    return q.get_str();
}

std::string format_double(double d) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), d);
    return std::string(buf, res.ptr);
}

} // namespace yule
