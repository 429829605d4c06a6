#include "mmdyn/rational.hpp"

namespace mmdyn {

namespace {

bool parse_digits(std::string_view text, Rational::Int& out) {
    if (text.empty()) return false;
    out = 0;
    for (char c : text) {
        if (c < '0' || c > '9') return false;
        out = out * 10 + (c - '0');
    }
    return true;
}

}  // namespace

std::optional<Rational> Rational::parse(std::string_view text) {
    bool negative = false;
    if (!text.empty() && text.front() == '-') {
        negative = true;
        text.remove_prefix(1);
    }
    Int num;
    Int den = 1;
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        if (!parse_digits(text, num)) return std::nullopt;
    } else {
        if (!parse_digits(text.substr(0, slash), num)) return std::nullopt;
        if (!parse_digits(text.substr(slash + 1), den)) return std::nullopt;
        if (den == 0) return std::nullopt;
    }
    if (negative) num = -num;
    return Rational(num, den);
}

std::string Rational::str() const {
    std::string out = numerator().str();
    if (!is_integer()) {
        out += '/';
        out += denominator().str();
    }
    return out;
}

Rational pow(const Rational& base, unsigned exponent) {
    Rational result(1);
    Rational factor = base;
    while (exponent != 0) {
        if (exponent & 1u) result *= factor;
        factor *= factor;
        exponent >>= 1u;
    }
    return result;
}

}  // namespace mmdyn
