#include "fpr/ext_real.hpp"

#include <cctype>
#include <stdexcept>

namespace fpr {

namespace {

ExtReal pow10(int e) {
    ExtReal r(1.0);
    ExtReal base(10.0);
    const bool neg = e < 0;
    unsigned u = neg ? static_cast<unsigned>(-e) : static_cast<unsigned>(e);
    while (u) {
        if (u & 1u) r *= base;
        base *= base;
        u >>= 1u;
    }
    return neg ? ExtReal(1.0) / r : r;
}

}  // namespace

ExtReal ExtReal::parse(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';

    // Digits are gathered in chunks of 15 so each chunk is an exact double.
    ExtReal value;
    int exp10 = 0;
    bool seen_point = false;
    bool any_digit = false;
    std::int64_t chunk = 0;
    int chunk_len = 0;
    auto flush = [&] {
        if (chunk_len == 0) return;
        value = value * pow10(chunk_len) + ExtReal::from_int(chunk);
        chunk = 0;
        chunk_len = 0;
    };
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '.') {
            if (seen_point) throw std::invalid_argument("malformed decimal: " + std::string(text));
            seen_point = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            any_digit = true;
            chunk = chunk * 10 + (c - '0');
            ++chunk_len;
            if (seen_point) --exp10;
            if (chunk_len == 15) flush();
        } else {
            break;
        }
    }
    flush();
    if (!any_digit) throw std::invalid_argument("malformed decimal: " + std::string(text));
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        std::size_t used = 0;
        exp10 += std::stoi(std::string(text.substr(i)), &used);
        i += used;
    }
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i != text.size()) throw std::invalid_argument("malformed decimal: " + std::string(text));
    if (exp10 != 0) value *= pow10(exp10);
    return neg ? -value : value;
}

std::string ExtReal::to_string(int digits) const {
    if (digits < 1) digits = 1;
    if (digits > 34) digits = 34;
    if (hi == 0.0) return "0";
    if (!std::isfinite(hi)) return hi > 0 ? "inf" : (hi < 0 ? "-inf" : "nan");

    ExtReal v = abs(*this);
    int e = static_cast<int>(std::floor(std::log10(v.hi)));
    v /= pow10(e);
    if (v >= ExtReal(10.0)) {
        v /= ExtReal(10.0);
        ++e;
    } else if (v < ExtReal(1.0)) {
        v *= ExtReal(10.0);
        --e;
    }

    std::string mant;
    for (int k = 0; k < digits + 1; ++k) {
        int dgt = static_cast<int>(std::floor(v.hi));
        if (dgt > 9) dgt = 9;
        if (dgt < 0) dgt = 0;
        mant.push_back(static_cast<char>('0' + dgt));
        v = (v - ExtReal(static_cast<double>(dgt))) * ExtReal(10.0);
    }
    // round on the guard digit
    const bool up = mant.back() >= '5';
    mant.pop_back();
    if (up) {
        int k = static_cast<int>(mant.size()) - 1;
        while (k >= 0 && mant[k] == '9') mant[k--] = '0';
        if (k >= 0) {
            ++mant[k];
        } else {
            mant.insert(mant.begin(), '1');
            mant.pop_back();
            ++e;
        }
    }
    while (mant.size() > 1 && mant.back() == '0') mant.pop_back();

    std::string out = (hi < 0) ? "-" : "";
    out += mant[0];
    if (mant.size() > 1) {
        out += '.';
        out.append(mant, 1, std::string::npos);
    }
    if (e != 0) out += "e" + std::to_string(e);
    return out;
}

ExtReal sqrt(const ExtReal& a) {
    if (a.hi <= 0.0) return {};
    // one Newton step on the double estimate doubles the precision
    const double x = 1.0 / std::sqrt(a.hi);
    const double ax = a.hi * x;
    const ExtReal diff = a - dd_detail::two_prod(ax, ax);
    return dd_detail::two_sum(ax, diff.hi * (x * 0.5));
}

namespace constants {

const ExtReal& sqrt2() {
    static const ExtReal v = ExtReal::parse("1.41421356237309504880168872420969807856967187537694");
    return v;
}
const ExtReal& sqrt3() {
    static const ExtReal v = ExtReal::parse("1.73205080756887729352744634150587236694280525381038");
    return v;
}
const ExtReal& sqrt5() {
    static const ExtReal v = ExtReal::parse("2.23606797749978969640917366873127623544061835961152");
    return v;
}
const ExtReal& pi() {
    static const ExtReal v = ExtReal::parse("3.14159265358979323846264338327950288419716939937510");
    return v;
}
const ExtReal& two_pi() {
    static const ExtReal v = ExtReal::parse("6.28318530717958647692528676655900576839433879875021");
    return v;
}
const ExtReal& golden() {
    static const ExtReal v = ExtReal::parse("1.61803398874989484820458683436563811772030917980576");
    return v;
}

}  // namespace constants

}  // namespace fpr
