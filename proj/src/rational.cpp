#include "cfl/rational.hpp"

#include <stdexcept>
#include <string_view>

namespace cfl {

Rational parse_rational(const std::string& text) {
    auto parse_int = [&](std::string_view s) {
        if (s.empty()) throw std::invalid_argument("malformed number: '" + text + "'");
        for (char c : s) {
            if (c < '0' || c > '9') throw std::invalid_argument("malformed number: '" + text + "'");
        }
        return BigInt(std::string(s));
    };
    const std::string_view view(text);
    if (auto slash = view.find('/'); slash != std::string_view::npos) {
        BigInt den = parse_int(view.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
        return Rational(parse_int(view.substr(0, slash)), den);
    }
    if (auto dot = view.find('.'); dot != std::string_view::npos) {
        const auto frac = view.substr(dot + 1);
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        const BigInt whole = dot == 0 ? BigInt(0) : parse_int(view.substr(0, dot));
        return Rational(whole * scale + (frac.empty() ? BigInt(0) : parse_int(frac)), scale);
    }
    return Rational(parse_int(view));
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace cfl
