#include "caseq/waveform.hpp"

#include "caseq/error.hpp"

#include <boost/rational.hpp>

#include <charconv>

namespace caseq {

Condition WaveformConfig::condition() const {
    return alpha_gamma().denominator() == 1 ? Condition::A : Condition::B;
}

double WaveformConfig::symbol_duration() const { return 1.0 + boost::rational_cast<double>(alpha); }

void WaveformConfig::validate() const {
    if (n_seq < 2) throw DomainError("sequence length must be >= 2");
    if (gamma < 1) throw DomainError("interleaving factor gamma must be >= 1");
    if (alpha <= Rational(0) || alpha >= Rational(1))
        throw DomainError("guard ratio alpha must lie in (0,1), got " + format_rational(alpha));
}

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw DomainError("cannot parse rational '" + std::string(whole) + "'");
    return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text, text));
    std::int64_t num = parse_int(text.substr(0, slash), text);
    std::int64_t den = parse_int(text.substr(slash + 1), text);
    if (den == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
}

std::string format_rational(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string_view to_string(Condition c) { return c == Condition::A ? "A" : "B"; }

}  // namespace caseq
