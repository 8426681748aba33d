#pragma once

#include "caseq/factorlab.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace caseq {

enum class Condition { A, B };

// Symbol timing relative to T_d = 1: CP of length alpha, useful part of length
// 1, subcarriers spaced gamma apart.
struct WaveformConfig {
    std::uint64_t n_seq = 0;
    std::uint32_t gamma = 1;
    Rational alpha{33, 256};

    Condition condition() const;
    Rational alpha_gamma() const { return alpha * Rational(gamma); }
    double symbol_duration() const;  // T = 1 + alpha
    void validate() const;           // throws DomainError
};

// Parses "p/q" (or a plain integer) into an exact rational.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& r);
std::string_view to_string(Condition c);

}  // namespace caseq
