#pragma once

#include <optional>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "rlve/types.hpp"

namespace rlve {

using BigInt = boost::multiprecision::cpp_int;

/// Parses an optionally signed decimal integer of at most `max_digits` digits.
std::optional<BigInt> parse_big_integer(std::string_view text, std::size_t max_digits = 4000);

/// (min(x, y) / max(x, y))^exponent for non-negative x and y, with
/// x == y -> 1 (including 0 == 0) and exactly one zero -> 0.
double ratio_reward(const BigInt& x, const BigInt& y, int exponent);

/// Verdict for a numeric answer graded by ratio_reward against `truth`.
/// Unparseable or negative answers score -1.
VerificationVerdict verify_nonnegative_count(const BigInt& truth, std::string_view output, int exponent = 10);

/// Verdict for an exact-match integer answer: +1 on match, 0 on a wrong
/// integer, -1 when no integer can be parsed.
VerificationVerdict verify_exact_integer(const BigInt& truth, std::string_view output);

/// Near-miss for an integer: one decimal digit moved by +-1.
std::string perturb_one_digit(const std::string& decimal, class Rng& rng);

std::string to_decimal(const BigInt& value);
BigInt big_from_json(const Json& j);

}  // namespace rlve
