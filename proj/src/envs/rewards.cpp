#include "rlve/envs/rewards.hpp"

#include <cmath>

#include "rlve/answer.hpp"
#include "rlve/rng.hpp"

namespace rlve {

std::optional<BigInt> parse_big_integer(std::string_view text, std::size_t max_digits) {
  text = strip_decorations(text);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty() || text.size() > max_digits) return std::nullopt;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  // cpp_int treats a leading zero as an octal prefix.
  while (text.size() > 1 && text.front() == '0') text.remove_prefix(1);
  BigInt value{std::string(text)};
  return negative ? BigInt(-value) : value;
}

double ratio_reward(const BigInt& x, const BigInt& y, int exponent) {
  if (x == y) return 1.0;
  if (x == 0 || y == 0) return 0.0;
  const BigInt& lo = x < y ? x : y;
  const BigInt& hi = x < y ? y : x;
  // Scale both down so the quotient is computed in floating point without
  // overflow; the shift keeps ~60 significant bits of the larger value.
  const std::size_t bits = boost::multiprecision::msb(hi) + 1;
  const std::size_t shift = bits > 60 ? bits - 60 : 0;
  const BigInt lo_s = lo >> shift;
  const BigInt hi_s = hi >> shift;
  if (lo_s == 0) return 0.0;
  const double ratio = lo_s.convert_to<double>() / hi_s.convert_to<double>();
  return std::pow(ratio, exponent);
}

VerificationVerdict verify_nonnegative_count(const BigInt& truth, std::string_view output, int exponent) {
  auto answer = extract_answer(output);
  if (!answer) return VerificationVerdict::parse_failure("no answer found");
  auto value = parse_big_integer(*answer);
  if (!value) return VerificationVerdict::parse_failure("answer is not an integer");
  if (*value < 0) return VerificationVerdict::parse_failure("answer is negative");
  return VerificationVerdict::graded(ratio_reward(truth, *value, exponent));
}

VerificationVerdict verify_exact_integer(const BigInt& truth, std::string_view output) {
  auto answer = extract_answer(output);
  if (!answer) return VerificationVerdict::parse_failure("no answer found");
  auto value = parse_big_integer(*answer);
  if (!value) return VerificationVerdict::parse_failure("answer is not an integer");
  if (*value == truth) return VerificationVerdict::exact();
  return VerificationVerdict::graded(0.0, "wrong value");
}

std::string perturb_one_digit(const std::string& decimal, Rng& rng) {
  std::string s = decimal;
  std::size_t start = (!s.empty() && s.front() == '-') ? 1 : 0;
  if (s.size() <= start) return "1";
  auto pos = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(start), static_cast<std::int64_t>(s.size()) - 1));
  char& c = s[pos];
  if (c == '9') {
    c = '8';
  } else if (c == '0') {
    c = '1';
  } else {
    c = static_cast<char>(c + (rng.bernoulli(0.5) ? 1 : -1));
  }
  // Drop a leading zero the edit may have introduced.
  while (s.size() > start + 1 && s[start] == '0') s.erase(start, 1);
  return s;
}

std::string to_decimal(const BigInt& value) { return value.str(); }

BigInt big_from_json(const Json& j) {
  if (j.is_string()) return BigInt(j.get<std::string>());
  if (j.is_number_unsigned()) return BigInt(j.get<std::uint64_t>());
  return BigInt(j.get<std::int64_t>());
}

}  // namespace rlve
