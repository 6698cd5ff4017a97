#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rlve {

/// Pulls the final answer out of free-form model output.
///
/// Precedence: the contents of the last `<answer>...</answer>` span; otherwise
/// the text after the last `</think>`; otherwise the whole output. In the
/// untagged cases only the last `lines` non-empty lines are kept. Surrounding
/// whitespace, backticks and quotes are stripped. Returns nullopt when nothing
/// non-empty remains.
std::optional<std::string> extract_answer(std::string_view output, std::size_t lines = 1);

std::string_view trim(std::string_view text);
/// Trims whitespace plus one layer of matching quotes or backticks.
std::string_view strip_decorations(std::string_view text);

/// Splits on whitespace and commas; empty tokens are dropped.
std::vector<std::string_view> split_tokens(std::string_view text);
std::vector<std::string_view> split_lines(std::string_view text);

std::optional<std::int64_t> parse_int64(std::string_view token);
/// A list of integers separated by whitespace or commas, optionally wrapped in
/// one pair of brackets. Fails on any non-integer token or an empty list.
std::optional<std::vector<std::int64_t>> parse_int_list(std::string_view text);
/// A single finite real number in decimal or scientific notation.
std::optional<double> parse_real(std::string_view text);

}  // namespace rlve
