#include "rlve/answer.hpp"

#include <charconv>
#include <cmath>

namespace rlve {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_fence(std::string_view line) {
  line = trim(line);
  return line.size() >= 3 && line.substr(0, 3) == "```";
}

}  // namespace

std::string_view trim(std::string_view text) {
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

std::string_view strip_decorations(std::string_view text) {
  text = trim(text);
  while (text.size() >= 2) {
    const char f = text.front();
    const char b = text.back();
    if ((f == '`' || f == '"' || f == '\'') && f == b) {
      text = trim(text.substr(1, text.size() - 2));
    } else {
      break;
    }
  }
  return text;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::optional<std::string> extract_answer(std::string_view output, std::size_t lines) {
  constexpr std::string_view kOpen = "<answer>";
  constexpr std::string_view kClose = "</answer>";
  constexpr std::string_view kThinkEnd = "</think>";

  const std::size_t close = output.rfind(kClose);
  if (close != std::string_view::npos) {
    const std::size_t open = output.substr(0, close).rfind(kOpen);
    if (open != std::string_view::npos) {
      std::string_view body = output.substr(open + kOpen.size(), close - open - kOpen.size());
      std::string joined;
      for (std::string_view line : split_lines(body)) {
        if (is_fence(line)) continue;
        line = strip_decorations(line);
        if (line.empty()) continue;
        if (!joined.empty()) joined.push_back('\n');
        joined.append(line);
      }
      if (joined.empty()) return std::nullopt;
      return joined;
    }
  }

  std::string_view scope = output;
  const std::size_t think = output.rfind(kThinkEnd);
  if (think != std::string_view::npos) scope = output.substr(think + kThinkEnd.size());

  std::vector<std::string_view> kept;
  for (std::string_view line : split_lines(scope)) {
    if (is_fence(line)) continue;
    line = strip_decorations(line);
    if (!line.empty()) kept.push_back(line);
  }
  if (kept.empty() || lines == 0) return std::nullopt;
  const std::size_t first = kept.size() > lines ? kept.size() - lines : 0;
  std::string joined;
  for (std::size_t i = first; i < kept.size(); ++i) {
    if (!joined.empty()) joined.push_back('\n');
    joined.append(kept[i]);
  }
  return joined;
}

std::vector<std::string_view> split_tokens(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (is_space(text[i]) || text[i] == ',')) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j]) && text[j] != ',') ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<std::int64_t> parse_int64(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return std::nullopt;
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

std::optional<std::vector<std::int64_t>> parse_int_list(std::string_view text) {
  text = trim(text);
  if (text.size() >= 2 && ((text.front() == '[' && text.back() == ']') || (text.front() == '(' && text.back() == ')'))) {
    text = text.substr(1, text.size() - 2);
  }
  std::vector<std::int64_t> values;
  for (std::string_view token : split_tokens(text)) {
    auto v = parse_int64(token);
    if (!v) return std::nullopt;
    values.push_back(*v);
  }
  if (values.empty()) return std::nullopt;
  return values;
}

std::optional<double> parse_real(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace rlve
