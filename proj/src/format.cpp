#include "dimcalc/format.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace dimcalc {

namespace {

bool is_keyword(std::string_view word) {
  return word == "dimension" || word == "input" || word == "data" || word == "calc" || word == "output" ||
         word == "over" || word == "SUM";
}

}  // namespace

std::string format_number(double value) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), end);
}

bool is_plain_identifier(std::string_view name) {
  if (name.empty() || is_keyword(name)) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  if (!alpha(name.front())) return false;
  for (char c : name) {
    if (!alpha(c) && !(c >= '0' && c <= '9')) return false;
  }
  return true;
}

std::string format_identifier(std::string_view name) {
  if (is_plain_identifier(name)) return std::string(name);
  return "\"" + std::string(name) + "\"";
}

}  // namespace dimcalc
