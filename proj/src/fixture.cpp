#include "ambtalk/fixture.hpp"

#include <charconv>
#include <stdexcept>

#include <fmt/format.h>

#include "ambtalk/errors.hpp"

namespace ambtalk {

namespace detail {
extern const std::string_view kBuiltinFixture;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view s, int line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidArgument(fmt::format("fixture line {}: '{}' is not a number", line, s));
  }
  return v;
}

}  // namespace

std::vector<FixtureRecord> parse_fixture(std::string_view text) {
  std::vector<FixtureRecord> out;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> fields;
    while (true) {
      const auto bar = line.find('|');
      fields.push_back(trim(line.substr(0, bar)));
      if (bar == std::string_view::npos) break;
      line.remove_prefix(bar + 1);
    }
    if (fields.size() != 5) {
      throw InvalidArgument(fmt::format("fixture line {}: expected 5 '|'-separated fields, got {}", line_no,
                                        fields.size()));
    }
    out.push_back(FixtureRecord{std::string(fields[0]), std::string(fields[1]), to_double(fields[2], line_no),
                                std::string(fields[3]), to_double(fields[4], line_no)});
  }
  return out;
}

std::string format_fixture_record(const FixtureRecord& r) {
  return fmt::format("{} | {} | {:.17g} | {} | {:.6g}", r.id, r.inputs, r.value, r.oracle, r.resolution);
}

std::string_view builtin_fixture_text() { return detail::kBuiltinFixture; }

FixtureRecord builtin_fixture(std::string_view id) {
  for (FixtureRecord& r : parse_fixture(detail::kBuiltinFixture)) {
    if (r.id == id) return r;
  }
  throw std::out_of_range(fmt::format("no fixture record '{}'", id));
}

}  // namespace ambtalk
