#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ambtalk {

// One golden value produced by an oracle. Text form, one record per line:
//   case-id | inputs | golden value | oracle name | grid resolution
// Lines starting with '#' are provenance comments.
struct FixtureRecord {
  std::string id;
  std::string inputs;
  double value;
  std::string oracle;
  double resolution;
};

std::vector<FixtureRecord> parse_fixture(std::string_view text);
std::string format_fixture_record(const FixtureRecord& record);

// Contents of tests/fixtures/golden.txt as of the build.
std::string_view builtin_fixture_text();
// Throws std::out_of_range for unknown ids.
FixtureRecord builtin_fixture(std::string_view id);

}  // namespace ambtalk
