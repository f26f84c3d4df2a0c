#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ambtalk/partition.hpp"

namespace ambtalk {

struct Claim {
  std::string name;
  bool pass;
  std::string detail;
};

struct ScenarioReport {
  std::string scenario;
  std::vector<Claim> claims;
  bool pass() const;
};

// example1, counterexample, welfare-mirror, exante
std::span<const std::string_view> reproduce_scenarios();

// Runs a built-in scenario. Throws InvalidArgument for unknown names.
ScenarioReport reproduce(std::string_view which, const PartitionOptions& options = {});

}  // namespace ambtalk
