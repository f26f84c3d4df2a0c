#pragma once

#include <array>
#include <charconv>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ambtalk/density.hpp"

namespace ambtalk::testing {

inline const Interval kUnit(0.0, 1.0);

inline Density rising() { return make_piecewise_linear(std::array<Knot, 2>{{{0.0, 0.0}, {1.0, 2.0}}}, kUnit); }
inline Density falling() { return make_piecewise_linear(std::array<Knot, 2>{{{0.0, 2.0}, {1.0, 0.0}}}, kUnit); }

// Strictly positive piecewise-linear density on [0, 1] with 2 to 6 knots.
inline Density random_piecewise_linear(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(2, 6);
  std::uniform_real_distribution<double> value(0.2, 3.0);
  const int n = count(rng);
  std::vector<Knot> knots;
  for (int k = 0; k < n; ++k) knots.push_back({static_cast<double>(k) / (n - 1), value(rng)});
  return make_piecewise_linear(knots, kUnit);
}

inline Interval random_interval(std::mt19937_64& rng, double min_width = 0.05) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (true) {
    double a = u(rng);
    double b = u(rng);
    if (a > b) std::swap(a, b);
    if (b - a >= min_width) return Interval(a, b);
  }
}

inline std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto sep = text.find(';');
    const std::string_view piece = text.substr(0, sep);
    double v = 0.0;
    std::from_chars(piece.data(), piece.data() + piece.size(), v);
    out.push_back(v);
    if (sep == std::string_view::npos) break;
    text.remove_prefix(sep + 1);
  }
  return out;
}

// "g=0.5;0.5 theta=0;1 a=0.5 beta=1"
struct DiscreteInputs {
  std::vector<double> g;
  std::vector<double> theta;
  double a = 0.0;
  double beta = 0.0;
};

inline DiscreteInputs parse_discrete_inputs(std::string_view text) {
  DiscreteInputs out;
  while (!text.empty()) {
    const auto space = text.find(' ');
    const std::string_view field = text.substr(0, space);
    const auto eq = field.find('=');
    const std::string_view key = field.substr(0, eq);
    const std::string_view value = field.substr(eq + 1);
    if (key == "g") out.g = parse_list(value);
    if (key == "theta") out.theta = parse_list(value);
    if (key == "a") out.a = parse_list(value).at(0);
    if (key == "beta") out.beta = parse_list(value).at(0);
    if (space == std::string_view::npos) break;
    text.remove_prefix(space + 1);
  }
  return out;
}

}  // namespace ambtalk::testing
