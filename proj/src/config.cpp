#include "ambtalk/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace ambtalk {

namespace {

const std::set<std::string, std::less<>> kKnownKeys = {
    "density", "density.lo", "density.hi", "density.knots", "density.h", "density.sigma", "density.epsilon",
    "prior",   "prior.lo",   "prior.hi",   "prior.knots",   "prior.h",   "prior.sigma",   "prior.epsilon",
    "beta",    "d",          "N",          "lo",            "hi",        "betas",         "thresholds",
    "which",   "samples",    "quad.nodes", "quad.refine", "quad.max_subintervals",   "quad.abs_tol", "quad.rel_tol",
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, std::string_view separators) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = s.find_first_of(separators, start);
    const std::string_view piece = trim(s.substr(start, end == std::string_view::npos ? s.npos : end - start));
    if (!piece.empty()) out.push_back(piece);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const RunConfig& cfg) : cfg_(cfg) {}

  bool has(std::string_view key) const { return cfg_.entries.count(std::string(key)) > 0; }
  const std::string& raw(std::string_view key) const { return cfg_.entries.at(std::string(key)).value; }

  [[noreturn]] void fail(std::string_view key, std::string_view message) const {
    throw ConfigError(fmt::format("{}: {}: {}", cfg_.origin_of(key), key, message));
  }

  double number(std::string_view key, std::string_view text) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
      fail(key, fmt::format("expected a finite number, got '{}'", text));
    }
    return v;
  }
  double number(std::string_view key) const { return number(key, raw(key)); }

  int integer(std::string_view key) const {
    const std::string& text = raw(key);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) fail(key, fmt::format("expected an integer, got '{}'", text));
    return v;
  }

  double positive(std::string_view key) const {
    const double v = number(key);
    if (!(v > 0.0)) fail(key, fmt::format("must be > 0, got {}", v));
    return v;
  }

  std::vector<double> number_list(std::string_view key) const {
    std::vector<double> out;
    for (std::string_view piece : split(raw(key), ", \t")) out.push_back(number(key, piece));
    return out;
  }

 private:
  const RunConfig& cfg_;
};

Density parse_density(const Reader& r, std::string_view prefix) {
  const std::string kind_key(prefix);
  const std::string kind = r.raw(kind_key);
  auto key = [&](std::string_view field) { return fmt::format("{}.{}", prefix, field); };
  auto number_or = [&](std::string_view field, double fallback) {
    return r.has(key(field)) ? r.number(key(field)) : fallback;
  };
  auto required = [&](std::string_view field) {
    if (!r.has(key(field))) r.fail(kind_key, fmt::format("kind '{}' requires {}", kind, key(field)));
    return r.number(key(field));
  };

  try {
    const double lo = number_or("lo", 0.0);
    const double hi = number_or("hi", 1.0);
    std::optional<Interval> support;
    try {
      support.emplace(lo, hi);
    } catch (const InvalidArgument& e) {
      r.fail(r.has(key("lo")) ? key("lo") : key("hi"), e.what());
    }
    if (kind == "uniform") return make_uniform(*support);
    if (kind == "truncated-normal") {
      const double h = required("h");
      const double sigma = required("sigma");
      if (!(sigma > 0.0)) r.fail(key("sigma"), fmt::format("must be > 0, got {}", sigma));
      return make_truncated_normal(h, sigma, *support);
    }
    if (kind == "counterexample") {
      const double eps = required("epsilon");
      if (!(eps > 0.0 && eps < 0.125)) r.fail(key("epsilon"), fmt::format("must lie in (0, 1/8), got {}", eps));
      if (r.has(key("lo")) || r.has(key("hi"))) r.fail(kind_key, "counterexample is fixed to [0, 1]");
      return make_counterexample(eps);
    }
    if (kind == "piecewise-linear") {
      if (!r.has(key("knots"))) r.fail(kind_key, fmt::format("kind 'piecewise-linear' requires {}", key("knots")));
      std::vector<Knot> knots;
      for (std::string_view pair : split(r.raw(key("knots")), ", \t")) {
        const auto colon = pair.find(':');
        if (colon == std::string_view::npos) r.fail(key("knots"), fmt::format("expected theta:value, got '{}'", pair));
        knots.push_back({r.number(key("knots"), trim(pair.substr(0, colon))),
                         r.number(key("knots"), trim(pair.substr(colon + 1)))});
      }
      try {
        return make_piecewise_linear(knots, *support);
      } catch (const InvalidArgument& e) {
        r.fail(key("knots"), e.what());
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    r.fail(kind_key, e.what());
  }
  r.fail(kind_key,
         fmt::format("unknown density kind '{}' (expected uniform, piecewise-linear, truncated-normal, counterexample)",
                     kind));
}

std::vector<double> parse_betas(const Reader& r) {
  const std::string_view text = trim(r.raw("betas"));
  std::vector<double> out;
  if (text.starts_with("logspace(") && text.ends_with(")")) {
    const auto args = split(text.substr(9, text.size() - 10), ",");
    if (args.size() != 3) r.fail("betas", "logspace takes (from, to, count)");
    const double from = r.number("betas", args[0]);
    const double to = r.number("betas", args[1]);
    int count = 0;
    const auto [ptr, ec] = std::from_chars(args[2].data(), args[2].data() + args[2].size(), count);
    if (ec != std::errc() || ptr != args[2].data() + args[2].size() || count < 1) {
      r.fail("betas", "logspace count must be a positive integer");
    }
    if (!(from > 0.0 && to > 0.0)) r.fail("betas", "logspace bounds must be > 0");
    for (int k = 0; k < count; ++k) {
      const double t = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
      out.push_back(std::pow(10.0, std::log10(from) + t * (std::log10(to) - std::log10(from))));
    }
  } else {
    out = r.number_list("betas");
  }
  if (out.empty()) r.fail("betas", "beta grid is empty");
  for (double b : out) {
    if (!(b > 0.0)) r.fail("betas", fmt::format("every beta must be > 0, got {}", b));
  }
  return out;
}

}  // namespace

std::string RunConfig::origin_of(std::string_view key) const {
  auto it = entries.find(std::string(key));
  return it == entries.end() ? "<default>" : it->second.origin;
}

RunConfig parse_config(std::string_view text, std::string_view source, const std::vector<std::string>& overrides) {
  RunConfig cfg;
  auto add = [&](std::string_view line, const std::string& origin) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(fmt::format("{}: expected key = value, got '{}'", origin, line));
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(fmt::format("{}: empty key", origin));
    if (!kKnownKeys.count(key)) throw ConfigError(fmt::format("{}: {}: unknown key", origin, key));
    if (value.empty()) throw ConfigError(fmt::format("{}: {}: empty value", origin, key));
    cfg.entries[key] = RunConfig::Entry{value, origin};
  };

  int line_no = 0;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    add(line, fmt::format("{}:{}", source, line_no));
  }
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    const std::string key(trim(std::string_view(o).substr(0, eq)));
    add(o, fmt::format("--set {}", key));
  }

  const Reader r(cfg);
  if (r.has("quad.nodes")) {
    cfg.quad.nodes_per_segment = r.integer("quad.nodes");
    if (cfg.quad.nodes_per_segment < 2) r.fail("quad.nodes", "must be >= 2");
  }
  if (r.has("quad.refine")) {
    cfg.quad.refinement_limit = r.integer("quad.refine");
    if (cfg.quad.refinement_limit < 1) r.fail("quad.refine", "must be >= 1");
  }
  if (r.has("quad.max_subintervals")) {
    cfg.quad.max_subintervals = r.integer("quad.max_subintervals");
    if (cfg.quad.max_subintervals < 1) r.fail("quad.max_subintervals", "must be >= 1");
  }
  if (r.has("quad.abs_tol")) cfg.quad.abs_tol = r.positive("quad.abs_tol");
  if (r.has("quad.rel_tol")) cfg.quad.rel_tol = r.positive("quad.rel_tol");

  if (r.has("density")) cfg.density = parse_density(r, "density");
  for (std::string_view field : {"lo", "hi", "knots", "h", "sigma", "epsilon"}) {
    if (!r.has("density") && r.has(fmt::format("density.{}", field))) {
      r.fail(fmt::format("density.{}", field), "set without a density kind");
    }
    if (!r.has("prior") && r.has(fmt::format("prior.{}", field))) {
      r.fail(fmt::format("prior.{}", field), "set without a prior kind");
    }
  }
  if (r.has("prior")) cfg.prior = parse_density(r, "prior");

  if (r.has("beta")) {
    const std::string& b = r.raw("beta");
    if (b == "zero") {
      cfg.beta = AmbiguityLevel::full_ambiguity();
    } else if (b == "infinity" || b == "inf") {
      cfg.beta = AmbiguityLevel::bayesian();
    } else {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(b.data(), b.data() + b.size(), v);
      if (ec != std::errc() || ptr != b.data() + b.size()) {
        r.fail("beta", fmt::format("expected 'zero', 'infinity' or a number > 0, got '{}'", b));
      }
      if (v == 0.0) {
        cfg.beta = AmbiguityLevel::full_ambiguity();
      } else if (std::isinf(v) && v > 0.0) {
        cfg.beta = AmbiguityLevel::bayesian();
      } else if (v > 0.0) {
        cfg.beta = AmbiguityLevel::finite(v);
      } else {
        r.fail("beta", fmt::format("must be >= 0, got {}", v));
      }
    }
  }
  if (r.has("d")) cfg.d = r.positive("d");
  if (r.has("N")) {
    if (r.raw("N") == "max") {
      cfg.intervals_max = true;
    } else {
      cfg.intervals = r.integer("N");
      if (*cfg.intervals < 1) r.fail("N", "must be >= 1 or 'max'");
    }
  }
  for (const char* k : {"lo", "hi"}) {
    if (!r.has(k)) continue;
    const double v = r.number(k);
    if (v < 0.0 || v > 1.0) r.fail(k, fmt::format("must lie in [0, 1], got {}", v));
    (std::string_view(k) == "lo" ? cfg.lo : cfg.hi) = v;
  }
  if (cfg.lo && cfg.hi && !(*cfg.lo < *cfg.hi)) r.fail("hi", "interval must satisfy lo < hi");
  if (r.has("betas")) cfg.betas = parse_betas(r);
  if (r.has("thresholds")) {
    cfg.thresholds = r.number_list("thresholds");
    const auto& t = cfg.thresholds;
    if (t.size() < 2 || t.front() != 0.0 || t.back() != 1.0) r.fail("thresholds", "must start at 0 and end at 1");
    if (!std::is_sorted(t.begin(), t.end(), std::less_equal<>())) r.fail("thresholds", "must be strictly increasing");
  }
  if (r.has("which")) {
    const std::string& w = r.raw("which");
    static const std::set<std::string, std::less<>> kScenarios = {"example1", "counterexample", "welfare-mirror",
                                                                  "exante", "all"};
    if (!kScenarios.count(w)) {
      r.fail("which", fmt::format("unknown scenario '{}' (example1, counterexample, welfare-mirror, exante, all)", w));
    }
    cfg.which = w;
  }
  if (r.has("samples")) {
    cfg.samples = r.integer("samples");
    if (cfg.samples < 2) r.fail("samples", "must be >= 2");
  }
  return cfg;
}

}  // namespace ambtalk
