#include "mcvd/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mcvd/analytics.hpp"
#include "mcvd/errors.hpp"

namespace mcvd {

using json = nlohmann::json;

ReceiverRegion RegionSpec::materialize(double rv) const {
  if (!relative) return region;
  return std::visit(
      [rv](const auto& r) -> ReceiverRegion {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, FullDisk>) {
          return r;
        } else if constexpr (std::is_same_v<T, ConcentricDisk>) {
          return ConcentricDisk{r.radius * rv};
        } else if constexpr (std::is_same_v<T, Sector>) {
          return Sector{r.theta_lo, r.theta_hi, r.r_lo * rv, r.r_hi * rv};
        } else {
          return OffsetDisk{r.cx * rv, r.cy * rv, r.radius * rv};
        }
      },
      region);
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ConfigError("config field '" + field + "': " + message);
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.contains(key)) fail(where.empty() ? key : where + "." + key, "unknown field");
  }
}

double get_number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  return v.get<double>();
}

std::uint64_t get_count(const json& v, const std::string& field) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) fail(field, "must be non-negative");
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d < 0.0 || d != std::floor(d) || d > 1.8e19) fail(field, "expected a non-negative integer");
    return static_cast<std::uint64_t>(d);
  }
  fail(field, "expected a non-negative integer");
}

std::vector<double> get_number_list(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) fail(field, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(get_number(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

ReflectionStrategy get_strategy(const json& v, const std::string& field) {
  if (!v.is_string()) fail(field, "expected a strategy name");
  auto s = parse_strategy(v.get<std::string>());
  if (!s) fail(field, "unknown strategy '" + v.get<std::string>() +
                          "' (rollback, paper_elastic, specular)");
  return *s;
}

RegionSpec get_region(const json& v, const std::string& field) {
  if (v.is_string()) {
    if (v.get<std::string>() == "full") return {};
    fail(field, "expected a region object or \"full\"");
  }
  if (!v.is_object() || !v.contains("type") || !v["type"].is_string())
    fail(field, "expected an object with a string 'type'");
  RegionSpec spec;
  spec.relative = false;
  if (v.contains("relative")) {
    if (!v["relative"].is_boolean()) fail(field + ".relative", "expected a boolean");
    spec.relative = v["relative"].get<bool>();
  }
  const std::string type = v["type"].get<std::string>();
  auto num = [&](const char* key) {
    if (!v.contains(key)) fail(field + "." + key, "missing");
    return get_number(v[key], field + "." + key);
  };
  if (type == "full") {
    check_keys(v, field, {"type", "relative"});
    spec.region = FullDisk{};
  } else if (type == "concentric") {
    check_keys(v, field, {"type", "relative", "radius"});
    spec.region = ConcentricDisk{num("radius")};
  } else if (type == "sector") {
    check_keys(v, field, {"type", "relative", "theta_lo", "theta_hi", "r_lo", "r_hi"});
    spec.region = Sector{num("theta_lo"), num("theta_hi"), num("r_lo"), num("r_hi")};
  } else if (type == "offset") {
    check_keys(v, field, {"type", "relative", "cx", "cy", "radius"});
    spec.region = OffsetDisk{num("cx"), num("cy"), num("radius")};
  } else {
    fail(field + ".type", "unknown region type '" + type + "' (full, concentric, sector, offset)");
  }
  return spec;
}

std::string line_of(std::string_view text, std::size_t byte) {
  const auto upto = text.substr(0, std::min(byte, text.size()));
  return std::to_string(1 + std::count(upto.begin(), upto.end(), '\n'));
}

bool filesystem_safe(const std::string& name) {
  if (name.empty() || name == "." || name == "..") return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
  });
}

}  // namespace

ExperimentSpec parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config line " + line_of(text, e.byte) + ": " + e.what());
  }
  if (doc.is_null()) doc = json::object();
  if (!doc.is_object()) throw ConfigError("config line 1: top level must be a JSON object");

  check_keys(doc, "",
             {"name", "preset", "D", "dt", "rv", "d", "n_tx", "duration_s", "duration_peaks",
              "strategy", "region", "seed", "seeds", "max_bounces", "sweep", "analysis", "out"});

  ExperimentSpec spec;
  if (doc.contains("preset")) {
    if (!doc["preset"].is_string()) fail("preset", "expected a preset name");
    spec = preset(doc["preset"].get<std::string>());
  }

  if (doc.contains("name")) {
    if (!doc["name"].is_string()) fail("name", "expected a string");
    spec.name = doc["name"].get<std::string>();
  }
  auto& base = spec.base;
  if (doc.contains("D")) base.diffusion = get_number(doc["D"], "D");
  if (doc.contains("dt")) base.dt = get_number(doc["dt"], "dt");
  if (doc.contains("rv")) base.rv = get_number(doc["rv"], "rv");
  if (doc.contains("d")) base.distance = get_number(doc["d"], "d");
  if (doc.contains("n_tx")) base.n_tx = get_count(doc["n_tx"], "n_tx");
  if (doc.contains("duration_s") && doc.contains("duration_peaks"))
    fail("duration_s", "give either duration_s or duration_peaks, not both");
  if (doc.contains("duration_s")) {
    base.duration = get_number(doc["duration_s"], "duration_s");
    spec.duration_peaks.reset();
  }
  if (doc.contains("duration_peaks")) {
    spec.duration_peaks = get_number(doc["duration_peaks"], "duration_peaks");
    if (!(*spec.duration_peaks > 0.0)) fail("duration_peaks", "must be positive");
  }
  if (doc.contains("strategy")) base.strategy = get_strategy(doc["strategy"], "strategy");
  if (doc.contains("region")) spec.base_region = get_region(doc["region"], "region");
  if (doc.contains("max_bounces")) {
    const auto mb = get_count(doc["max_bounces"], "max_bounces");
    if (mb < 1 || mb > 1000000) fail("max_bounces", "must be in [1, 1000000]");
    base.max_bounces = static_cast<int>(mb);
  }
  if (doc.contains("seed") && doc.contains("seeds")) fail("seed", "give either seed or seeds");
  if (doc.contains("seed")) spec.seeds = {get_count(doc["seed"], "seed")};
  if (doc.contains("seeds")) {
    const auto& arr = doc["seeds"];
    if (!arr.is_array() || arr.empty()) fail("seeds", "expected a non-empty array");
    spec.seeds.clear();
    for (std::size_t i = 0; i < arr.size(); ++i)
      spec.seeds.push_back(get_count(arr[i], "seeds[" + std::to_string(i) + "]"));
  }
  if (doc.contains("out")) {
    if (!doc["out"].is_string()) fail("out", "expected a path");
    spec.output_dir = doc["out"].get<std::string>();
  }

  if (doc.contains("sweep")) {
    const auto& sw = doc["sweep"];
    if (!sw.is_object()) fail("sweep", "expected an object");
    check_keys(sw, "sweep", {"D", "d", "rv", "regions", "strategies"});
    if (sw.contains("D")) spec.sweep_diffusion = get_number_list(sw["D"], "sweep.D");
    if (sw.contains("d")) spec.sweep_distance = get_number_list(sw["d"], "sweep.d");
    if (sw.contains("rv")) spec.sweep_rv = get_number_list(sw["rv"], "sweep.rv");
    if (sw.contains("regions")) {
      const auto& arr = sw["regions"];
      if (!arr.is_array() || arr.empty()) fail("sweep.regions", "expected a non-empty array");
      spec.sweep_regions.clear();
      for (std::size_t i = 0; i < arr.size(); ++i)
        spec.sweep_regions.push_back(get_region(arr[i], "sweep.regions[" + std::to_string(i) + "]"));
    }
    if (sw.contains("strategies")) {
      const auto& arr = sw["strategies"];
      if (!arr.is_array() || arr.empty()) fail("sweep.strategies", "expected a non-empty array");
      spec.sweep_strategies.clear();
      for (std::size_t i = 0; i < arr.size(); ++i)
        spec.sweep_strategies.push_back(
            get_strategy(arr[i], "sweep.strategies[" + std::to_string(i) + "]"));
    }
  }

  if (doc.contains("analysis")) {
    const auto& an = doc["analysis"];
    if (!an.is_object()) fail("analysis", "expected an object");
    check_keys(an, "analysis",
               {"angular", "ks", "channel", "slices", "alphas", "peak_multiples", "quorum",
                "write_hits"});
    auto flag = [&](const char* key, bool& out) {
      if (!an.contains(key)) return;
      if (!an[key].is_boolean()) fail(std::string("analysis.") + key, "expected a boolean");
      out = an[key].get<bool>();
    };
    flag("angular", spec.analysis.angular);
    flag("ks", spec.analysis.ks);
    flag("channel", spec.analysis.channel);
    flag("write_hits", spec.analysis.write_hits);
    if (an.contains("slices")) {
      const auto n = get_count(an["slices"], "analysis.slices");
      if (n < 2 || n > 1'000'000) fail("analysis.slices", "must be in [2, 1000000]");
      spec.analysis.slices = static_cast<int>(n);
    }
    if (an.contains("alphas")) {
      spec.analysis.alphas = get_number_list(an["alphas"], "analysis.alphas");
      for (double a : spec.analysis.alphas)
        if (a != 0.01 && a != 0.05) fail("analysis.alphas", "supported levels are 0.01 and 0.05");
    }
    if (an.contains("peak_multiples")) {
      spec.analysis.peak_multiples = get_number_list(an["peak_multiples"], "analysis.peak_multiples");
      for (double m : spec.analysis.peak_multiples)
        if (!(m > 0.0)) fail("analysis.peak_multiples", "must be positive");
    }
    if (an.contains("quorum")) {
      spec.analysis.quorum = get_number(an["quorum"], "analysis.quorum");
      if (!(spec.analysis.quorum > 0.0 && spec.analysis.quorum <= 1.0))
        fail("analysis.quorum", "must be in (0, 1]");
    }
  }

  if (spec.duration_peaks)
    base.duration = *spec.duration_peaks * peak_time(base.distance, base.diffusion);
  validate_spec(spec);
  return spec;
}

bool ExperimentSpec::is_sweep() const {
  return sweep_diffusion.size() > 1 || sweep_distance.size() > 1 || sweep_rv.size() > 1 ||
         sweep_regions.size() > 1 || sweep_strategies.size() > 1 || seeds.size() > 1;
}

std::vector<SimulationConfig> ExperimentSpec::materialize() const {
  auto or_base = [](const std::vector<double>& axis, double value) {
    return axis.empty() ? std::vector<double>{value} : axis;
  };
  const auto diffusions = or_base(sweep_diffusion, base.diffusion);
  const auto radii = or_base(sweep_rv, base.rv);
  const auto distances = or_base(sweep_distance, base.distance);
  const auto regions = sweep_regions.empty() ? std::vector<RegionSpec>{base_region} : sweep_regions;
  const auto strategies = sweep_strategies.empty() ? std::vector<ReflectionStrategy>{base.strategy}
                                                   : sweep_strategies;

  std::vector<SimulationConfig> cells;
  for (double diffusion : diffusions)
    for (double rv : radii)
      for (double distance : distances)
        for (const auto& region : regions)
          for (auto strategy : strategies)
            for (auto seed : seeds) {
              SimulationConfig cfg = base;
              cfg.diffusion = diffusion;
              cfg.rv = rv;
              cfg.distance = distance;
              cfg.region = region.materialize(rv);
              cfg.strategy = strategy;
              cfg.seed = seed;
              if (duration_peaks) cfg.duration = *duration_peaks * peak_time(distance, diffusion);
              cells.push_back(cfg);
            }
  return cells;
}

void validate_spec(const ExperimentSpec& spec) {
  if (!filesystem_safe(spec.name))
    fail("name", "must be non-empty and use only letters, digits, '-', '_' or '.'");
  if (spec.seeds.empty()) fail("seeds", "at least one seed is required");
  if (spec.output_dir.empty()) fail("out", "output directory must not be empty");
  auto positive_finite = [](double v, const std::string& field, const std::string& what) {
    if (!(std::isfinite(v) && v > 0.0)) fail(field, what + " must be a positive number");
  };
  positive_finite(spec.base.diffusion, "D", "D");
  positive_finite(spec.base.dt, "dt", "dt");
  positive_finite(spec.base.rv, "rv", "rv");
  positive_finite(spec.base.distance, "d", "d");
  for (std::size_t i = 0; i < spec.sweep_diffusion.size(); ++i)
    positive_finite(spec.sweep_diffusion[i], "sweep.D[" + std::to_string(i) + "]", "D");
  for (std::size_t i = 0; i < spec.sweep_distance.size(); ++i)
    positive_finite(spec.sweep_distance[i], "sweep.d[" + std::to_string(i) + "]", "d");
  for (std::size_t i = 0; i < spec.sweep_rv.size(); ++i)
    positive_finite(spec.sweep_rv[i], "sweep.rv[" + std::to_string(i) + "]", "rv");
  for (const auto& cfg : spec.materialize()) {
    try {
      cfg.validate();
    } catch (const ConfigError& e) {
      std::ostringstream os;
      os << "cell (D=" << cfg.diffusion << ", rv=" << cfg.rv << ", d=" << cfg.distance
         << ", region=" << describe_region(cfg.region) << "): " << e.what();
      throw ConfigError(os.str());
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

struct PresetDef {
  const char* name;
  const char* description;
  const char* body;
};

constexpr PresetDef kPresets[] = {
    {"table3-good", "Angular uniformity, good environment (D=400, d=7, rv=5)",
     R"({"name": "table3-good", "D": 400, "d": 7, "rv": 5, "duration_peaks": 5,
         "analysis": {"angular": true, "ks": true, "channel": false}})"},
    {"table3-moderate", "Angular uniformity, moderate environment (D=200, d=8, rv=4)",
     R"({"name": "table3-moderate", "D": 200, "d": 8, "rv": 4, "duration_peaks": 5,
         "analysis": {"angular": true, "ks": true, "channel": false}})"},
    {"table3-harsh", "Angular uniformity, harsh environment (D=100, d=9, rv=3)",
     R"({"name": "table3-harsh", "D": 100, "d": 9, "rv": 3, "duration_peaks": 5,
         "analysis": {"angular": true, "ks": true, "channel": false}})"},
    {"fig4a", "Channel curves, full disk and quarter-area patches (D=200, rv=3, d=9)",
     R"({"name": "fig4a", "D": 200, "rv": 3, "d": 9, "duration_peaks": 5,
         "sweep": {"regions": ["full",
                               {"type": "concentric", "relative": true, "radius": 0.5},
                               {"type": "sector", "relative": true, "theta_lo": 0,
                                "theta_hi": 1.5707963267948966, "r_lo": 0, "r_hi": 1}]},
         "analysis": {"angular": false, "ks": false, "channel": true}})"},
    {"fig4b", "Channel curves, full disk and quarter-area patches (D=200, rv=3, d=6)",
     R"({"name": "fig4b", "D": 200, "rv": 3, "d": 6, "duration_peaks": 5,
         "sweep": {"regions": ["full",
                               {"type": "concentric", "relative": true, "radius": 0.5},
                               {"type": "sector", "relative": true, "theta_lo": 0,
                                "theta_hi": 1.5707963267948966, "r_lo": 0, "r_hi": 1}]},
         "analysis": {"angular": false, "ks": false, "channel": true}})"},
    {"fig4c", "Channel curves, full disk and quarter-area patches (D=100, rv=3, d=6)",
     R"({"name": "fig4c", "D": 100, "rv": 3, "d": 6, "duration_peaks": 5,
         "sweep": {"regions": ["full",
                               {"type": "concentric", "relative": true, "radius": 0.5},
                               {"type": "sector", "relative": true, "theta_lo": 0,
                                "theta_hi": 1.5707963267948966, "r_lo": 0, "r_hi": 1}]},
         "analysis": {"angular": false, "ks": false, "channel": true}})"},
    {"table4-sweep", "K-S d/rv threshold sweep over peak-time multiples and both levels",
     R"({"name": "table4-sweep", "D": 400, "rv": 2, "duration_peaks": 5,
         "sweep": {"d": [3.0, 3.2, 3.4, 3.6, 3.8, 4.0, 4.2, 4.4, 4.6, 4.8, 5.0, 5.2, 5.4, 5.6]},
         "seeds": [1, 2, 3, 4, 5],
         "analysis": {"angular": false, "ks": true, "channel": false, "write_hits": false,
                      "peak_multiples": [1, 2, 3, 5], "alphas": [0.01, 0.05]}})"},
};

}  // namespace

ExperimentSpec preset(std::string_view name) {
  for (const auto& p : kPresets) {
    if (name == p.name) return parse_config(p.body);
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'; run 'mcvd presets' for the list");
}

std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  for (const auto& p : kPresets) out.push_back({p.name, p.description});
  return out;
}

}  // namespace mcvd
