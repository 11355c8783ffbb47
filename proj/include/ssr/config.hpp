#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ssr/constants.hpp"
#include "ssr/errors.hpp"
#include "ssr/physics.hpp"
#include "ssr/spin_dynamics.hpp"

namespace ssr {

// Scenario files are INI-style: [section] headers, key = value pairs, '#'
// comments. Parsing is strict -- an unknown section or key fails naming the
// offender. Keys carry explicit unit suffixes (temperature_nK,
// density_per_cm3_e12, ...) and are converted to SI here.

namespace detail {

struct RawConfig {
  // section -> key -> (value, consumed)
  std::map<std::string, std::map<std::string, std::pair<std::string, bool>>> data;

  bool has_section(const std::string& s) const { return data.count(s) > 0; }
};

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline RawConfig parse_ini(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw input_error("config: cannot open " + path.string());
  RawConfig cfg;
  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw input_error("config: malformed section at line " + std::to_string(line_no));
      section = trim(line.substr(1, line.size() - 2));
      cfg.data[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw input_error("config: expected key = value at line " + std::to_string(line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw input_error("config: empty key or value at line " + std::to_string(line_no));
    if (section.empty())
      throw input_error("config: key '" + key + "' outside any section (line " +
                        std::to_string(line_no) + ")");
    if (!cfg.data[section].emplace(key, std::make_pair(value, false)).second)
      throw input_error("config: duplicate key '" + section + "." + key + "'");
  }
  return cfg;
}

class SectionReader {
 public:
  SectionReader(RawConfig& cfg, const std::string& section) : cfg_(cfg), section_(section) {}

  std::optional<std::string> get(const std::string& key) {
    auto sec = cfg_.data.find(section_);
    if (sec == cfg_.data.end()) return std::nullopt;
    auto it = sec->second.find(key);
    if (it == sec->second.end()) return std::nullopt;
    it->second.second = true;
    return it->second.first;
  }

  std::string require(const std::string& key) {
    auto v = get(key);
    if (!v) throw input_error("config: missing required key '" + section_ + "." + key + "'");
    return *v;
  }

  double number(const std::string& key) { return to_number(key, require(key)); }

  double number_or(const std::string& key, double fallback) {
    auto v = get(key);
    return v ? to_number(key, *v) : fallback;
  }

  std::string text_or(const std::string& key, const std::string& fallback) {
    auto v = get(key);
    return v ? *v : fallback;
  }

  double to_number(const std::string& key, const std::string& raw) const {
    try {
      std::size_t pos = 0;
      const double v = std::stod(raw, &pos);
      if (pos != raw.size()) throw std::invalid_argument(raw);
      return v;
    } catch (const std::exception&) {
      throw input_error("config: bad number for '" + section_ + "." + key + "': " + raw);
    }
  }

 private:
  RawConfig& cfg_;
  std::string section_;
};

inline void reject_unknown(const RawConfig& cfg, const std::set<std::string>& known_sections) {
  for (const auto& [section, keys] : cfg.data) {
    if (!known_sections.count(section))
      throw input_error("config: unknown section [" + section + "]");
    for (const auto& [key, entry] : keys)
      if (!entry.second)
        throw input_error("config: unknown key '" + section + "." + key + "'");
  }
}

// times_s accepts "start:stop:step" or a comma-separated list.
inline std::vector<double> parse_times(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    double v[3];
    std::stringstream ss(spec);
    std::string part;
    int i = 0;
    while (std::getline(ss, part, ':')) {
      if (i >= 3) throw input_error("config: times_s range needs start:stop:step");
      v[i++] = std::stod(trim(part));
    }
    if (i != 3 || !(v[2] > 0.0) || v[1] < v[0])
      throw input_error("config: times_s range needs start:stop:step with step > 0");
    for (double t = v[0]; t <= v[1] + 1e-12 * v[2]; t += v[2]) out.push_back(t);
    return out;
  }
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(std::stod(trim(part)));
  return out;
}

inline std::vector<double> parse_list(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(std::stod(trim(part)));
  if (out.empty()) throw input_error("config: empty list");
  return out;
}

}  // namespace detail

struct StabilityConfig {
  std::size_t n_shots = 0;
  double cycle_time = 0.0;   // s
  double shot_sigma_y = 0.0;
  double ac_amplitude_y = 0.0;  // optional sinusoidal modulation
  double ac_period = 600.0;     // s
};

struct BudgetConfig {
  double interrogation_time = 0.0;  // s
  double cycle_time = 0.0;          // s
  double contrast = 0.0;
  double atom_number = 0.0;
  double detection_sigma_p = 0.0;   // per-shot sigma of P
  double intensity_rin = 0.0;       // relative intensity noise per shot
  double pointing = 0.0;            // m per shot
  double beam_waist = 0.0;          // m
  double field_noise = 0.0;         // G per shot
  double density_fraction = 0.0;    // relative density noise per shot
  double temperature_noise = 0.0;   // K per shot
  double maser_floor_y = 0.0;       // fractional frequency per shot
};

struct Scenario {
  std::string name;
  PhysicalParams params;
  // grid
  std::size_t n_classes = 200;
  double epsilon_max = 12.0;
  double dt = 0.0;  // s, <= 0 means auto
  // sequence
  double mw_detuning = 0.0;  // Hz
  PulseModel pulse_model = PulseModel::instantaneous;
  double pulse_duration = 0.0;  // s
  std::vector<double> times;
  // optional multi-density scan (m^-3)
  std::vector<double> scan_densities;
  std::optional<StabilityConfig> stability;
  std::optional<BudgetConfig> budget;

  bool has_sequence() const { return !times.empty(); }
};

inline Scenario load_scenario(const std::filesystem::path& path) {
  detail::RawConfig raw = detail::parse_ini(path);
  Scenario sc;
  sc.name = path.stem().string();

  {
    detail::SectionReader species(raw, "species");
    AtomSpecies& s = sc.params.species;
    s = AtomSpecies{};
    s.name = species.text_or("name", "Rb87");
    s.mass = species.number("mass_kg");
    auto length = [&](const std::string& base) {
      auto ab = species.get(base + "_aB");
      auto m = species.get(base + "_m");
      if (ab && m)
        throw input_error("config: give species." + base + " in aB or m, not both");
      if (ab) return species.to_number(base + "_aB", *ab) * constants::bohr_radius;
      if (m) return species.to_number(base + "_m", *m);
      throw input_error("config: missing required key 'species." + base + "_aB' (or _m)");
    };
    s.a_uu = length("a_uu");
    s.a_dd = length("a_dd");
    s.a_ud = length("a_ud");
    s.hyperfine_frequency = species.number("hyperfine_frequency_hz");
    s.zeeman_coefficient = species.number("zeeman_coefficient_hz_per_g2");
  }
  if (raw.has_section("trap")) {
    detail::SectionReader trap(raw, "trap");
    PhysicalParams& p = sc.params;
    p.temperature = trap.number("temperature_nK") * constants::nK;
    p.mean_density = trap.number("density_per_cm3_e12") * constants::per_cm3_e12;
    p.mean_trap_frequency = trap.number_or("mean_trap_frequency_hz", 0.0) * constants::two_pi;
    p.dls_per_intensity = trap.number_or("dls_per_intensity_hz", 0.0);
    p.total_ls_per_intensity = trap.number_or("total_ls_per_intensity_hz", 0.0);
    p.mean_intensity = trap.number_or("mean_intensity_kw_cm2", 0.0);
    p.magnetic_field = trap.number_or("magnetic_field_mG", 0.0) * constants::mG;
  }
  if (raw.has_section("model")) {
    detail::SectionReader model(raw, "model");
    sc.params.dephasing_correction = model.number_or("dephasing_correction", 1.6);
    sc.params.exchange_correction = model.number_or("exchange_correction", 0.6);
    const std::string cal = model.text_or("collision_calibration", "auto");
    sc.params.collision_calibration =
        cal == "auto" ? 0.0 : model.to_number("collision_calibration", cal);
  }
  if (raw.has_section("grid")) {
    detail::SectionReader grid(raw, "grid");
    const double n = grid.number_or("n_classes", 200.0);
    if (!(n >= 2.0) || n != std::floor(n))
      throw input_error("config: grid.n_classes must be an integer >= 2");
    sc.n_classes = static_cast<std::size_t>(n);
    sc.epsilon_max = grid.number_or("epsilon_max", 12.0);
    const std::string dt = grid.text_or("dt_s", "auto");
    sc.dt = dt == "auto" ? 0.0 : grid.to_number("dt_s", dt);
  }
  if (raw.has_section("sequence")) {
    detail::SectionReader seq(raw, "sequence");
    sc.mw_detuning = seq.number_or("mw_detuning_hz", 0.0);
    const std::string pulse = seq.text_or("pulse", "instantaneous");
    if (pulse == "instantaneous") {
      sc.pulse_model = PulseModel::instantaneous;
    } else if (pulse == "finite") {
      sc.pulse_model = PulseModel::finite;
    } else {
      throw input_error("config: sequence.pulse must be instantaneous or finite");
    }
    sc.pulse_duration = seq.number_or("pulse_duration_us", 100.0) * 1e-6;
    sc.times = detail::parse_times(seq.require("times_s"));
  }
  if (raw.has_section("scan")) {
    detail::SectionReader scan(raw, "scan");
    for (double d : detail::parse_list(scan.require("densities_per_cm3_e12")))
      sc.scan_densities.push_back(d * constants::per_cm3_e12);
  }
  if (raw.has_section("stability")) {
    detail::SectionReader st(raw, "stability");
    StabilityConfig s;
    const double n = st.number("n_shots");
    if (!(n >= 3.0) || n != std::floor(n))
      throw input_error("config: stability.n_shots must be an integer >= 3");
    s.n_shots = static_cast<std::size_t>(n);
    s.cycle_time = st.number("cycle_time_s");
    s.shot_sigma_y = st.number("shot_sigma_y");
    s.ac_amplitude_y = st.number_or("ac_amplitude_y", 0.0);
    s.ac_period = st.number_or("ac_period_s", 600.0);
    sc.stability = s;
  }
  if (raw.has_section("budget")) {
    detail::SectionReader b(raw, "budget");
    BudgetConfig bc;
    bc.interrogation_time = b.number("interrogation_time_s");
    bc.cycle_time = b.number("cycle_time_s");
    bc.contrast = b.number("contrast");
    bc.atom_number = b.number("atom_number");
    bc.detection_sigma_p = b.number_or("detection_sigma_p", 0.0);
    bc.intensity_rin = b.number_or("intensity_rin", 0.0);
    bc.pointing = b.number_or("pointing_um", 0.0) * constants::micrometer;
    bc.beam_waist = b.number_or("beam_waist_um", 60.0) * constants::micrometer;
    bc.field_noise = b.number_or("field_noise_mG", 0.0) * constants::mG;
    bc.density_fraction = b.number_or("density_fraction", 0.0);
    bc.temperature_noise = b.number_or("temperature_noise_nK", 0.0) * constants::nK;
    bc.maser_floor_y = b.number_or("maser_floor_y", 0.0);
    sc.budget = bc;
  }

  detail::reject_unknown(raw, {"species", "trap", "model", "grid", "sequence", "scan",
                               "stability", "budget"});
  sc.params.validate();
  return sc;
}

}  // namespace ssr
