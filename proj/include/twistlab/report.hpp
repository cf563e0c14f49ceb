#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "duality.hpp"
#include "schatten.hpp"
#include "singularity.hpp"
#include "strichartz.hpp"

namespace twistlab {

namespace detail {

inline nlohmann::json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace detail

/// {operator, r, singular_values[0..k], norm, discretization, seed}
inline nlohmann::json schatten_json(const std::string& op, const SchattenReport& rep, const nlohmann::json& discretization,
                                    std::uint64_t seed, std::size_t max_values = 16) {
  nlohmann::json sv = nlohmann::json::array();
  for (std::size_t i = 0; i < rep.singular_values.size() && i < max_values; ++i) sv.push_back(rep.singular_values[i]);
  return {{"operator", op},
          {"r", detail::finite_or_string(rep.r)},
          {"singular_values", sv},
          {"norm", rep.norm},
          {"discretization", discretization},
          {"seed", seed}};
}

inline nlohmann::json discretization_json(const GridSpec& g, const TimeGrid& tg, int k_max) {
  return {{"n", g.n}, {"grid_l", g.half_width}, {"grid_m", g.points}, {"nt", tg.count}, {"kmax", k_max}};
}

inline void write_singularity_csv(std::ostream& os, const ProbeConfig& cfg, const RemainderProfile& prof) {
  os << "z_re,z_im,t,tau,abel_re,abel_im,singular_re,singular_im,remainder_abs\n";
  os << std::setprecision(17);
  for (const auto& s : prof.samples)
    os << cfg.z.real() << ',' << cfg.z.imag() << ',' << s.t << ',' << cfg.tau << ',' << s.abel.real() << ','
       << s.abel.imag() << ',' << s.singular.real() << ',' << s.singular.imag() << ',' << std::abs(s.remainder)
       << '\n';
}

inline nlohmann::json singularity_json(const ProbeConfig& cfg, const RemainderProfile& prof) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : prof.samples)
    rows.push_back({{"z_re", cfg.z.real()},
                    {"z_im", cfg.z.imag()},
                    {"t", s.t},
                    {"tau", cfg.tau},
                    {"abel_re", s.abel.real()},
                    {"abel_im", s.abel.imag()},
                    {"singular_re", s.singular.real()},
                    {"singular_im", s.singular.imag()},
                    {"remainder_abs", std::abs(s.remainder)}});
  return {{"rows", rows}, {"sup_remainder", prof.sup_abs}, {"max_second_difference", prof.max_second_difference}};
}

/// Rows sorted by (q, N, trial) as produced by sweep().
inline void write_sweep_csv(std::ostream& os, const SweepReport& rep) {
  os << "n,p,q,N,trial,ratio,lhs,rhs\n" << std::setprecision(17);
  for (const auto& r : rep.rows) {
    os << r.n << ',';
    if (std::isinf(r.p))
      os << "inf";
    else
      os << r.p;
    os << ',' << r.q << ',' << r.N << ',' << r.trial << ',' << r.ratio << ',' << r.lhs << ',' << r.rhs << '\n';
  }
}

inline nlohmann::json sweep_summary_json(const SweepReport& rep) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& [key, v] : rep.summary.max_ratio) per.push_back({{"q", key.first}, {"N", key.second}, {"max_ratio", v}});
  nlohmann::json growth = nlohmann::json::array();
  for (const auto& [N, y] : rep.summary.growth_points) growth.push_back({{"N", N}, {"mean_lhs", y}});
  int offline = 0;
  for (const auto& r : rep.rows) offline += r.admissible ? 0 : 1;
  return {{"n", rep.config.n},
          {"trials", rep.config.trials},
          {"seed", rep.config.seed},
          {"grid_m", rep.config.grid_points},
          {"nt", rep.config.time_nodes},
          {"max_ratio", per},
          {"overall_max_ratio", rep.summary.overall_max_ratio},
          {"growth_exponent", detail::finite_or_string(rep.summary.growth_exponent)},
          {"fixed_truncation_exponent", detail::finite_or_string(rep.summary.fixed_truncation_exponent)},
          {"growth_points", growth},
          {"off_line_rows", offline}};
}

inline nlohmann::json duality_json(const DualityReport& rep, const DualityExponents& ex) {
  return {{"p", ex.p},
          {"q", ex.q},
          {"alpha", ex.alpha},
          {"alpha_dual", detail::finite_or_string(ex.alpha_dual())},
          {"c_schatten", rep.c_schatten},
          {"c_density", rep.c_density},
          {"constant_ratio", rep.constant_ratio},
          {"dispersion_schatten", rep.dispersion_schatten},
          {"dispersion_density", rep.dispersion_density},
          {"skipped", rep.skipped},
          {"pairing_violations", rep.pairing_violations},
          {"finite", rep.finite}};
}

}  // namespace twistlab
