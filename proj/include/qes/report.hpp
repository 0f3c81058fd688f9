#pragma once

// CSV / JSON renderings used by the CLI. Floats are printed with "%.12e" and
// rows follow the spectrum ordering, so identical inputs give identical
// bytes.

#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qes/model.hpp"
#include "qes/scan.hpp"
#include "qes/wavefunction.hpp"

namespace qes {

inline constexpr std::string_view kToolVersion = "1.0.0";

std::string format_double(double value);

// Round-trips through format_double so JSON carries the same digits as CSV.
nlohmann::json json_number(double value);

nlohmann::json make_meta(Variant variant, int m, std::string_view method, double tol_real);

// zeta,level_index,re_E,im_E,reality
std::string spectrum_csv(const Spectrum& s);
nlohmann::json spectrum_json(const Spectrum& s, double tol_real);

// zeta,level_index,re_E,im_E,reality,max_imag  (tracked level order)
std::string sweep_csv(const SweepResult& r, double tol_real);
nlohmann::json sweep_json(const SweepResult& r, double tol_real);

// m,zeta,max_rel_imag,all_real,certificate_deviation
std::string conjecture_csv(const ConjectureReport& r);
nlohmann::json conjecture_json(const ConjectureReport& r);

std::string threshold_csv(const ThresholdResult& r);
nlohmann::json threshold_json(const ThresholdResult& r, double tol_real);

// x,re_psi,im_psi,residual
std::string wavefunction_csv(const GaugeWavefunction& wf, std::span<const double> xs);
nlohmann::json wavefunction_json(const GaugeWavefunction& wf, std::span<const double> xs, double tol_real);

std::string verify_table(const VerifyReport& r);
nlohmann::json verify_json(const VerifyReport& r, double tol_real);

}  // namespace qes
