#include "qes/report.hpp"

#include <cstdio>
#include <sstream>

namespace qes {

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", value);
    return buf;
}

nlohmann::json json_number(double value) {
    if (!std::isfinite(value)) return nullptr;
    return std::stod(format_double(value));
}

nlohmann::json make_meta(Variant variant, int m, std::string_view method, double tol_real) {
    return {{"variant", std::string(to_string(variant))},
            {"M", m},
            {"method", std::string(method)},
            {"tolerances", {{"tol_real", json_number(tol_real)}}},
            {"tool_version", std::string(kToolVersion)}};
}

namespace {

nlohmann::json level_json(double zeta, std::size_t index, const QesLevel& level) {
    nlohmann::json row = {{"zeta", json_number(zeta)},
                          {"level_index", index},
                          {"re_E", json_number(level.energy.real())},
                          {"im_E", json_number(level.energy.imag())},
                          {"reality", std::string(to_string(level.reality))},
                          {"degenerate", level.degenerate}};
    row["pair_id"] = level.pair_id ? nlohmann::json(*level.pair_id) : nlohmann::json(nullptr);
    nlohmann::json phi = nlohmann::json::array();
    for (const auto& c : level.phi_coeffs) phi.push_back({json_number(c.real()), json_number(c.imag())});
    row["phi_coeffs"] = std::move(phi);
    return row;
}

}  // namespace

std::string spectrum_csv(const Spectrum& s) {
    std::ostringstream out;
    out << "zeta,level_index,re_E,im_E,reality\n";
    for (std::size_t k = 0; k < s.levels.size(); ++k) {
        const auto& level = s.levels[k];
        out << format_double(s.spec.zeta) << ',' << k << ',' << format_double(level.energy.real()) << ','
            << format_double(level.energy.imag()) << ',' << to_string(level.reality) << '\n';
    }
    return out.str();
}

nlohmann::json spectrum_json(const Spectrum& s, double tol_real) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 0; k < s.levels.size(); ++k) rows.push_back(level_json(s.spec.zeta, k, s.levels[k]));
    return {{"meta", make_meta(s.spec.variant, s.spec.m, to_string(s.method), tol_real)}, {"levels", rows}};
}

std::string sweep_csv(const SweepResult& r, double tol_real) {
    std::ostringstream out;
    out << "zeta,level_index,re_E,im_E,reality,max_imag\n";
    for (std::size_t i = 0; i < r.zeta_grid.size(); ++i) {
        for (std::size_t k = 0; k < r.tracked[i].size(); ++k) {
            const complex e = r.tracked[i][k];
            out << format_double(r.zeta_grid[i]) << ',' << k << ',' << format_double(e.real()) << ','
                << format_double(e.imag()) << ',' << to_string(classify(e, tol_real)) << ','
                << format_double(r.max_imag[i]) << '\n';
        }
    }
    return out.str();
}

nlohmann::json sweep_json(const SweepResult& r, double tol_real) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < r.zeta_grid.size(); ++i) {
        for (std::size_t k = 0; k < r.tracked[i].size(); ++k) {
            const complex e = r.tracked[i][k];
            rows.push_back({{"zeta", json_number(r.zeta_grid[i])},
                            {"level_index", k},
                            {"re_E", json_number(e.real())},
                            {"im_E", json_number(e.imag())},
                            {"reality", std::string(to_string(classify(e, tol_real)))},
                            {"max_imag", json_number(r.max_imag[i])}});
        }
    }
    return {{"meta", make_meta(r.variant, r.m, to_string(r.method), tol_real)}, {"rows", rows}};
}

std::string conjecture_csv(const ConjectureReport& r) {
    std::ostringstream out;
    out << "m,zeta,max_rel_imag,all_real,certificate_deviation\n";
    for (const auto& row : r.rows) {
        out << row.m << ',' << format_double(row.zeta) << ',' << format_double(row.max_rel_imag) << ','
            << (row.all_real ? "true" : "false") << ','
            << (row.certificate_deviation ? format_double(*row.certificate_deviation) : std::string()) << '\n';
    }
    return out.str();
}

nlohmann::json conjecture_json(const ConjectureReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"m", row.m},
                        {"zeta", json_number(row.zeta)},
                        {"max_rel_imag", json_number(row.max_rel_imag)},
                        {"all_real", row.all_real},
                        {"certificate_deviation", row.certificate_deviation ? json_number(*row.certificate_deviation)
                                                                            : nlohmann::json(nullptr)}});
    }
    int m_max = 0;
    for (const auto& row : r.rows) m_max = std::max(m_max, row.m);
    return {{"meta", make_meta(r.variant, m_max, "matrix", r.tol_real)},
            {"rows", rows},
            {"max_rel_imag", json_number(r.max_rel_imag)},
            {"max_certificate_deviation", json_number(r.max_certificate_deviation)},
            {"verdict", r.supports ? "supports" : "violates"}};
}

std::string threshold_csv(const ThresholdResult& r) {
    std::ostringstream out;
    out << "variant,m,zeta_c,bracket_width\n"
        << to_string(r.variant) << ',' << r.m << ',' << (r.zeta_c ? format_double(*r.zeta_c) : std::string("none"))
        << ',' << format_double(r.bracket_width) << '\n';
    return out.str();
}

nlohmann::json threshold_json(const ThresholdResult& r, double tol_real) {
    return {{"meta", make_meta(r.variant, r.m, "matrix", tol_real)},
            {"zeta_c", r.zeta_c ? json_number(*r.zeta_c) : nlohmann::json(nullptr)},
            {"bracket_width", json_number(r.bracket_width)},
            {"note", r.note}};
}

std::string wavefunction_csv(const GaugeWavefunction& wf, std::span<const double> xs) {
    std::ostringstream out;
    out << "x,re_psi,im_psi,residual\n";
    for (double x : xs) {
        const complex psi = eval_psi(wf, x);
        out << format_double(x) << ',' << format_double(psi.real()) << ',' << format_double(psi.imag()) << ','
            << format_double(ode_residual_at(wf, x)) << '\n';
    }
    return out.str();
}

nlohmann::json wavefunction_json(const GaugeWavefunction& wf, std::span<const double> xs, double tol_real) {
    nlohmann::json rows = nlohmann::json::array();
    for (double x : xs) {
        const complex psi = eval_psi(wf, x);
        rows.push_back({{"x", json_number(x)},
                        {"re_psi", json_number(psi.real())},
                        {"im_psi", json_number(psi.imag())},
                        {"residual", json_number(ode_residual_at(wf, x))}});
    }
    return {{"meta", make_meta(wf.spec.variant, wf.spec.m, "matrix", tol_real)},
            {"energy", {json_number(wf.energy.real()), json_number(wf.energy.imag())}},
            {"samples", rows}};
}

std::string verify_table(const VerifyReport& r) {
    std::ostringstream out;
    for (const auto& c : r.checks) {
        char line[256];
        std::snprintf(line, sizeof line, "%-4s  %-48s  value %.3e  threshold %.1e\n", c.passed ? "PASS" : "FAIL",
                      c.name.c_str(), c.value, c.threshold);
        out << line;
    }
    return out.str();
}

nlohmann::json verify_json(const VerifyReport& r, double tol_real) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"value", json_number(c.value)},
                          {"threshold", json_number(c.threshold)}});
    }
    return {{"tol_real", json_number(tol_real)}, {"checks", checks}, {"all_passed", r.all_passed()}};
}

}  // namespace qes
