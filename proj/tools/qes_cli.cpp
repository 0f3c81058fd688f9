// qes: spectra, sweeps, thresholds and cross-validation for the
// quasi-exactly-solvable potentials -(zeta cosh 2x - iM)^2 and
// -(zeta sinh 2x - iM)^2.
//
// Exit codes: 0 ok, 1 usage, 2 cross-route disagreement / failed check,
// 3 internal numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qes/errors.hpp"
#include "qes/report.hpp"
#include "qes/scan.hpp"
#include "qes/wavefunction.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDisagreement = 2;
constexpr int kExitNumerical = 3;

constexpr double kRouteAgreement = 1e-6;

struct CommonArgs {
    std::string variant = "minus";
    double zeta = 1.0;
    int m = 1;
    std::string method = "matrix";
    std::string format = "csv";
    std::string out;
    double tol_real = qes::kDefaultTolReal;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_point = true) {
    cmd->add_option("--variant", args.variant, "plus (cosh) or minus (sinh)")
        ->check(CLI::IsMember({"plus", "minus"}))
        ->capture_default_str();
    if (with_point) {
        cmd->add_option("--zeta", args.zeta, "coupling zeta")->capture_default_str();
    }
    cmd->add_option("--m", args.m, "integer parameter M >= 1")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--format", args.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    cmd->add_option("--out", args.out, "output file (default stdout)");
    cmd->add_option("--tol-real", args.tol_real, "relative tolerance for classifying E as real")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

void emit(const CommonArgs& args, const std::string& text) {
    if (args.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(args.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file " + args.out);
    file << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

int run_spectrum(const CommonArgs& args) {
    const qes::PotentialSpec spec{qes::parse_variant(args.variant), args.zeta, args.m};
    qes::validate(spec);
    if (args.method != "all") {
        const auto s = qes::compute_spectrum(spec, qes::parse_method(args.method), args.tol_real);
        emit(args, args.format == "json" ? dump(qes::spectrum_json(s, args.tol_real)) : qes::spectrum_csv(s));
        return kExitOk;
    }
    const auto cmp = qes::compare_routes(spec, args.tol_real);
    const auto& primary = cmp.spectra[cmp.spectra.size() - 2];  // matrix route
    if (args.format == "json") {
        auto j = qes::spectrum_json(primary, args.tol_real);
        j["meta"]["method"] = "all";
        nlohmann::json routes = nlohmann::json::object();
        for (const auto& s : cmp.spectra) routes[std::string(qes::to_string(s.method))] = qes::spectrum_json(s, args.tol_real)["levels"];
        j["routes"] = routes;
        nlohmann::json dev = nlohmann::json::array();
        for (const auto& d : cmp.pairwise) {
            dev.push_back({{"first", std::string(qes::to_string(d.first))},
                           {"second", std::string(qes::to_string(d.second))},
                           {"max_deviation", qes::json_number(d.distance)}});
        }
        j["deviations"] = dev;
        emit(args, dump(j));
    } else {
        emit(args, qes::spectrum_csv(primary));
        for (const auto& d : cmp.pairwise) {
            std::cerr << "deviation " << qes::to_string(d.first) << " vs " << qes::to_string(d.second) << ": "
                      << qes::format_double(d.distance) << '\n';
        }
    }
    if (!(cmp.max_deviation <= kRouteAgreement)) {
        std::cerr << "error: solution routes disagree by " << qes::format_double(cmp.max_deviation) << '\n';
        return kExitDisagreement;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasi-exactly-solvable spectra of -(zeta cosh 2x - iM)^2 and -(zeta sinh 2x - iM)^2"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(qes::kToolVersion));

    CommonArgs spectrum_args;
    auto* spectrum = app.add_subcommand("spectrum", "QES energies for one (variant, zeta, M)");
    add_common(spectrum, spectrum_args);
    spectrum->add_option("--method", spectrum_args.method, "closed | matrix | recursion | all")
        ->check(CLI::IsMember({"closed", "matrix", "recursion", "all"}))
        ->capture_default_str();

    CommonArgs sweep_args;
    double zeta_min = 0.0, zeta_max = 1.0;
    int steps = 101;
    auto* sweep = app.add_subcommand("sweep", "spectra on a uniform zeta grid with level tracking");
    add_common(sweep, sweep_args, false);
    sweep->add_option("--method", sweep_args.method, "closed | matrix | recursion")
        ->check(CLI::IsMember({"closed", "matrix", "recursion"}))
        ->capture_default_str();
    sweep->add_option("--zeta-min", zeta_min)->capture_default_str();
    sweep->add_option("--zeta-max", zeta_max)->capture_default_str();
    sweep->add_option("--steps", steps, "grid points (>= 2)")->check(CLI::Range(2, 1000000))->capture_default_str();

    CommonArgs threshold_args;
    threshold_args.variant = "plus";
    qes::ThresholdOptions topt;
    auto* threshold = app.add_subcommand("threshold", "bisect the zeta where the spectrum stops being real");
    add_common(threshold, threshold_args, false);
    threshold->add_option("--zeta-hi", topt.zeta_hi, "upper end of the search")->capture_default_str();
    threshold->add_option("--bracket", topt.bracket_width, "final bracket width")->capture_default_str();

    CommonArgs scan_args;
    int m_max = 12;
    std::vector<double> zetas{0.1, 0.5, 1.0, 2.0, 5.0};
    auto* scan = app.add_subcommand("conjecture-scan", "reality scan over M = 1..m_max and a zeta grid");
    add_common(scan, scan_args, false);
    scan->add_option("--m-max", m_max)->check(CLI::PositiveNumber)->capture_default_str();
    scan->add_option("--zetas", zetas, "comma-separated zeta grid")->delimiter(',')->capture_default_str();

    CommonArgs verify_args;
    verify_args.format = "text";
    bool inject = false;
    auto* verify = app.add_subcommand("verify", "run the full cross-validation suite");
    verify->add_option("--tol-real", verify_args.tol_real)->check(CLI::PositiveNumber)->capture_default_str();
    verify->add_option("--format", verify_args.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    verify->add_option("--out", verify_args.out);
    verify->add_flag("--inject-sign-error", inject, "flip the sign of a_n in the recursion (harness self-test)")
        ->group("");

    CommonArgs wf_args;
    int level = 0, points = 121;
    double x_min = -3.0, x_max = 3.0;
    auto* wavefunction = app.add_subcommand("wavefunction", "sample psi(x) of one level with its ODE residual");
    add_common(wavefunction, wf_args);
    wavefunction->add_option("--method", wf_args.method, "closed | matrix | recursion")
        ->check(CLI::IsMember({"closed", "matrix", "recursion"}))
        ->capture_default_str();
    wavefunction->add_option("--level", level, "level index in the sorted spectrum")->capture_default_str();
    wavefunction->add_option("--x-min", x_min)->capture_default_str();
    wavefunction->add_option("--x-max", x_max)->capture_default_str();
    wavefunction->add_option("--points", points)->check(CLI::Range(2, 1000000))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*spectrum) return run_spectrum(spectrum_args);

        if (*sweep) {
            const auto variant = qes::parse_variant(sweep_args.variant);
            const auto result = qes::sweep(variant, sweep_args.m, zeta_min, zeta_max, steps,
                                           qes::parse_method(sweep_args.method), {sweep_args.tol_real, 0});
            emit(sweep_args, sweep_args.format == "json" ? dump(qes::sweep_json(result, sweep_args.tol_real))
                                                         : qes::sweep_csv(result, sweep_args.tol_real));
            return kExitOk;
        }

        if (*threshold) {
            topt.tol_real = threshold_args.tol_real;
            const auto result = qes::find_threshold(qes::parse_variant(threshold_args.variant), threshold_args.m, topt);
            emit(threshold_args, threshold_args.format == "json" ? dump(qes::threshold_json(result, topt.tol_real))
                                                                 : qes::threshold_csv(result));
            if (!result.zeta_c) std::cerr << "note: " << result.note << '\n';
            return kExitOk;
        }

        if (*scan) {
            const auto report = qes::conjecture_scan(qes::parse_variant(scan_args.variant), m_max, zetas,
                                                     {scan_args.tol_real, 0});
            if (scan_args.format == "json") {
                emit(scan_args, dump(qes::conjecture_json(report)));
            } else {
                emit(scan_args, qes::conjecture_csv(report));
                std::cerr << "max relative |Im E| = " << qes::format_double(report.max_rel_imag);
                if (report.variant == qes::Variant::minus) {
                    std::cerr << ", certificate deviation = " << qes::format_double(report.max_certificate_deviation);
                }
                std::cerr << "\nverdict: " << (report.supports ? "supports" : "violates")
                          << " reality at tol_real = " << qes::format_double(report.tol_real) << '\n';
            }
            return kExitOk;
        }

        if (*verify) {
            qes::VerifyOptions vopt;
            vopt.tol_real = verify_args.tol_real;
            vopt.inject_a_sign_error = inject;
            const auto report = qes::run_verify(vopt);
            emit(verify_args, verify_args.format == "json" ? dump(qes::verify_json(report, vopt.tol_real))
                                                           : qes::verify_table(report));
            std::cerr << (report.all_passed() ? "all checks passed" : "some checks FAILED") << " in "
                      << report.seconds << " s\n";
            return report.all_passed() ? kExitOk : kExitDisagreement;
        }

        if (*wavefunction) {
            const qes::PotentialSpec spec{qes::parse_variant(wf_args.variant), wf_args.zeta, wf_args.m};
            qes::validate(spec);
            const auto s = qes::compute_spectrum(spec, qes::parse_method(wf_args.method), wf_args.tol_real);
            if (level < 0 || level >= static_cast<int>(s.levels.size())) {
                std::cerr << "error: --level must be in [0, " << s.levels.size() << ")\n";
                return kExitUsage;
            }
            const auto wf = qes::make_wavefunction(spec, s.levels[static_cast<std::size_t>(level)]);
            std::vector<double> xs;
            for (int k = 0; k < points; ++k) xs.push_back(x_min + (x_max - x_min) * k / (points - 1));
            emit(wf_args, wf_args.format == "json" ? dump(qes::wavefunction_json(wf, xs, wf_args.tol_real))
                                                   : qes::wavefunction_csv(wf, xs));
            return kExitOk;
        }
    } catch (const qes::non_convergence& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const qes::eigensolver_failure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const qes::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}
