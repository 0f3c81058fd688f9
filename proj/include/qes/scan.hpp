#pragma once

// Parameter scans over zeta: sweeps with level tracking, PT-breaking
// threshold bisection, the minus-variant reality scan and the full
// cross-validation suite behind `qes verify`.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qes/model.hpp"

namespace qes {

// Worker count: `requested` if positive, otherwise hardware concurrency;
// capped by the QES_THREADS environment variable when set.
int resolve_threads(int requested = 0);

// Runs body(i) for i in [0, count) on up to `threads` workers. Results
// must be written to per-index slots so the outcome is order independent.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

Spectrum compute_spectrum(const PotentialSpec& spec, Method method, double tol_real = kDefaultTolReal);

struct RouteDeviation {
    Method first;
    Method second;
    double distance;
};

struct RouteComparison {
    std::vector<Spectrum> spectra;  // closed form (m <= 4), matrix, recursion
    std::vector<RouteDeviation> pairwise;
    double max_deviation = 0.0;
};

RouteComparison compare_routes(const PotentialSpec& spec, double tol_real = kDefaultTolReal);

struct SweepResult {
    Variant variant = Variant::minus;
    int m = 1;
    Method method = Method::matrix;
    std::vector<double> zeta_grid;
    std::vector<Spectrum> spectra;
    std::vector<double> max_imag;
    // tracked[i][k]: level k at grid point i after nearest-continuation.
    std::vector<std::vector<complex>> tracked;
};

struct ScanOptions {
    double tol_real = kDefaultTolReal;
    int threads = 0;
};

SweepResult sweep(Variant variant, int m, double zeta_min, double zeta_max, int steps,
                  Method method = Method::matrix, const ScanOptions& options = {});

// Greedy continuation: at each step the closest (predicted, current) pair is
// matched first, so conjugate pairs keep their columns. The prediction is
// the previous point, or the linear extrapolation of the previous two.
std::vector<std::vector<complex>> track_levels(const std::vector<std::vector<complex>>& points);

struct ThresholdOptions {
    double zeta_hi = 10.0;
    double tol_real = kDefaultTolReal;
    double bracket_width = 1e-10;
    double probe = 1e-6;  // smallest zeta examined
};

struct ThresholdResult {
    int m = 1;
    Variant variant = Variant::plus;
    std::optional<double> zeta_c;
    double bracket_width = 0.0;
    std::string note;
};

// All |Im E| <= tol_real * max(1, |E|) on the matrix route.
bool spectrum_is_real(const PotentialSpec& spec, double tol_real = kDefaultTolReal);

ThresholdResult find_threshold(Variant variant, int m, const ThresholdOptions& options = {});

struct ConjectureRow {
    int m = 1;
    double zeta = 0.0;
    double max_rel_imag = 0.0;
    bool all_real = true;
    std::optional<double> certificate_deviation;  // minus variant only
};

struct ConjectureReport {
    Variant variant = Variant::minus;
    double tol_real = kDefaultTolReal;
    std::vector<ConjectureRow> rows;
    double max_rel_imag = 0.0;
    double max_certificate_deviation = 0.0;
    // Every row real (and, for minus, the certificate agrees to 1e-9).
    bool supports = true;
};

ConjectureReport conjecture_scan(Variant variant, int m_max, std::span<const double> zetas,
                                 const ScanOptions& options = {});

struct VerifyCheck {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
};

struct VerifyOptions {
    double tol_real = kDefaultTolReal;
    int threads = 0;
    // Test hook: flips the sign of a_n fed to the recursion, which must make
    // the characteristic-polynomial check fail.
    bool inject_a_sign_error = false;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    double seconds = 0.0;
    bool all_passed() const;
};

VerifyReport run_verify(const VerifyOptions& options = {});

// max_k |p_k - q_k| / max_k max(|p_k|, |q_k|); infinity on degree mismatch.
double polynomial_deviation(std::span<const complex> p, std::span<const complex> q);

}  // namespace qes
