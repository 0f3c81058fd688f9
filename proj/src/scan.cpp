#include "qes/scan.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qes/closed_form.hpp"
#include "qes/gauge_matrix.hpp"
#include "qes/recursion.hpp"
#include "qes/wavefunction.hpp"

namespace qes {

int resolve_threads(int requested) {
    int threads = requested > 0 ? requested : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* cap = std::getenv("QES_THREADS")) {
        char* end = nullptr;
        const long value = std::strtol(cap, &end, 10);
        if (end != cap && value > 0) threads = std::min(threads, static_cast<int>(value));
    }
    return std::max(1, threads);
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto run = [&] {
        for (std::size_t i = next++; i < count && !failed; i = next++) {
            try {
                body(i);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, count); ++w) pool.emplace_back(run);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

Spectrum compute_spectrum(const PotentialSpec& spec, Method method, double tol_real) {
    switch (method) {
        case Method::closed_form: return closed_form_energies(spec, tol_real);
        case Method::matrix: return eigen_spectrum(build_operator(spec), spec, tol_real);
        case Method::recursion: return qes_energies_recursion(spec, tol_real);
    }
    throw std::invalid_argument("compute_spectrum: unknown method");
}

RouteComparison compare_routes(const PotentialSpec& spec, double tol_real) {
    RouteComparison out;
    if (spec.m <= 4) out.spectra.push_back(closed_form_energies(spec, tol_real));
    out.spectra.push_back(compute_spectrum(spec, Method::matrix, tol_real));
    out.spectra.push_back(compute_spectrum(spec, Method::recursion, tol_real));
    for (std::size_t i = 0; i < out.spectra.size(); ++i) {
        for (std::size_t j = i + 1; j < out.spectra.size(); ++j) {
            const double d = multiset_distance(out.spectra[i], out.spectra[j]);
            out.pairwise.push_back({out.spectra[i].method, out.spectra[j].method, d});
            out.max_deviation = std::max(out.max_deviation, d);
        }
    }
    return out;
}

std::vector<std::vector<complex>> track_levels(const std::vector<std::vector<complex>>& points) {
    std::vector<std::vector<complex>> tracked;
    if (points.empty()) return tracked;
    tracked.push_back(points.front());
    for (std::size_t i = 1; i < points.size(); ++i) {
        const auto& prev = tracked.back();
        const auto& cur = points[i];
        const std::size_t n = prev.size();
        if (cur.size() != n) throw std::invalid_argument("track_levels: level count changed along the sweep");
        // Linear continuation once two points exist; plain nearest-previous
        // zigzags when two levels closer than one step move in parallel.
        std::vector<complex> guess = prev;
        if (i >= 2) {
            const auto& before = tracked[i - 2];
            for (std::size_t p = 0; p < n; ++p) guess[p] = 2.0 * prev[p] - before[p];
        }
        std::vector<complex> next(n);
        std::vector<bool> used_prev(n, false), used_cur(n, false);
        for (std::size_t round = 0; round < n; ++round) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t bp = 0, bc = 0;
            for (std::size_t p = 0; p < n; ++p) {
                if (used_prev[p]) continue;
                for (std::size_t c = 0; c < n; ++c) {
                    if (used_cur[c]) continue;
                    const double d = std::abs(guess[p] - cur[c]);
                    if (d < best) {
                        best = d;
                        bp = p;
                        bc = c;
                    }
                }
            }
            used_prev[bp] = used_cur[bc] = true;
            next[bp] = cur[bc];
        }
        tracked.push_back(std::move(next));
    }
    return tracked;
}

SweepResult sweep(Variant variant, int m, double zeta_min, double zeta_max, int steps, Method method,
                  const ScanOptions& options) {
    if (steps < 2) throw std::invalid_argument("sweep: steps must be >= 2");
    SweepResult out{variant, m, method, {}, {}, {}, {}};
    const auto count = static_cast<std::size_t>(steps);
    for (std::size_t i = 0; i < count; ++i) {
        // Endpoint-exact uniform grid.
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        out.zeta_grid.push_back(i + 1 == count ? zeta_max : zeta_min + t * (zeta_max - zeta_min));
    }
    out.spectra.resize(count);
    parallel_for(count, resolve_threads(options.threads), [&](std::size_t i) {
        out.spectra[i] = compute_spectrum({variant, out.zeta_grid[i], m}, method, options.tol_real);
    });
    std::vector<std::vector<complex>> points;
    for (const auto& s : out.spectra) {
        double worst = 0.0;
        for (const auto& level : s.levels) worst = std::max(worst, std::abs(level.energy.imag()));
        out.max_imag.push_back(worst);
        points.push_back(energies(s));
    }
    out.tracked = track_levels(points);
    return out;
}

bool spectrum_is_real(const PotentialSpec& spec, double tol_real) {
    const auto s = compute_spectrum(spec, Method::matrix, tol_real);
    return std::all_of(s.levels.begin(), s.levels.end(),
                       [](const QesLevel& level) { return level.reality == Reality::real; });
}

ThresholdResult find_threshold(Variant variant, int m, const ThresholdOptions& options) {
    ThresholdResult out;
    out.m = m;
    out.variant = variant;
    if (variant == Variant::minus) {
        out.note = "minus variant: no PT-breaking threshold expected (spectrum conjectured real for every zeta)";
        return out;
    }
    auto real_at = [&](double zeta) { return spectrum_is_real({variant, zeta, m}, options.tol_real); };
    if (!real_at(options.probe)) {
        out.zeta_c = 0.0;
        out.bracket_width = options.probe;
        out.note = "spectrum already complex at the smallest probe";
        return out;
    }
    if (real_at(options.zeta_hi)) {
        out.bracket_width = options.zeta_hi - options.probe;
        out.note = "spectrum real on the whole probed range; no threshold below zeta_hi";
        return out;
    }
    double lo = options.probe, hi = options.zeta_hi;
    while (hi - lo > options.bracket_width) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (real_at(mid) ? lo : hi) = mid;
    }
    out.zeta_c = 0.5 * (lo + hi);
    out.bracket_width = hi - lo;
    out.note = "bisection on the all-real indicator";
    return out;
}

ConjectureReport conjecture_scan(Variant variant, int m_max, std::span<const double> zetas,
                                 const ScanOptions& options) {
    if (m_max < 1) throw std::invalid_argument("conjecture_scan: m_max must be >= 1");
    ConjectureReport report;
    report.variant = variant;
    report.tol_real = options.tol_real;
    const std::size_t nz = zetas.size();
    report.rows.resize(static_cast<std::size_t>(m_max) * nz);
    parallel_for(report.rows.size(), resolve_threads(options.threads), [&](std::size_t idx) {
        const int m = static_cast<int>(idx / nz) + 1;
        const double zeta = zetas[idx % nz];
        const PotentialSpec spec{variant, zeta, m};
        const auto op = build_operator(spec);
        const auto s = eigen_spectrum(op, spec, options.tol_real);
        ConjectureRow row{m, zeta, max_relative_imag(s), true, std::nullopt};
        row.all_real = std::all_of(s.levels.begin(), s.levels.end(),
                                   [](const QesLevel& level) { return level.reality == Reality::real; });
        if (variant == Variant::minus) {
            const auto sym = symmetric_eigenvalues(symmetrize_minus(op));
            const std::vector<complex> certificate(sym.begin(), sym.end());
            row.certificate_deviation = multiset_distance(certificate, energies(s));
        }
        report.rows[idx] = row;
    });
    for (const auto& row : report.rows) {
        report.max_rel_imag = std::max(report.max_rel_imag, row.max_rel_imag);
        if (row.certificate_deviation) {
            report.max_certificate_deviation = std::max(report.max_certificate_deviation, *row.certificate_deviation);
        }
        report.supports = report.supports && row.all_real;
    }
    report.supports = report.supports && report.max_certificate_deviation < 1e-9;
    return report;
}

double polynomial_deviation(std::span<const complex> p, std::span<const complex> q) {
    if (p.size() != q.size()) return std::numeric_limits<double>::infinity();
    double dev = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        dev = std::max(dev, std::abs(p[k] - q[k]));
        scale = std::max({scale, std::abs(p[k]), std::abs(q[k])});
    }
    return scale > 0.0 ? dev / scale : dev;
}

bool VerifyReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

namespace {

constexpr Variant kVariants[] = {Variant::plus, Variant::minus};

struct Accumulator {
    double worst = 0.0;
    bool ok = true;
    void add(double value) {
        if (!std::isfinite(value)) ok = false;
        worst = std::max(worst, value);
    }
};

VerifyCheck below(std::string name, const Accumulator& acc, double threshold) {
    return {std::move(name), acc.ok && acc.worst < threshold, acc.worst, threshold};
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    VerifyReport report;
    const double tol_real = options.tol_real;
    const std::vector<double> route_grid{0.1, 0.5, 1.0, 2.0, 5.0};

    {
        Accumulator acc;
        for (auto v : kVariants) {
            for (double zeta : route_grid) {
                for (int m = 1; m <= 20; ++m) {
                    const PotentialSpec spec{v, zeta, m};
                    auto rc = recursion_coeffs(spec);
                    if (options.inject_a_sign_error) rc.a = [a = rc.a](int n) { return -a(n); };
                    const auto r = build_R(rc, m).back();
                    acc.add(polynomial_deviation(characteristic_polynomial(build_operator(spec)).coeffs, r.coeffs));
                }
            }
        }
        report.checks.push_back(below("char-poly(H_g) == R_M  [M<=20]", acc, 1e-10));
    }
    {
        Accumulator ops, comm;
        for (auto v : kVariants) {
            for (double zeta : route_grid) {
                for (int m = 1; m <= 20; ++m) {
                    const PotentialSpec spec{v, zeta, m};
                    ops.add((build_from_sl2(spec).dense() - build_operator(spec).dense()).cwiseAbs().maxCoeff());
                }
            }
        }
        for (int m = 1; m <= 50; ++m) {
            const auto g = sl2_generators(m);
            comm.add((g.j0 * g.jp - g.jp * g.j0 - g.jp).cwiseAbs().maxCoeff());
            comm.add((g.j0 * g.jm - g.jm * g.j0 + g.jm).cwiseAbs().maxCoeff());
            comm.add((g.jp * g.jm - g.jm * g.jp + 2.0 * g.j0).cwiseAbs().maxCoeff());
        }
        report.checks.push_back(below("sl(2) form == gauged operator", ops, 1e-13));
        report.checks.push_back(below("sl(2) commutators  [M<=50]", comm, 1e-13));
    }
    {
        Accumulator acc;
        for (auto v : kVariants) {
            for (double zeta : {0.1, 0.5, 1.0, 2.0}) {
                for (int m = 1; m <= 10; ++m) acc.add(factorization_check({v, zeta, m}, 5));
            }
        }
        report.checks.push_back(below("R_{M+n} == R_M Rbar_n  [M<=10, n<=5]", acc, 1e-9));
    }

    // Route comparisons dominate the runtime; spread them over the workers.
    struct RouteCase {
        PotentialSpec spec;
        double closed = 0.0, matrix_recursion = 0.0, trace = 0.0;
        bool failed = false;
    };
    std::vector<RouteCase> cases;
    for (auto v : kVariants) {
        for (double zeta : {0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0}) {
            for (int m = 1; m <= 4; ++m) cases.push_back({{v, zeta, m}});
        }
        for (double zeta : route_grid) {
            for (int m = 5; m <= 20; ++m) cases.push_back({{v, zeta, m}});
        }
    }
    const auto samples = default_samples();
    parallel_for(cases.size(), resolve_threads(options.threads), [&](std::size_t i) {
        auto& c = cases[i];
        try {
            const auto cmp = compare_routes(c.spec, tol_real);
            const auto& matrix = cmp.spectra[cmp.spectra.size() - 2];
            const auto& recursion = cmp.spectra.back();
            c.matrix_recursion = multiset_distance(matrix, recursion);
            if (c.spec.m <= 4) {
                c.closed = std::max(multiset_distance(cmp.spectra[0], matrix), multiset_distance(cmp.spectra[0], recursion));
            }
            complex trace{};
            double diag_sum = 0.0;
            const auto rc = recursion_coeffs(c.spec);
            for (int n = 0; n < c.spec.m; ++n) diag_sum += rc.b(n);
            for (const auto& level : matrix.levels) trace += level.energy;
            c.trace = std::abs(trace - diag_sum) / std::max(1.0, std::abs(diag_sum));
        } catch (const std::exception&) {
            c.failed = true;
        }
    });
    {
        Accumulator closed, routes, trace;
        for (const auto& c : cases) {
            if (c.failed) {
                closed.ok = routes.ok = trace.ok = false;
                continue;
            }
            closed.add(c.closed);
            routes.add(c.matrix_recursion);
            trace.add(c.trace);
        }
        report.checks.push_back(below("closed forms == matrix == recursion  [M<=4]", closed, 1e-9));
        report.checks.push_back(below("matrix == recursion  [M<=20]", routes, 1e-8));
        report.checks.push_back(below("trace identity", trace, 1e-9));
    }
    {
        std::vector<PotentialSpec> specs;
        for (auto v : kVariants) {
            for (double zeta : {0.1, 0.5, 1.0, 2.0, 5.0}) {
                for (int m = 1; m <= 10; ++m) specs.push_back({v, zeta, m});
            }
        }
        std::vector<double> worst(specs.size(), 0.0);
        std::vector<char> failed(specs.size(), 0);
        parallel_for(specs.size(), resolve_threads(options.threads), [&](std::size_t i) {
            try {
                for (const auto& s : compare_routes(specs[i], tol_real).spectra) {
                    for (const auto& level : s.levels) {
                        worst[i] = std::max(worst[i], ode_residual(make_wavefunction(specs[i], level), samples));
                    }
                }
            } catch (const std::exception&) {
                failed[i] = 1;
            }
        });
        Accumulator residual;
        for (std::size_t i = 0; i < specs.size(); ++i) {
            if (failed[i]) residual.ok = false;
            residual.add(worst[i]);
        }
        report.checks.push_back(below("ODE residual, every level  [M<=10]", residual, 1e-8));
    }
    {
        // The residual must react to a wrong energy: shift each level by
        // 1e-3 * max(1, |E|).
        double weakest = std::numeric_limits<double>::infinity();
        for (auto v : kVariants) {
            for (double zeta : {0.25, 1.0, 2.0}) {
                for (int m = 1; m <= 10; ++m) {
                    const PotentialSpec spec{v, zeta, m};
                    for (const auto& level : compute_spectrum(spec, Method::matrix, tol_real).levels) {
                        auto wf = make_wavefunction(spec, level);
                        wf.energy += 1e-3 * std::max(1.0, std::abs(wf.energy));
                        weakest = std::min(weakest, ode_residual(wf, samples));
                    }
                }
            }
        }
        report.checks.push_back({"ODE residual detects E * (1 + 1e-3)", weakest > 1e-5, weakest, 1e-5});
    }
    {
        Accumulator acc;
        std::vector<complex> xs;
        for (int k = 0; k < 64; ++k) xs.emplace_back(-2.0 + 4.0 * k / 63.0);
        for (auto v : kVariants) {
            for (double zeta : {0.0, 0.7, 1.0, 1.3, 2.0}) {
                for (int m = 1; m <= 4; ++m) acc.add(check_symmetry({v, zeta, m}, xs));
            }
        }
        report.checks.push_back(below("potential symmetry (PT / shift+T)", acc, 1e-12));
        const double cross = check_symmetry({Variant::plus, 1.0, 1}, xs, SymmetryTransform::parity_time);
        report.checks.push_back({"plus variant breaks plain PT", cross > 1e-2, cross, 1e-2});
    }
    {
        const auto scan = conjecture_scan(Variant::minus, 12, route_grid, {tol_real, options.threads});
        report.checks.push_back({"minus variant real  [M<=12]", scan.max_rel_imag < tol_real, scan.max_rel_imag, tol_real});
        report.checks.push_back({"symmetrized certificate == direct", scan.max_certificate_deviation < 1e-9,
                                 scan.max_certificate_deviation, 1e-9});
    }
    {
        ThresholdOptions topt;
        topt.tol_real = tol_real;
        const auto t = find_threshold(Variant::plus, 3, topt);
        const double miss = t.zeta_c ? std::abs(*t.zeta_c - 0.5) : std::numeric_limits<double>::infinity();
        report.checks.push_back({"plus M=3 threshold zeta_c = 1/2", miss <= 1e-8, miss, 1e-8});
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace qes
