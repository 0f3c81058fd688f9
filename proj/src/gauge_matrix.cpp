#include "qes/gauge_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qes/errors.hpp"

namespace qes {

namespace {
constexpr complex kI{0.0, 1.0};
}

Eigen::MatrixXcd TridiagonalOperator::dense() const {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) a(n, n) = diag[static_cast<std::size_t>(n)];
    for (int n = 0; n + 1 < dim; ++n) {
        a(n + 1, n) = sup[static_cast<std::size_t>(n)];
        a(n, n + 1) = sub[static_cast<std::size_t>(n)];
    }
    return a;
}

std::vector<complex> TridiagonalOperator::apply(std::span<const complex> v) const {
    if (static_cast<int>(v.size()) != dim) throw std::invalid_argument("TridiagonalOperator::apply: size mismatch");
    std::vector<complex> out(v.size());
    for (int n = 0; n < dim; ++n) {
        const auto i = static_cast<std::size_t>(n);
        out[i] += diag[i] * v[i];
        if (n + 1 < dim) {
            out[i + 1] += sup[i] * v[i];
            out[i] += sub[i] * v[i + 1];
        }
    }
    return out;
}

Sl2Generators sl2_generators(int m) {
    if (m < 1) throw std::invalid_argument("sl2_generators: m must be >= 1");
    Sl2Generators g;
    g.j = 0.5 * (m - 1);
    g.jp = Eigen::MatrixXcd::Zero(m, m);
    g.j0 = Eigen::MatrixXcd::Zero(m, m);
    g.jm = Eigen::MatrixXcd::Zero(m, m);
    for (int n = 0; n < m; ++n) {
        g.j0(n, n) = n - g.j;
        if (n + 1 < m) g.jp(n + 1, n) = n - 2.0 * g.j;
        if (n > 0) g.jm(n - 1, n) = static_cast<double>(n);
    }
    return g;
}

TridiagonalOperator build_operator(const PotentialSpec& spec) {
    validate(spec);
    const auto rc = recursion_coeffs(spec);
    const int m = spec.m;
    const double sign = variant_sign(spec.variant);
    TridiagonalOperator op;
    op.dim = m;
    op.diag.resize(static_cast<std::size_t>(m));
    for (int n = 0; n < m; ++n) op.diag[static_cast<std::size_t>(n)] = rc.b(n);
    for (int n = 0; n + 1 < m; ++n) {
        op.sup.push_back(2.0 * kI * spec.zeta * static_cast<double>(m - 1 - n));
        op.sub.push_back(sign * 2.0 * kI * spec.zeta * static_cast<double>(n + 1));
    }
    return op;
}

Eigen::MatrixXcd sl2_hamiltonian(const PotentialSpec& spec) {
    validate(spec);
    const auto g = sl2_generators(spec.m);
    const double sign = variant_sign(spec.variant);
    const int m = spec.m;
    const double constant = static_cast<double>(m) * m - sign * spec.zeta * spec.zeta;
    return -4.0 * g.j0 * g.j0 - 2.0 * kI * spec.zeta * g.jp + sign * 2.0 * kI * spec.zeta * g.jm +
           constant * Eigen::MatrixXcd::Identity(m, m);
}

TridiagonalOperator build_from_sl2(const PotentialSpec& spec) {
    const Eigen::MatrixXcd h = sl2_hamiltonian(spec);
    const int m = spec.m;
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            if (std::abs(r - c) > 1 && h(r, c) != complex{}) {
                throw std::logic_error("build_from_sl2: entry outside the tridiagonal band");
            }
        }
    }
    TridiagonalOperator op;
    op.dim = m;
    for (int n = 0; n < m; ++n) {
        if (std::abs(h(n, n).imag()) > 0.0) throw std::logic_error("build_from_sl2: non-real diagonal");
        op.diag.push_back(h(n, n).real());
        if (n + 1 < m) {
            op.sup.push_back(h(n + 1, n));
            op.sub.push_back(h(n, n + 1));
        }
    }
    return op;
}

EnergyPolynomial characteristic_polynomial(const TridiagonalOperator& op) {
    std::vector<complex> prev, cur{complex(1.0)};
    for (int n = 0; n < op.dim; ++n) {
        const auto i = static_cast<std::size_t>(n);
        std::vector<complex> next(cur.size() + 1);
        for (std::size_t k = 0; k < cur.size(); ++k) {
            next[k + 1] += cur[k];
            next[k] -= op.diag[i] * cur[k];
        }
        if (n > 0) {
            const complex coupling = op.sup[i - 1] * op.sub[i - 1];
            for (std::size_t k = 0; k < prev.size(); ++k) next[k] -= coupling * prev[k];
        }
        prev = std::move(cur);
        cur = std::move(next);
    }
    return {std::move(cur)};
}

std::vector<std::vector<complex>> null_vectors(const TridiagonalOperator& op, complex energy, double rank_tol) {
    // Diagonal balancing D^-1 A D with equal off-diagonal moduli; without it
    // the small components of phi come out with only normwise accuracy.
    const int m = op.dim;
    std::vector<double> d(static_cast<std::size_t>(m), 1.0);
    for (std::size_t n = 0; n + 1 < d.size(); ++n) {
        const double lo = std::abs(op.sup[n]), hi = std::abs(op.sub[n]);
        d[n + 1] = d[n] * (lo > 0.0 && hi > 0.0 ? std::sqrt(lo / hi) : 1.0);
    }
    Eigen::MatrixXcd shifted = op.dense();
    shifted.diagonal().array() -= energy;
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) shifted(r, c) *= d[static_cast<std::size_t>(c)] / d[static_cast<std::size_t>(r)];
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const Eigen::MatrixXcd& v = svd.matrixV();
    const double cutoff = rank_tol * std::max(sigma(0), 1.0);
    std::vector<std::vector<complex>> out;
    for (int k = m - 1; k >= 0; --k) {
        if (!out.empty() && sigma(k) > cutoff) break;
        std::vector<complex> vec(static_cast<std::size_t>(m));
        for (int r = 0; r < m; ++r) vec[static_cast<std::size_t>(r)] = v(r, k) * d[static_cast<std::size_t>(r)];
        out.push_back(std::move(vec));
    }
    return out;
}

namespace {

// max_n |((A - E) v)_n| / (sum of the moduli of the terms in row n)
double componentwise_residual(const TridiagonalOperator& op, complex energy, const std::vector<complex>& v) {
    const auto image = op.apply(v);
    double worst = 0.0;
    for (std::size_t n = 0; n < v.size(); ++n) {
        double scale = (std::abs(op.diag[n]) + std::abs(energy)) * std::abs(v[n]);
        if (n > 0) scale += std::abs(op.sup[n - 1] * v[n - 1]);
        if (n + 1 < v.size()) scale += std::abs(op.sub[n] * v[n + 1]);
        const double r = std::abs(image[n] - energy * v[n]);
        if (r > 0.0) worst = std::max(worst, scale > 0.0 ? r / scale : std::numeric_limits<double>::infinity());
    }
    return worst;
}

bool unreduced(const TridiagonalOperator& op) {
    for (std::size_t n = 0; n < op.sup.size(); ++n) {
        if (op.sup[n] == complex(0.0) || op.sub[n] == complex(0.0)) return false;
    }
    return true;
}

}  // namespace

std::vector<std::vector<complex>> twisted_null_vectors(const TridiagonalOperator& op, complex energy,
                                                       std::size_t max_count) {
    const auto m = static_cast<std::size_t>(op.dim);
    if (m == 0 || max_count == 0) return {};
    if (!unreduced(op)) throw std::invalid_argument("twisted_null_vectors: operator has a zero off-diagonal");
    double norm = 0.0;
    for (std::size_t n = 0; n < m; ++n) norm = std::max(norm, std::abs(op.diag[n] - energy));
    for (std::size_t n = 0; n + 1 < m; ++n) norm = std::max(norm, std::abs(op.sup[n]) + std::abs(op.sub[n]));
    const double tiny = std::numeric_limits<double>::epsilon() * std::max(norm, 1.0);
    auto guard = [tiny](complex g) { return g == complex(0.0) ? complex(tiny) : g; };

    // Pivots of the top-down and bottom-up factorizations of A - E.
    std::vector<complex> up(m), down(m);
    up[0] = guard(op.diag[0] - energy);
    for (std::size_t n = 1; n < m; ++n) up[n] = guard(op.diag[n] - energy - op.sup[n - 1] * op.sub[n - 1] / up[n - 1]);
    down[m - 1] = guard(op.diag[m - 1] - energy);
    for (std::size_t n = m - 1; n-- > 0;) down[n] = guard(op.diag[n] - energy - op.sub[n] * op.sup[n] / down[n + 1]);

    std::vector<double> gamma(m);
    for (std::size_t k = 0; k < m; ++k) gamma[k] = std::abs(up[k] + down[k] - (op.diag[k] - energy));

    // Twist candidates: local minima of |gamma|, smallest first.
    std::vector<std::size_t> twists;
    for (std::size_t k = 0; k < m; ++k) {
        const bool left = k == 0 || gamma[k] <= gamma[k - 1];
        const bool right = k + 1 == m || gamma[k] <= gamma[k + 1];
        if (left && right) twists.push_back(k);
    }
    std::sort(twists.begin(), twists.end(), [&](std::size_t a, std::size_t b) { return gamma[a] < gamma[b]; });

    std::vector<std::vector<complex>> out;
    for (std::size_t k : twists) {
        std::vector<complex> v(m);
        v[k] = 1.0;
        for (std::size_t n = k; n-- > 0;) v[n] = -op.sub[n] * v[n + 1] / up[n];
        for (std::size_t n = k + 1; n < m; ++n) v[n] = -op.sup[n - 1] * v[n - 1] / down[n];
        if (!out.empty()) {
            if (componentwise_residual(op, energy, v) > 1e-8) continue;
            bool fresh = true;
            for (const auto& w : out) fresh = fresh && !nearly_parallel(w, v);
            if (!fresh) continue;
        }
        out.push_back(std::move(v));
        if (out.size() == max_count) break;
    }
    return out;
}

Spectrum eigen_spectrum(const TridiagonalOperator& op, const PotentialSpec& spec, double tol_real) {
    if (op.dim != spec.m) throw std::invalid_argument("eigen_spectrum: operator dimension differs from M");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(op.dense(), /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw eigensolver_failure("eigen_spectrum: complex QR iteration did not converge (M = " +
                                  std::to_string(op.dim) + ")");
    }
    std::vector<complex> values(solver.eigenvalues().data(), solver.eigenvalues().data() + op.dim);
    std::map<std::size_t, std::vector<complex>> probe;
    auto direction = [&](std::size_t i) -> const std::vector<complex>& {
        auto it = probe.find(i);
        if (it == probe.end()) it = probe.emplace(i, null_vectors(op, values[i]).front()).first;
        return it->second;
    };
    const auto clustered = merge_clusters(values, kCoalesceGap, [&](std::size_t i, std::size_t j) {
        return nearly_parallel(direction(i), direction(j));
    });

    // Levels within kDegenerateGap form a group whose members take distinct
    // vectors while they last, otherwise the single (Jordan) direction. With nonzero off-diagonals the vectors
    // come from twisted factorizations, which are componentwise accurate;
    // the balanced SVD is only normwise accurate and loses the small
    // coefficients of nearly degenerate mirror pairs.
    const bool twisted = unreduced(op);
    std::vector<std::size_t> group(values.size());
    std::map<std::size_t, std::size_t> members;
    for (std::size_t i = 0; i < values.size(); ++i) {
        group[i] = i;
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(values[j] - values[i]) <= kDegenerateGap * std::max(1.0, std::abs(values[i]))) {
                group[i] = group[j];
                break;
            }
        }
        ++members[group[i]];
    }
    std::map<std::size_t, std::size_t> used;
    std::map<std::size_t, std::vector<std::vector<complex>>> shared;
    std::vector<QesLevel> levels;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t rank = used[group[i]]++;
        std::vector<complex> chosen;
        if (twisted) {
            // each member at its own energy; rank > 0 asks for another twist
            const auto vectors = twisted_null_vectors(op, values[i], rank + 1);
            chosen = vectors[std::min(rank, vectors.size() - 1)];
        } else {
            auto& vectors = shared[group[i]];
            if (vectors.empty()) vectors = null_vectors(op, values[group[i]]);
            chosen = vectors[std::min(rank, vectors.size() - 1)];
        }
        levels.push_back({values[i], normalize_phi(std::move(chosen)), Reality::real, {}, clustered[i]});
    }
    return finalize_spectrum(spec, std::move(levels), Method::matrix, tol_real);
}

SymmetricTridiagonal symmetrize_minus(const TridiagonalOperator& op) {
    SymmetricTridiagonal t;
    t.diag = op.diag;
    for (std::size_t n = 0; n < op.sup.size(); ++n) {
        const complex product = op.sup[n] * op.sub[n];
        if (product.real() < 0.0) {
            throw variant_mismatch(
                "symmetrize_minus: off-diagonal product is negative (plus variant); no real symmetric form");
        }
        t.offdiag.push_back(std::sqrt(std::abs(product)));
    }
    return t;
}

std::vector<double> symmetric_eigenvalues(const SymmetricTridiagonal& t) {
    const auto n = static_cast<Eigen::Index>(t.diag.size());
    if (n == 0) return {};
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(t.diag.data(), n);
    Eigen::VectorXd e(std::max<Eigen::Index>(n - 1, 0));
    for (Eigen::Index k = 0; k + 1 < n; ++k) e(k) = t.offdiag[static_cast<std::size_t>(k)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw eigensolver_failure("symmetric_eigenvalues: no convergence");
    return {solver.eigenvalues().data(), solver.eigenvalues().data() + n};
}

}  // namespace qes
