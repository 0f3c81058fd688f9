#pragma once

// Domain types for the two QES hyperbolic potentials
//
//   V(+)(x) = -(zeta cosh 2x - i M)^2      (complex-shift + T invariant)
//   V(-)(x) = -(zeta sinh 2x - i M)^2      (PT invariant)
//
// and the spectrum containers shared by every solution route. Wherever a
// formula carries a stacked sign (+- or -+) the upper sign belongs to the
// plus variant; variant_sign() returns it.

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qes {

using complex = std::complex<double>;

inline constexpr double kDefaultTolReal = 1e-9;

enum class Variant { plus, minus };

enum class Reality { real, complex };

enum class Method { closed_form, matrix, recursion };

struct PotentialSpec {
    Variant variant = Variant::minus;
    double zeta = 0.0;
    int m = 1;
};

// Throws std::invalid_argument when m < 1 or zeta is not finite.
void validate(const PotentialSpec& spec);

// +1 for plus, -1 for minus.
constexpr double variant_sign(Variant v) noexcept { return v == Variant::plus ? 1.0 : -1.0; }

std::string_view to_string(Variant v) noexcept;
std::string_view to_string(Reality r) noexcept;
std::string_view to_string(Method m) noexcept;
Variant parse_variant(std::string_view text);
Method parse_method(std::string_view text);

struct QesLevel {
    complex energy;
    // Coefficients c_0..c_{M-1} of phi(z), highest nonzero coefficient == 1.
    std::vector<complex> phi_coeffs;
    Reality reality = Reality::real;
    // Index (within the owning Spectrum) of the complex-conjugate partner.
    std::optional<std::size_t> pair_id;
    // Set when the level belongs to an eigenvalue cluster with gap below
    // kDegenerateGap; eigenvectors may coalesce there (exceptional point).
    bool degenerate = false;
};

struct Spectrum {
    PotentialSpec spec;
    std::vector<QesLevel> levels;
    Method method = Method::matrix;
};

inline constexpr double kDegenerateGap = 1e-7;

// |Im E| <= tol_real * max(1, |E|)
Reality classify(complex energy, double tol_real = kDefaultTolReal);

// Scales phi so that its highest nonzero coefficient equals 1. No cutoff:
// the physical coefficients legitimately span many decades (|2 zeta|^-n).
// Throws std::invalid_argument on the zero vector.
std::vector<complex> normalize_phi(std::vector<complex> coeffs);

// Sorts levels by (Re E, Im E), classifies reality and links conjugate
// partners. Used by every route so outputs line up level by level.
Spectrum finalize_spectrum(const PotentialSpec& spec, std::vector<QesLevel> levels, Method method,
                           double tol_real = kDefaultTolReal);

// Largest |Im E| / max(1, |E|) over the spectrum.
double max_relative_imag(const Spectrum& s);

// Greedy multiset distance between two eigenvalue lists of equal length:
// repeatedly pairs the closest remaining values and returns the largest
// paired distance. Infinity when the sizes differ.
double multiset_distance(std::span<const complex> a, std::span<const complex> b);
double multiset_distance(const Spectrum& a, const Spectrum& b);

std::vector<complex> energies(const Spectrum& s);

// Values i, j closer than gap * max(1, |E|) for which coalesced(i, j) holds
// (always, when no predicate is given) are replaced by their cluster mean.
// The mean is well conditioned at an exceptional point, where the members
// carry O(sqrt(eps)) errors; genuinely distinct close levels must not be
// merged, hence the eigenvector test. Returns per index whether the value
// was merged or lies within kDegenerateGap of another value.
using CoalescedFn = std::function<bool(std::size_t, std::size_t)>;
std::vector<bool> merge_clusters(std::vector<complex>& values, double gap = kDegenerateGap,
                                 const CoalescedFn& coalesced = {});

// Candidate gap for exceptional-point merging on computed spectra.
inline constexpr double kCoalesceGap = 1e-5;

// |<u, v>| / (|u| |v|) > 1 - 1e-6
bool nearly_parallel(std::span<const complex> u, std::span<const complex> v);

complex eval_potential(const PotentialSpec& spec, complex x);

// Antilinear symmetry maps of the two families.
//   parity_time:  (PT V)(x) = conj(V(-conj x))
//   shift_time:   (ST V)(x) = conj(V(conj(i pi/2 - x)))
enum class SymmetryTransform { parity_time, shift_time };

// The transform under which the variant's potential is invariant.
constexpr SymmetryTransform natural_transform(Variant v) noexcept {
    return v == Variant::minus ? SymmetryTransform::parity_time : SymmetryTransform::shift_time;
}

// max |T V(x) - V(x)| over the samples; uses natural_transform(spec.variant).
double check_symmetry(const PotentialSpec& spec, std::span<const complex> x_samples);
double check_symmetry(const PotentialSpec& spec, std::span<const complex> x_samples,
                      SymmetryTransform transform);

}  // namespace qes
