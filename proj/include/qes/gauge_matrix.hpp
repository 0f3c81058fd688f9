#pragma once

// The gauged Hamiltonian H_g on the monomial basis {1, z, ..., z^{M-1}}.
//
// Orientation: column n holds the image of z^n, so
//   H_g z^n = sub[n-1] z^{n-1} + diag[n] z^n + sup[n] z^{n+1}
// with diag[n] = b_n, sup[n] = 2 i zeta (M-1-n), sub[n] = +-2 i zeta (n+1).
// sup[M-1] would be 2 i zeta * 0, which is why span{z^0..z^{M-1}} is
// invariant. The names follow matrix position: sup[n] is A[n+1][n] (below
// the diagonal) and sub[n] is A[n][n+1].

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qes/model.hpp"
#include "qes/recursion.hpp"

namespace qes {

struct TridiagonalOperator {
    int dim = 0;
    std::vector<double> diag;   // size dim
    std::vector<complex> sup;   // size dim-1, A[n+1][n]
    std::vector<complex> sub;   // size dim-1, A[n][n+1]

    Eigen::MatrixXcd dense() const;
    std::vector<complex> apply(std::span<const complex> v) const;
};

// Finite sl(2) representation of spin j = (M-1)/2 on monomials:
//   J+ z^n = (n - 2j) z^{n+1},  J0 z^n = (n - j) z^n,  J- z^n = n z^{n-1}.
//   With these, [J0, J+-] = +-J+- and [J+, J-] = -2 J0.
struct Sl2Generators {
    double j = 0.0;
    Eigen::MatrixXcd jp, j0, jm;
};

Sl2Generators sl2_generators(int m);

TridiagonalOperator build_operator(const PotentialSpec& spec);

// H_g = -4 J0^2 - 2 i zeta J+ +- 2 i zeta J- + M^2 -+ zeta^2, assembled
// densely from the generators.
Eigen::MatrixXcd sl2_hamiltonian(const PotentialSpec& spec);

// Bands of sl2_hamiltonian. Throws std::logic_error if the assembled matrix
// has entries outside the three bands.
TridiagonalOperator build_from_sl2(const PotentialSpec& spec);

// det(E I - A) from the tridiagonal determinant recurrence
//   D_{n+1} = (E - A[n][n]) D_n - A[n][n-1] A[n-1][n] D_{n-1}
// using the stored band entries only.
EnergyPolynomial characteristic_polynomial(const TridiagonalOperator& op);

// Complex dense eigensolve (Hessenberg + shifted QR). Eigenvalue clusters
// whose eigenvectors coalesce are merged to their mean and flagged
// degenerate. Eigenvectors come from twisted_null_vectors when all
// off-diagonals are nonzero and from null_vectors otherwise (zeta = 0); a
// defective cluster shares a single direction.
Spectrum eigen_spectrum(const TridiagonalOperator& op, const PotentialSpec& spec,
                        double tol_real = kDefaultTolReal);

// Right null vectors of (A - E I), computed on the diagonally balanced matrix:
// singular vectors whose singular value is
// below rank_tol * sigma_max. Always returns at least one vector.
std::vector<std::vector<complex>> null_vectors(const TridiagonalOperator& op, complex energy,
                                               double rank_tol = 1e-9);

// Null vectors of (A - E I) from twisted factorizations: the top-down and
// bottom-up LU pivots meet at a twist index k, v_k = 1, and the rest follows
// by the two one-sided recurrences. Each component is then computed relative
// to its neighbours, so coefficients spanning many decades stay accurate.
// Twists are tried at local minima of |gamma_k| (smallest first); beyond the
// first, a vector is kept only if its componentwise residual is below 1e-8
// and it is not parallel to one already returned. Requires nonzero
// off-diagonals (throws std::invalid_argument otherwise).
std::vector<std::vector<complex>> twisted_null_vectors(const TridiagonalOperator& op, complex energy,
                                                       std::size_t max_count = 1);

struct SymmetricTridiagonal {
    std::vector<double> diag;
    std::vector<double> offdiag;
};

// For the minus variant sup[n] * sub[n] = 4 (n+1)(M-1-n) zeta^2 > 0, so the
// diagonal similarity d_{n+1}/d_n = sqrt(|sub[n]/sup[n]|) with the phases
// absorbed turns the operator into a real symmetric Jacobi matrix with
// off-diagonal sqrt(sup[n] sub[n]). Throws variant_mismatch when a product
// is negative (plus variant).
SymmetricTridiagonal symmetrize_minus(const TridiagonalOperator& op);

// Ascending eigenvalues of a real symmetric tridiagonal matrix.
std::vector<double> symmetric_eigenvalues(const SymmetricTridiagonal& t);

}  // namespace qes
