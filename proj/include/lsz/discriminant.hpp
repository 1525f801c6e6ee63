// The quantum discriminant Q = I + Khat of a detailed-balanced Lindbladian,
// in the vec basis of matrix_core.hpp.

#pragma once

#include "lsz/lindblad.hpp"

namespace lsz {

struct Discriminant {
    Matrix khat;                 // d^2 x d^2, hermitian
    Matrix q;                    // I + khat
    Vector purifiedFixedPoint;   // vec(sigma^{1/2}), unit norm
};

/// Khat of one canonical term (unweighted):
///   sum_w sqrt(G(w) G(-w)) X(w) (x) conj(X(w))
///         - G(w)/2 (X^dag X (x) I + I (x) (X^dag X)^T)
Matrix term_khat(const CanonicalTerm& term, double tol = kDefaultGroupingTolerance);

/// Closed-form discriminant; validates the canonical invariants first.
Discriminant discriminant_matrix(const CanonicalLindbladian& cl);

/// Omega^{-1/2} o L o Omega^{1/2} in vec form.
Matrix similarity_khat(const Lindbladian& l, const ReferenceState& ref, const WeightFunction& f);

/// ||Khat - similarity_khat(L, ref, f)||.
double verify_similarity(const Lindbladian& l, const ReferenceState& ref, const WeightFunction& f,
                         const Discriminant& disc);

/// vec(sigma^{1/2}) = (sigma^{1/2} (x) I)|Omega>.
Vector purified_fixed_point(const ReferenceState& ref);

/// Eigenvalues within `tol` of `value` (hermitian m).
Index eigenvalue_multiplicity(const Matrix& m, double value, double tol = 1e-8);

}  // namespace lsz
