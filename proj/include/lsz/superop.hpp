// Superoperators defined relative to a full-rank reference state sigma:
// the modular operator, the weighted inner products <A,B>_f and the
// positive operator Omega_sigma^f = f(Delta_sigma) o R_sigma.

#pragma once

#include <functional>
#include <string>

#include "lsz/matrix_core.hpp"

namespace lsz {

/// Weight f : (0, inf) -> (0, inf) selecting an inner product.
/// constant_one() and power(1) are the two GNS orderings, sqrt() is KMS.
class WeightFunction {
public:
    enum class Kind { ConstantOne, Power, Sqrt, Custom };

    static WeightFunction constant_one();
    static WeightFunction power(double s);
    static WeightFunction sqrt();
    static WeightFunction custom(std::function<double(double)> fn, std::string name);

    double operator()(double t) const;
    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }

private:
    WeightFunction(Kind kind, double s, std::function<double(double)> fn, std::string name);

    Kind kind_;
    double s_;
    std::function<double(double)> fn_;
    std::string name_;
};

/// The three weights exercised throughout the test suite: f = 1, sqrt(t), t^0.3.
std::vector<WeightFunction> pinned_weight_functions();

/// Full-rank density matrix together with its eigendata and h = -ln(sigma).
class ReferenceState {
public:
    static constexpr double kFullRankThreshold = 1e-12;

    /// Throws std::invalid_argument if sigma is not a full-rank density matrix.
    static ReferenceState from_density(const Matrix& sigma,
                                       double groupingTolerance = kDefaultGroupingTolerance);

    const Matrix& sigma() const { return sigma_; }
    const Matrix& sigma_inverse() const { return sigmaInverse_; }
    /// Eigenvalues p_k with projectors P_k.
    const SpectralDecomposition& decomposition() const { return decomposition_; }
    const Matrix& h() const { return h_; }
    /// Energies eps_k = -ln p_k with the same projectors (ascending).
    const SpectralDecomposition& h_decomposition() const { return hDecomposition_; }
    Index dimension() const { return sigma_.rows(); }
    /// sum_k e^{-eps_k} rank(P_k); equals 1 for a normalized state.
    double partition_function() const;

private:
    ReferenceState() = default;

    Matrix sigma_;
    Matrix sigmaInverse_;
    SpectralDecomposition decomposition_;
    Matrix h_;
    SpectralDecomposition hDecomposition_;
};

Matrix modular_apply(const ReferenceState& ref, const Matrix& a);

enum class OmegaPower { Plus, Minus, PlusHalf, MinusHalf };

/// [Omega_sigma^f]^power applied as the double sum over eigenprojector pairs:
///   Omega A = sum_{k,l} f(p_k / p_l) p_l P_k A P_l
Matrix omega_f_apply(const ReferenceState& ref, const WeightFunction& f, OmegaPower power,
                     const Matrix& a);

/// d^2 x d^2 materialization of the above; used for cross-checks.
Matrix omega_f_matrix(const ReferenceState& ref, const WeightFunction& f, OmegaPower power);

/// <A, B>_f = Tr(A^dagger Omega_sigma^f B).
Complex inner_f(const ReferenceState& ref, const WeightFunction& f, const Matrix& a, const Matrix& b);

/// Hilbert-Schmidt inner product Tr(A^dagger B).
Complex hs_inner(const Matrix& a, const Matrix& b);

}  // namespace lsz
