// Energy estimation under a rounding promise.
//
// Pointer registers hold integers in little-to-big order of the basis index,
// so |x> of a 2^r-dimensional register is basis vector x.  The system factor
// always comes first: system (x) pointer [(x) pointer].

#pragma once

#include "lsz/davies.hpp"

namespace lsz {

struct RoundingPromise {
    int r = 1;
    double alpha = 0.5;

    /// Throws unless r >= 1 and alpha in (0, 1).
    void validate() const;
};

struct PromiseVerdict {
    bool holds = false;
    double minDistance = 0.0;       // min over k, x of |e_k - x / 2^r|
    double required = 0.0;          // alpha / 2^{r+1}
    std::size_t offendingIndex = 0;  // eigenvalue index attaining minDistance
};

/// Throws std::invalid_argument if an eigenvalue lies outside [0, 1).
PromiseVerdict check_rounding_promise(const SpectralDecomposition& h, const RoundingPromise& p);

struct RoundedHamiltonian {
    SpectralDecomposition original;
    int r = 1;
    /// floor(e_k 2^r) / 2^r; eigenvalues sharing a floor share one projector.
    SpectralDecomposition rounded;
    /// floor(e_k 2^r) for every eigenvalue of `original`.
    std::vector<long long> pointers;
};

RoundedHamiltonian rounded_hamiltonian(const SpectralDecomposition& h, int r);

/// sum_k P_k (x) A(floor(e_k 2^r)) where A(x)|z> = |z + x mod 2^r>.
Matrix ideal_estimation_unitary(const SpectralDecomposition& h, int r);

/// Register sizes of the Bohr estimation circuit: system, A (2^{r+1}), B (2^r).
struct BohrRegisters {
    Index system = 0;
    Index a = 0;
    Index b = 0;
    Index total() const { return system * a * b; }
};
BohrRegisters bohr_registers(Index d, int r);

/// V applied to the columns of `input` (rows indexed system (x) A (x) B):
///   U1 writes floor(e_l 2^r) into A, S acts on the system, U2 writes
///   floor(e_k 2^r) into B, A <- B - A mod 2^{r+1}, U2 is undone.
Matrix apply_bohr_circuit(const SpectralDecomposition& h, const Matrix& s, int r, const Matrix& input);

/// Dense V; the dimension d 2^{2r+1} limits this to small r.
Matrix bohr_estimation_unitary(const SpectralDecomposition& h, const Matrix& s, int r);

/// V restricted to inputs with both pointers at |0> (a d 2^{2r+1} x d isometry).
Matrix bohr_estimation_isometry(const SpectralDecomposition& h, const Matrix& s, int r);

/// sum_w S(w) (x) |w 2^r mod 2^{r+1}> (x) |0> over the Bohr grid of `rounded`,
/// whose eigenvalues must be multiples of 2^{-r}.
Matrix ideal_bohr_estimation(const SpectralDecomposition& rounded, const Matrix& s, int r);

/// Tr(sigma^{1/2} sigmaTilde^{1/2}), the overlap of the purified fixed points.
double purification_overlap(const ReferenceState& sigma, const ReferenceState& sigmaTilde);

/// Closed form of the Gibbs-state overlap for H and its rounding at inverse
/// temperature beta: sum_k e^{-beta (e_k + e~_k)/2} rank_k / sqrt(Z Z~).
double gibbs_overlap_formula(const RoundedHamiltonian& rounded, double beta);

/// 1 - beta / 2^r
double overlap_lower_bound(double beta, int r);

/// alpha^{-1} ln(delta^{-1}) (2^r + log2(alpha^{-1})), constants dropped.
double query_cost_estimate(const RoundingPromise& p, double delta);

}  // namespace lsz
