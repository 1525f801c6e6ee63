#include "lsz/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lsz {

Lindbladian::Lindbladian(std::vector<Matrix> ops, Index d) : jumpOps(std::move(ops)), dimension(d)
{
    for (const auto& op : jumpOps) {
        if (op.rows() != d || op.cols() != d) {
            throw std::invalid_argument("Lindbladian: every jump operator must be d x d");
        }
    }
}

namespace {

void require_dim(const Lindbladian& l, const Matrix& a, const char* who)
{
    if (a.rows() != l.dimension || a.cols() != l.dimension) {
        std::ostringstream msg;
        msg << who << ": expected a " << l.dimension << "x" << l.dimension << " matrix, got " << a.rows() << "x"
            << a.cols();
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

Matrix apply_schrodinger(const Lindbladian& l, const Matrix& rho)
{
    require_dim(l, rho, "apply_schrodinger");
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto& op : l.jumpOps) {
        const Matrix dd = op.adjoint() * op;
        out += op * rho * op.adjoint() - 0.5 * (dd * rho + rho * dd);
    }
    return out;
}

Matrix apply_heisenberg(const Lindbladian& l, const Matrix& o)
{
    require_dim(l, o, "apply_heisenberg");
    Matrix out = Matrix::Zero(o.rows(), o.cols());
    for (const auto& op : l.jumpOps) {
        const Matrix dd = op.adjoint() * op;
        out += op.adjoint() * o * op - 0.5 * (dd * o + o * dd);
    }
    return out;
}

Matrix lindblad_matrix(const Lindbladian& l)
{
    const Index d = l.dimension;
    const Matrix id = identity(d);
    Matrix out = Matrix::Zero(d * d, d * d);
    for (const auto& op : l.jumpOps) {
        const Matrix dd = op.adjoint() * op;
        out += kron(op, op.conjugate()) - 0.5 * (kron(dd, id) + kron(id, dd.transpose()));
    }
    return out;
}

double check_detailed_balance(const Lindbladian& l, const ReferenceState& ref, const WeightFunction& f)
{
    if (l.dimension != ref.dimension()) throw std::invalid_argument("check_detailed_balance: dimension mismatch");
    const Matrix lhat = lindblad_matrix(l);
    const Matrix omega = omega_f_matrix(ref, f, OmegaPower::Plus);
    // The HS adjoint L* is represented by Lhat^dagger in the vec basis.
    return operator_norm(omega * lhat.adjoint() - lhat * omega);
}

double fixed_point_residual(const Lindbladian& l, const Matrix& sigma)
{
    return operator_norm(apply_schrodinger(l, sigma));
}

double spectral_gap(const Matrix& m, double topEigenvalue)
{
    if (!is_hermitian(m)) {
        throw NonHermitianError("spectral_gap: matrix is not hermitian", hermiticity_residual(m));
    }
    if (m.rows() < 2) throw std::invalid_argument("spectral_gap: need at least two eigenvalues");
    auto values = hermitian_eigenvalues(m);
    std::sort(values.rbegin(), values.rend());
    if (std::abs(values[0] - topEigenvalue) > 1e-9) {
        std::ostringstream msg;
        msg << "spectral_gap: " << topEigenvalue << " is not the top eigenvalue (largest is " << values[0] << ")";
        throw std::invalid_argument(msg.str());
    }
    return topEigenvalue - values[1];
}

std::size_t CanonicalTerm::negation(std::size_t i, double tol) const
{
    const double target = -jumps.at(i).omega;
    for (std::size_t j = 0; j < jumps.size(); ++j) {
        if (std::abs(jumps[j].omega - target) <= tol) return j;
    }
    std::ostringstream msg;
    msg << "canonical term: frequency set not closed under negation (missing " << target << ")";
    throw std::invalid_argument(msg.str());
}

bool CanonicalCheck::ok() const
{
    return negationClosed && ratesNonnegative && weightsInRange && weightSumResidual <= 1e-10 &&
           adjointPairResidual <= 1e-10 && modularResidual <= 1e-9 && kmsResidual <= 1e-10;
}

Lindbladian CanonicalLindbladian::lindbladian() const
{
    std::vector<Matrix> ops;
    for (const auto& term : terms) {
        for (const auto& jump : term.jumps) {
            const double coeff = term.weight * jump.rate;
            if (coeff > 0.0) ops.push_back(std::sqrt(coeff) * jump.x);
        }
    }
    return Lindbladian(std::move(ops), reference.dimension());
}

CanonicalCheck CanonicalLindbladian::check() const
{
    CanonicalCheck out;
    double weightSum = 0.0;
    const double tol = frequencyHamiltonian.groupingTolerance;
    for (const auto& term : terms) {
        weightSum += term.weight;
        if (!(term.weight >= 0.0 && term.weight <= 1.0)) out.weightsInRange = false;
        for (std::size_t i = 0; i < term.jumps.size(); ++i) {
            const auto& jump = term.jumps[i];
            if (!(jump.rate >= 0.0)) out.ratesNonnegative = false;
            const double theta = frequencyScale * jump.omega;
            const Matrix delta = modular_apply(reference, jump.x);
            out.modularResidual =
                std::max(out.modularResidual, operator_norm(delta - std::exp(-theta) * jump.x));
            std::size_t j = 0;
            try {
                j = term.negation(i, tol);
            } catch (const std::invalid_argument&) {
                out.negationClosed = false;
                continue;
            }
            const auto& partner = term.jumps[j];
            out.adjointPairResidual =
                std::max(out.adjointPairResidual, operator_norm(partner.x - jump.x.adjoint()));
            const double lhs = jump.rate;
            const double rhs = std::exp(-theta) * partner.rate;
            const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
            out.kmsResidual = std::max(out.kmsResidual, std::abs(lhs - rhs) / scale);
        }
    }
    out.weightSumResidual = std::abs(weightSum - 1.0);
    return out;
}

void CanonicalLindbladian::validate() const
{
    const auto c = check();
    std::ostringstream msg;
    if (!c.negationClosed) msg << "frequency set not closed under negation; ";
    if (!c.ratesNonnegative) msg << "negative filter rate; ";
    if (!c.weightsInRange) msg << "weight outside [0, 1]; ";
    if (c.weightSumResidual > 1e-10) msg << "weights sum to 1 +/- " << c.weightSumResidual << "; ";
    if (c.adjointPairResidual > 1e-10) msg << "X(-w) != X(w)^dagger (residual " << c.adjointPairResidual << "); ";
    if (c.modularResidual > 1e-9) msg << "X(w) not a modular eigenvector (residual " << c.modularResidual << "); ";
    if (c.kmsResidual > 1e-10) msg << "rates violate G(w) = e^{-w} G(-w) (residual " << c.kmsResidual << "); ";
    if (!msg.str().empty()) throw std::invalid_argument("canonical Lindbladian: " + msg.str());
}

double QuantumChannel::completeness_residual() const
{
    const Index d = dimension();
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& a : krausOps) sum += a.adjoint() * a;
    return operator_norm(sum - identity(d));
}

Matrix channel_matrix(const QuantumChannel& t)
{
    const Index d = t.dimension();
    Matrix out = Matrix::Zero(d * d, d * d);
    for (const auto& a : t.krausOps) out += kron(a, a.conjugate());
    return out;
}

Lindbladian channel_to_lindbladian(const QuantumChannel& t)
{
    if (t.krausOps.empty()) throw std::invalid_argument("channel_to_lindbladian: no Kraus operators");
    const double residual = t.completeness_residual();
    if (residual > 1e-10) {
        std::ostringstream msg;
        msg << "channel_to_lindbladian: Kraus completeness violated (||sum A^dagger A - I|| = " << residual << ")";
        throw std::invalid_argument(msg.str());
    }
    return Lindbladian(t.krausOps, t.dimension());
}

}  // namespace lsz
