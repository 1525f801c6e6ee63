#include "lsz/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lsz/discriminant.hpp"

namespace lsz {

Matrix assemble_X(const CanonicalTerm& term)
{
    if (term.jumps.empty()) throw std::invalid_argument("assemble_X: term has no jumps");
    Matrix x = Matrix::Zero(term.jumps.front().x.rows(), term.jumps.front().x.cols());
    for (const auto& jump : term.jumps) x += jump.x;
    const double norm = operator_norm(x);
    if (norm > 1.0 + 1e-10) {
        std::ostringstream msg;
        msg << "assemble_X: ||X|| = " << norm << " exceeds 1; rescale the term (move the factor into its rates)";
        throw std::invalid_argument(msg.str());
    }
    return x;
}

Matrix projector_lambda(const SpectralDecomposition& h, double theta, const Matrix& a)
{
    const BohrGrid grid = bohr_grid(h);
    const std::size_t i = grid.index_of(theta, std::max(h.groupingTolerance, 1e-9));
    Matrix out = Matrix::Zero(a.rows(), a.cols());
    for (const auto& [k, l] : grid.indexSets[i]) out += h.projectors[k] * a * h.projectors[l];
    return out;
}

Matrix projector_lambda(const ReferenceState& ref, double theta, const Matrix& a)
{
    return projector_lambda(ref.h_decomposition(), theta, a);
}

Matrix ReflectionBlockEncoding::top_left() const
{
    const Index d = system_dimension();
    return s.topLeftCorner(d, d);
}

double ReflectionBlockEncoding::reflection_residual() const
{
    return operator_norm(s * s - identity(s.rows()));
}

double ReflectionBlockEncoding::hermiticity() const { return hermiticity_residual(s); }

ReflectionBlockEncoding reflection_block_encoding(const Matrix& x)
{
    const double herm = hermiticity_residual(x);
    if (herm > 1e-10) throw NonHermitianError("reflection_block_encoding: X is not hermitian", herm);
    const Matrix xh = 0.5 * (x + x.adjoint());
    const double norm = operator_norm(xh);
    if (norm > 1.0 + 1e-10) {
        std::ostringstream msg;
        msg << "reflection_block_encoding: ||X|| = " << norm << " exceeds 1";
        throw std::invalid_argument(msg.str());
    }
    const Index d = x.rows();
    // 1 - v^2 at roundoff level is snapped to 0 so that unitary X gives an exactly vanishing off-diagonal block.
    const Matrix complement = matfunc(eig_hermitian(xh), [](double v) {
        const double c = 1.0 - v * v;
        return c <= 1e-13 ? 0.0 : std::sqrt(c);
    });
    ReflectionBlockEncoding enc;
    enc.x = x;
    enc.s.resize(2 * d, 2 * d);
    enc.s << xh, complement, complement, -xh;
    return enc;
}

std::size_t ExtendedJumps::negation(std::size_t i) const
{
    const std::size_t n = grid.size();
    return (i / n) * n + grid.negation(i % n);
}

double ExtendedJumps::adjoint_residual() const
{
    double worst = 0.0;
    for (std::size_t i = 0; i < jumps.size(); ++i) {
        worst = std::max(worst, operator_norm(jumps[negation(i)] - jumps[i].adjoint()));
    }
    return worst;
}

double ExtendedJumps::completeness_residual() const
{
    Matrix sum = Matrix::Zero(jumps.front().rows(), jumps.front().cols());
    for (const auto& j : jumps) sum += j.adjoint() * j;
    return operator_norm(sum - identity(sum.rows()));
}

ExtendedJumps extended_jump_operators(const ReflectionBlockEncoding& enc, const SpectralDecomposition& h)
{
    const Index d = enc.system_dimension();
    if (h.dimension() != d) throw std::invalid_argument("extended_jump_operators: dimension mismatch");

    // Frequency Hamiltonian lifted to ancilla (x) system.
    std::vector<Matrix> lifted;
    for (const auto& p : h.projectors) lifted.push_back(kron(identity(2), p));
    SpectralDecomposition big{h.eigenvalues, lifted, h.groupingTolerance};

    ExtendedJumps out;
    out.grid = bohr_grid(h);
    const auto sTheta = jump_operators(big, out.grid, enc.s);

    Matrix p0 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    Matrix p1 = Matrix::Zero(2, 2);
    p1(1, 1) = 1.0;
    const Matrix anc0 = kron(p0, identity(d));
    const Matrix anc1 = kron(p1, identity(d));

    out.jumps.resize(3 * out.grid.size());
    for (std::size_t i = 0; i < out.grid.size(); ++i) {
        const Matrix& st = sTheta[i];
        out.jumps[out.index(0, i)] = anc0 * st * anc0;
        out.jumps[out.index(1, i)] = anc0 * st * anc1 + anc1 * st * anc0;
        out.jumps[out.index(2, i)] = anc1 * st * anc1;
    }
    return out;
}

ReductionResult reduce_to_davies(const CanonicalLindbladian& cl, CombineMode mode)
{
    const Discriminant direct = discriminant_matrix(cl);
    const SpectralDecomposition& h = cl.frequencyHamiltonian;
    const Index d = cl.reference.dimension();
    const double tol = std::max(h.groupingTolerance, 1e-9);

    ReductionReport report;
    report.systemDim = d;
    report.enlargedDim = 2 * d;
    report.terms = cl.terms.size();

    std::vector<Embedding> parts;
    std::vector<double> weights;
    for (const auto& term : cl.terms) {
        const Matrix x = assemble_X(term);
        report.maxXNorm = std::max(report.maxXNorm, operator_norm(x));
        const ReflectionBlockEncoding enc = reflection_block_encoding(x);
        report.blockEncodingResidual = std::max(report.blockEncodingResidual, operator_norm(enc.top_left() - x));
        report.reflectionResidual = std::max(report.reflectionResidual, enc.reflection_residual());

        const ExtendedJumps ext = extended_jump_operators(enc, h);
        report.extendedFrequencies = static_cast<Index>(ext.size());
        report.extendedAdjointResidual = std::max(report.extendedAdjointResidual, ext.adjoint_residual());
        report.extendedCompletenessResidual = std::max(report.extendedCompletenessResidual, ext.completeness_residual());

        // G(0, theta) = G(theta); the c = 1, 2 sectors get rate zero.
        std::vector<double> rates(ext.size(), 0.0);
        std::vector<bool> present(ext.grid.size(), false);
        for (const auto& jump : term.jumps) {
            const std::size_t i = ext.grid.index_of(jump.omega, tol);
            rates[ext.index(0, i)] = jump.rate;
            present[i] = true;
            report.assembleResidual = std::max(report.assembleResidual, operator_norm(projector_lambda(h, jump.omega, x) - jump.x));
        }
        for (std::size_t i = 0; i < ext.grid.size(); ++i) {
            if (!present[i]) {
                report.assembleResidual = std::max(report.assembleResidual, operator_norm(projector_lambda(h, ext.grid.frequencies[i], x)));
            }
        }

        JumpFamily family;
        family.dim = 2 * d;
        family.jumps = ext.jumps;
        family.rates = rates;
        for (std::size_t i = 0; i < ext.size(); ++i) {
            family.negation.push_back(ext.negation(i));
            std::ostringstream label;
            label << "(" << i / ext.grid.size() << "," << ext.grid.frequencies[i % ext.grid.size()] << ")";
            family.labels.push_back(label.str());
        }
        parts.push_back(build_isometry_single(family));
        weights.push_back(term.weight);
    }

    Embedding combined = combine_couplings(parts, weights, mode);
    const WalkEmbedding big(combined);
    report.isometryResidual = big.isometry_residual();
    report.walkDim = big.dimension();
    report.scale = combine_scale(mode, cl.terms.size());

    // Inputs with both ancillas at |0>: enlarged indices i, j < d.
    const Index dd = 2 * d;
    Matrix restricted(combined.t.rows(), d * d);
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) restricted.col(i * d + j) = combined.t.col(i * dd + j);
    }
    combined.t = std::move(restricted);
    WalkEmbedding walk(std::move(combined));
    Matrix restrictedQ = walk.encoded_block();
    report.restrictedQResidual = operator_norm(restrictedQ - report.scale * direct.q);
    return {report, std::move(walk), std::move(restrictedQ)};
}

}  // namespace lsz
