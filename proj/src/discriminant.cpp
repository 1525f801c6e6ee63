#include "lsz/discriminant.hpp"

#include <cmath>

namespace lsz {

Matrix term_khat(const CanonicalTerm& term, double tol)
{
    if (term.jumps.empty()) throw std::invalid_argument("term_khat: term has no jumps");
    const Index d = term.jumps.front().x.rows();
    const Matrix id = identity(d);
    Matrix out = Matrix::Zero(d * d, d * d);
    for (std::size_t i = 0; i < term.jumps.size(); ++i) {
        const auto& jump = term.jumps[i];
        const double partnerRate = term.jumps[term.negation(i, tol)].rate;
        const Matrix dd = jump.x.adjoint() * jump.x;
        out += std::sqrt(jump.rate * partnerRate) * kron(jump.x, jump.x.conjugate());
        out -= 0.5 * jump.rate * (kron(dd, id) + kron(id, dd.transpose()));
    }
    return out;
}

Discriminant discriminant_matrix(const CanonicalLindbladian& cl)
{
    cl.validate();
    const Index d = cl.reference.dimension();
    Discriminant out;
    out.khat = Matrix::Zero(d * d, d * d);
    for (const auto& term : cl.terms) {
        out.khat += term.weight * term_khat(term, cl.frequencyHamiltonian.groupingTolerance);
    }
    out.q = identity(d * d) + out.khat;
    out.purifiedFixedPoint = purified_fixed_point(cl.reference);
    return out;
}

Matrix similarity_khat(const Lindbladian& l, const ReferenceState& ref, const WeightFunction& f)
{
    const Matrix minusHalf = omega_f_matrix(ref, f, OmegaPower::MinusHalf);
    const Matrix plusHalf = omega_f_matrix(ref, f, OmegaPower::PlusHalf);
    return minusHalf * lindblad_matrix(l) * plusHalf;
}

double verify_similarity(const Lindbladian& l, const ReferenceState& ref, const WeightFunction& f,
                         const Discriminant& disc)
{
    return operator_norm(disc.khat - similarity_khat(l, ref, f));
}

Vector purified_fixed_point(const ReferenceState& ref)
{
    const Matrix root = matfunc(ref.decomposition(), [](double p) { return std::sqrt(p); });
    Vector v = vec(root);
    return v / v.norm();
}

Index eigenvalue_multiplicity(const Matrix& m, double value, double tol)
{
    Index count = 0;
    for (double e : hermitian_eigenvalues(m)) {
        if (std::abs(e - value) <= tol) ++count;
    }
    return count;
}

}  // namespace lsz
