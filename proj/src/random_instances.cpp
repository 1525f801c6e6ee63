#include "lsz/random_instances.hpp"

#include <algorithm>
#include <cmath>

namespace lsz {

Matrix random_complex_gaussian(Index rows, Index cols, Rng& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            m(i, j) = Complex(re, im);
        }
    }
    return m;
}

Matrix random_unitary(Index d, Rng& rng)
{
    const Matrix g = random_complex_gaussian(d, d, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < d; ++i) {
        const Complex diag = r(i, i);
        if (std::abs(diag) > 0.0) q.col(i) *= diag / std::abs(diag);
    }
    return q;
}

Matrix random_hermitian(Index d, Rng& rng)
{
    const Matrix g = random_complex_gaussian(d, d, rng);
    return 0.5 * (g + g.adjoint());
}

Matrix random_reflection(Index d, Rng& rng)
{
    const SpectralDecomposition e = eig_hermitian(random_hermitian(d, rng));
    Matrix s = matfunc(e, [](double v) { return v >= 0.0 ? 1.0 : -1.0; });
    return 0.5 * (s + s.adjoint());
}

Matrix random_density(Index d, Rng& rng)
{
    std::uniform_real_distribution<double> uniform(0.05, 1.0);
    const Matrix u = random_unitary(d, rng);
    Eigen::VectorXd p(d);
    for (Index i = 0; i < d; ++i) p(i) = uniform(rng);
    p /= p.sum();
    Matrix rho = u * p.cast<Complex>().asDiagonal() * u.adjoint();
    return 0.5 * (rho + rho.adjoint());
}

DaviesInstance random_davies(const DaviesOptions& opt, Rng& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Index d = opt.dimension;
    const Matrix u = random_unitary(d, rng);
    std::vector<double> energies;
    std::vector<Matrix> projectors;
    for (Index i = 0; i < d; ++i) {
        energies.push_back(unit(rng));
        projectors.push_back(u.col(i) * u.col(i).adjoint());
    }

    DaviesInstance inst;
    inst.hamiltonian = make_decomposition(energies, projectors);
    inst.beta = opt.beta >= 0.0 ? opt.beta : opt.betaMax * unit(rng);
    std::vector<double> weights;
    for (std::size_t a = 0; a < opt.couplings; ++a) weights.push_back(0.2 + unit(rng));
    double total = 0.0;
    for (double w : weights) total += w;
    for (std::size_t a = 0; a < opt.couplings; ++a) {
        inst.couplings.push_back({random_reflection(d, rng), weights[a] / total});
    }
    inst.filter = FilterKind::Metropolis;
    if (opt.randomFilter && unit(rng) < 0.5) {
        inst.filter = FilterKind::Glauber;
        inst.normalizeGlauber = unit(rng) < 0.5;
    }
    return inst;
}

CanonicalLindbladian random_canonical(Index d, std::size_t terms, Rng& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ReferenceState ref = ReferenceState::from_density(random_density(d, rng));
    const SpectralDecomposition h = ref.h_decomposition();
    const BohrGrid grid = bohr_grid(h);

    std::vector<double> weights;
    for (std::size_t a = 0; a < terms; ++a) weights.push_back(0.2 + unit(rng));
    double total = 0.0;
    for (double w : weights) total += w;

    CanonicalLindbladian cl{std::move(ref), h, 1.0, {}};
    for (std::size_t a = 0; a < terms; ++a) {
        const Matrix raw = random_hermitian(d, rng);
        const Matrix x = raw / operator_norm(raw);
        const auto parts = jump_operators(h, grid, x);
        CanonicalTerm term;
        term.weight = weights[a] / total;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            term.jumps.push_back({grid.frequencies[i], parts[i], filter_eval(FilterKind::Metropolis, grid.frequencies[i])});
        }
        cl.terms.push_back(std::move(term));
    }
    return cl;
}

QuantumChannel random_db_channel(Index d, std::size_t terms, Rng& rng, Matrix* sigma)
{
    const CanonicalLindbladian cl = random_canonical(d, terms, rng);
    QuantumChannel out;
    Matrix used = Matrix::Zero(d, d);
    for (const auto& term : cl.terms) {
        for (const auto& jump : term.jumps) {
            const double coeff = term.weight * jump.rate;
            if (coeff <= 0.0) continue;
            out.krausOps.push_back(std::sqrt(coeff) * jump.x);
            used += coeff * jump.x.adjoint() * jump.x;
        }
    }
    const SpectralDecomposition rest = eig_hermitian(identity(d) - 0.5 * (used + used.adjoint()));
    out.krausOps.push_back(matfunc(rest, [](double v) { return std::sqrt(std::max(0.0, v)); }));
    if (sigma != nullptr) *sigma = cl.reference.sigma();
    return out;
}

}  // namespace lsz
