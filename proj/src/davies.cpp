#include "lsz/davies.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lsz {

std::size_t BohrGrid::index_of(double w, double tol) const
{
    for (std::size_t i = 0; i < frequencies.size(); ++i) {
        if (std::abs(frequencies[i] - w) <= tol) return i;
    }
    std::ostringstream msg;
    msg << "Bohr grid: " << w << " is not a Bohr frequency";
    throw std::invalid_argument(msg.str());
}

BohrGrid bohr_grid(const SpectralDecomposition& h)
{
    const std::size_t m = h.size();
    const double tol = h.groupingTolerance;

    struct Diff {
        double magnitude;
        std::size_t k, l;
        int sign;
    };
    std::vector<Diff> diffs;
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t l = 0; l < m; ++l) {
            const double v = h.eigenvalues[k] - h.eigenvalues[l];
            diffs.push_back({std::abs(v), k, l, v > 0 ? 1 : (v < 0 ? -1 : 0)});
        }
    }
    std::sort(diffs.begin(), diffs.end(), [](const Diff& a, const Diff& b) { return a.magnitude < b.magnitude; });

    // Cluster magnitudes; cluster 0 holds everything chained to zero.
    std::vector<std::size_t> cluster(diffs.size());
    std::vector<double> sums{0.0};
    std::vector<std::size_t> counts{0};
    double previous = 0.0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        if (diffs[i].magnitude - previous > tol) {
            sums.push_back(0.0);
            counts.push_back(0);
        }
        cluster[i] = sums.size() - 1;
        sums.back() += diffs[i].magnitude;
        ++counts.back();
        previous = diffs[i].magnitude;
    }
    const std::size_t positive = sums.size() - 1;

    BohrGrid grid;
    grid.frequencies.assign(2 * positive + 1, 0.0);
    grid.indexSets.assign(2 * positive + 1, {});
    for (std::size_t c = 1; c <= positive; ++c) {
        const double rep = sums[c] / static_cast<double>(counts[c]);
        grid.frequencies[positive + c] = rep;
        grid.frequencies[positive - c] = -rep;
    }
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        const std::size_t c = cluster[i];
        std::size_t slot = positive;
        if (c != 0) slot = diffs[i].sign > 0 ? positive + c : positive - c;
        grid.indexSets[slot].emplace_back(diffs[i].k, diffs[i].l);
    }
    for (auto& set : grid.indexSets) std::sort(set.begin(), set.end());
    return grid;
}

std::vector<Matrix> jump_operators(const SpectralDecomposition& h, const BohrGrid& grid, const Matrix& s)
{
    if (s.rows() != h.dimension() || s.cols() != h.dimension()) {
        throw std::invalid_argument("jump_operators: coupling dimension does not match the Hamiltonian");
    }
    std::vector<Matrix> out;
    out.reserve(grid.size());
    for (const auto& set : grid.indexSets) {
        Matrix j = Matrix::Zero(s.rows(), s.cols());
        for (const auto& [k, l] : set) j += h.projectors[k] * s * h.projectors[l];
        out.push_back(std::move(j));
    }
    return out;
}

double filter_eval(FilterKind kind, double omegaH)
{
    switch (kind) {
    case FilterKind::Metropolis: return omegaH <= 0.0 ? 1.0 : std::exp(-omegaH);
    case FilterKind::Glauber:
        if (omegaH > 0.0) {
            const double e = std::exp(-omegaH);
            return e / (1.0 + e);
        }
        return 1.0 / (1.0 + std::exp(omegaH));
    }
    return 0.0;
}

std::vector<double> DaviesInstance::rates(const BohrGrid& grid) const
{
    std::vector<double> out;
    out.reserve(grid.size());
    for (double w : grid.frequencies) out.push_back(filter_eval(filter, beta * w));
    if (filter == FilterKind::Glauber && normalizeGlauber) {
        const double peak = *std::max_element(out.begin(), out.end());
        for (double& g : out) g /= peak;
    }
    if (dropZeroFrequency) out[grid.size() / 2] = 0.0;
    return out;
}

bool DaviesInstance::has_reflection_couplings() const
{
    for (const auto& c : couplings) {
        if (operator_norm(c.s * c.s - identity(c.s.rows())) > 1e-10) return false;
    }
    return true;
}

void DaviesInstance::validate(bool requireReflections) const
{
    const Index d = dimension();
    if (d == 0) throw std::invalid_argument("Davies instance: empty Hamiltonian");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("Davies instance: beta must be finite and >= 0");
    for (double e : hamiltonian.eigenvalues) {
        if (e < 0.0 || e > 1.0) {
            std::ostringstream msg;
            msg << "Davies instance: Hamiltonian eigenvalue " << e << " outside [0, 1]";
            throw std::invalid_argument(msg.str());
        }
    }
    if (couplings.empty()) throw std::invalid_argument("Davies instance: no coupling operators");
    double total = 0.0;
    for (std::size_t a = 0; a < couplings.size(); ++a) {
        const auto& c = couplings[a];
        std::ostringstream where;
        where << "Davies instance: coupling " << a;
        if (c.s.rows() != d || c.s.cols() != d) throw std::invalid_argument(where.str() + " has the wrong dimension");
        const double herm = hermiticity_residual(c.s);
        if (herm > 1e-10) {
            throw NonHermitianError(where.str() + " is not hermitian", herm);
        }
        if (requireReflections && operator_norm(c.s * c.s - identity(d)) > 1e-10) {
            throw std::invalid_argument(where.str() + " is not a reflection (S^2 != I)");
        }
        if (!(c.weight > 0.0)) throw std::invalid_argument(where.str() + " has a non-positive weight");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-10) throw std::invalid_argument("Davies instance: coupling weights must sum to 1");
}

ReferenceState gibbs_state(const SpectralDecomposition& h, double beta)
{
    if (!(beta >= 0.0)) throw std::invalid_argument("gibbs_state: beta must be >= 0");
    const double shift = h.eigenvalues.front();
    double z = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        z += std::exp(-beta * (h.eigenvalues[k] - shift)) * static_cast<double>(h.rank(k));
    }
    const Matrix sigma = matfunc(h, [&](double e) { return std::exp(-beta * (e - shift)) / z; });
    return ReferenceState::from_density(sigma, h.groupingTolerance);
}

CanonicalLindbladian davies_lindbladian(const DaviesInstance& inst)
{
    inst.validate(false);
    const BohrGrid grid = bohr_grid(inst.hamiltonian);
    const std::vector<double> rates = inst.rates(grid);

    CanonicalLindbladian out{gibbs_state(inst.hamiltonian, inst.beta), inst.hamiltonian, inst.beta, {}};
    for (const auto& coupling : inst.couplings) {
        const auto jumps = jump_operators(inst.hamiltonian, grid, coupling.s);
        CanonicalTerm term;
        term.weight = coupling.weight;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            term.jumps.push_back({grid.frequencies[i], jumps[i], rates[i]});
        }
        out.terms.push_back(std::move(term));
    }
    return out;
}

Index commutant_dimension(const std::vector<Matrix>& ops)
{
    if (ops.empty()) throw std::invalid_argument("commutant_dimension: need at least one operator");
    const Index d = ops.front().rows();
    const Matrix id = identity(d);
    Matrix stacked(static_cast<Index>(ops.size()) * d * d, d * d);
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].rows() != d || ops[i].cols() != d) {
            throw std::invalid_argument("commutant_dimension: operators must share one square dimension");
        }
        // vec(M A - A M) = (M (x) I - I (x) M^T) vec(A)
        stacked.middleRows(static_cast<Index>(i) * d * d, d * d) = kron(ops[i], id) - kron(id, ops[i].transpose());
    }
    Eigen::BDCSVD<Matrix> svd(stacked);
    const auto& sv = svd.singularValues();
    const double cutoff = 1e-9 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) ++rank;
    }
    return d * d - rank;
}

}  // namespace lsz
