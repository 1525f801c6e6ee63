#include "lsz/walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace lsz {

void JumpFamily::validate() const
{
    const std::size_t n = jumps.size();
    if (n == 0) throw std::invalid_argument("jump family: empty");
    if (rates.size() != n || negation.size() != n) throw std::invalid_argument("jump family: size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (jumps[i].rows() != dim || jumps[i].cols() != dim) {
            throw std::invalid_argument("jump family: jump operator has the wrong dimension");
        }
        if (negation[i] >= n || negation[negation[i]] != i) {
            throw std::invalid_argument("jump family: negation map is not an involution");
        }
        if (!(rates[i] >= 0.0)) throw std::invalid_argument("jump family: negative rate");
        if (rates[i] > 1.0 + 1e-12) {
            std::ostringstream msg;
            msg << "jump family: rate " << rates[i] << " exceeds 1, filter rotation undefined";
            throw std::invalid_argument(msg.str());
        }
    }
}

double JumpFamily::completeness_residual() const
{
    Matrix sum = Matrix::Zero(dim, dim);
    for (const auto& j : jumps) sum += j.adjoint() * j;
    return operator_norm(sum - lsz::identity(dim));
}

JumpFamily family_from_term(const CanonicalTerm& term, double tol)
{
    JumpFamily family;
    if (term.jumps.empty()) throw std::invalid_argument("family_from_term: term has no jumps");
    family.dim = term.jumps.front().x.rows();
    for (std::size_t i = 0; i < term.jumps.size(); ++i) {
        family.jumps.push_back(term.jumps[i].x);
        family.rates.push_back(term.jumps[i].rate);
        family.negation.push_back(term.negation(i, tol));
        std::ostringstream label;
        label << term.jumps[i].omega;
        family.labels.push_back(label.str());
    }
    return family;
}

SignedPermutation::SignedPermutation(std::vector<Index> target, std::vector<double> sign)
    : target_(std::move(target)), sign_(std::move(sign))
{
    if (target_.size() != sign_.size()) throw std::invalid_argument("SignedPermutation: size mismatch");
    std::vector<bool> hit(target_.size(), false);
    for (Index t : target_) {
        if (t < 0 || static_cast<std::size_t>(t) >= target_.size() || hit[static_cast<std::size_t>(t)]) {
            throw std::invalid_argument("SignedPermutation: targets do not form a permutation");
        }
        hit[static_cast<std::size_t>(t)] = true;
    }
}

SignedPermutation SignedPermutation::identity(Index n)
{
    std::vector<Index> target(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) target[static_cast<std::size_t>(i)] = i;
    return {std::move(target), std::vector<double>(static_cast<std::size_t>(n), 1.0)};
}

Matrix SignedPermutation::apply(const Matrix& a) const
{
    if (a.rows() != size()) throw std::invalid_argument("SignedPermutation::apply: dimension mismatch");
    Matrix out(a.rows(), a.cols());
    for (Index i = 0; i < size(); ++i) out.row(target(i)) = sign(i) * a.row(i);
    return out;
}

Matrix SignedPermutation::dense() const
{
    Matrix out = Matrix::Zero(size(), size());
    for (Index i = 0; i < size(); ++i) out(target(i), i) = sign(i);
    return out;
}

double SignedPermutation::trace() const
{
    double tr = 0.0;
    for (Index i = 0; i < size(); ++i) {
        if (target(i) == i) tr += sign(i);
    }
    return tr;
}

bool SignedPermutation::is_involution() const
{
    for (Index i = 0; i < size(); ++i) {
        const Index j = target(i);
        if (target(j) != i || sign(i) * sign(j) != 1.0) return false;
    }
    return true;
}

namespace {

struct SingleIndex {
    Index d2, d1, f;
    Index operator()(Index a, Index j, Index freq, Index filter, Index add) const
    {
        return (((a * d1 + j) * f + freq) * 2 + filter) * 2 + add;
    }
};

}  // namespace

SignedPermutation build_reflection_R(const RegisterLayout& layout, const std::vector<std::size_t>& negation)
{
    if (static_cast<Index>(negation.size()) != layout.freqDim) {
        throw std::invalid_argument("build_reflection_R: negation map does not match the frequency register");
    }
    for (std::size_t i = 0; i < negation.size(); ++i) {
        if (negation[i] >= negation.size() || negation[negation[i]] != i) {
            throw std::invalid_argument("build_reflection_R: frequency basis is not negation-symmetric");
        }
    }
    if (layout.filterDim != 2 || layout.addDim != 2 || layout.couplingDim != 1 || layout.thetaDim != 1) {
        throw std::invalid_argument("build_reflection_R: expects a single-coupling layout");
    }
    const SingleIndex idx{layout.sys2Dim, layout.sys1Dim, layout.freqDim};
    const Index n = layout.total();
    std::vector<Index> target(static_cast<std::size_t>(n));
    for (Index a = 0; a < layout.sys2Dim; ++a) {
        for (Index j = 0; j < layout.sys1Dim; ++j) {
            for (Index f = 0; f < layout.freqDim; ++f) {
                for (Index add = 0; add < 2; ++add) {
                    target[static_cast<std::size_t>(idx(a, j, f, 0, add))] = idx(a, j, f, 0, add);
                    const Index flipped = static_cast<Index>(negation[static_cast<std::size_t>(f)]);
                    target[static_cast<std::size_t>(idx(a, j, f, 1, add))] = idx(a, j, flipped, 1, 1 - add);
                }
            }
        }
    }
    return {std::move(target), std::vector<double>(static_cast<std::size_t>(n), 1.0)};
}

Embedding build_isometry_single(const JumpFamily& family)
{
    family.validate();
    const Index d = family.dim;
    const Index f = static_cast<Index>(family.size());
    RegisterLayout layout;
    layout.sys2Dim = d;
    layout.sys1Dim = d;
    layout.freqDim = f;
    const SingleIndex idx{d, d, f};

    const double norm = 1.0 / std::sqrt(2.0);
    Matrix t = Matrix::Zero(layout.total(), d * d);
    for (Index w = 0; w < f; ++w) {
        const Matrix& jump = family.jumps[static_cast<std::size_t>(w)];
        const double g = std::min(1.0, family.rates[static_cast<std::size_t>(w)]);
        const double filter[2] = {std::sqrt(1.0 - g), std::sqrt(g)};
        for (Index i = 0; i < d; ++i) {
            for (Index j = 0; j < d; ++j) {
                const Index col = i * d + j;
                for (Index b = 0; b < d; ++b) {
                    for (Index q = 0; q < 2; ++q) {
                        // (J (x) I)|i,j> = sum_b J(b,i) |b,j>
                        t(idx(b, j, w, q, 0), col) += norm * filter[q] * jump(b, i);
                        // (I (x) conj J)|i,j> = sum_b conj(J(b,j)) |i,b>
                        t(idx(i, b, w, q, 1), col) += norm * filter[q] * std::conj(jump(b, j));
                    }
                }
            }
        }
    }
    return {layout, std::move(t), build_reflection_R(layout, family.negation)};
}

namespace {

// Pointer values reachable by the energy-estimation circuit, and for each
// energy e_k a permutation of those values realizing v -> v - e_k wherever
// both ends lie in the set.
struct PointerRegister {
    std::vector<double> values;
    std::vector<std::vector<Index>> shiftDown;  // shiftDown[k][v] = index of (v - e_k)

    Index find(double v, double tol) const
    {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (std::abs(values[i] - v) <= tol) return static_cast<Index>(i);
        }
        return -1;
    }
};

PointerRegister make_pointer_register(const SpectralDecomposition& h, const BohrGrid& grid)
{
    const double tol = h.groupingTolerance;
    PointerRegister reg;
    auto add = [&](double v) {
        if (reg.find(v, tol) < 0) reg.values.push_back(v);
    };
    add(0.0);
    for (double e : h.eigenvalues) add(-e);
    for (double w : grid.frequencies) add(w);

    const Index n = static_cast<Index>(reg.values.size());
    for (double e : h.eigenvalues) {
        std::vector<Index> perm(static_cast<std::size_t>(n), -1);
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        for (Index v = 0; v < n; ++v) {
            const Index target = reg.find(reg.values[static_cast<std::size_t>(v)] - e, tol);
            if (target >= 0 && !used[static_cast<std::size_t>(target)]) {
                perm[static_cast<std::size_t>(v)] = target;
                used[static_cast<std::size_t>(target)] = true;
            }
        }
        // complete the partial shift to a bijection
        Index next = 0;
        for (Index v = 0; v < n; ++v) {
            if (perm[static_cast<std::size_t>(v)] >= 0) continue;
            while (used[static_cast<std::size_t>(next)]) ++next;
            perm[static_cast<std::size_t>(v)] = next;
            used[static_cast<std::size_t>(next)] = true;
        }
        reg.shiftDown.push_back(std::move(perm));
    }
    return reg;
}

Matrix permutation_matrix(const std::vector<Index>& perm)
{
    const Index n = static_cast<Index>(perm.size());
    Matrix p = Matrix::Zero(n, n);
    for (Index v = 0; v < n; ++v) p(perm[static_cast<std::size_t>(v)], v) = 1.0;
    return p;
}

}  // namespace

CircuitIsometry build_isometry_via_circuit(const SpectralDecomposition& h, const Matrix& s,
                                           const std::vector<double>& rates)
{
    const BohrGrid grid = bohr_grid(h);
    if (rates.size() != grid.size()) throw std::invalid_argument("build_isometry_via_circuit: one rate per Bohr frequency");
    const Index d = h.dimension();
    const PointerRegister reg = make_pointer_register(h, grid);
    const Index p = static_cast<Index>(reg.values.size());
    const Matrix id = identity(d);
    const Matrix idp = identity(p);
    const Matrix id2 = identity(2);

    // Filter rotation controlled on the pointer; identity off the Bohr grid.
    Matrix rotation = Matrix::Zero(2 * p, 2 * p);
    std::vector<Index> gridIndex(static_cast<std::size_t>(p), -1);
    for (Index v = 0; v < p; ++v) {
        Matrix block = id2;
        for (std::size_t w = 0; w < grid.size(); ++w) {
            if (std::abs(grid.frequencies[w] - reg.values[static_cast<std::size_t>(v)]) <= h.groupingTolerance) {
                const double g = rates[w];
                block << std::sqrt(1.0 - g), -std::sqrt(g), std::sqrt(g), std::sqrt(1.0 - g);
                gridIndex[static_cast<std::size_t>(v)] = static_cast<Index>(w);
            }
        }
        rotation.block(2 * v, 2 * v, 2, 2) = block;
    }
    const Matrix filterGate = kron(kron(id, id), rotation);

    // Phi1 controlled by sys2, Phi2bar controlled by sys1; both act on the pointer.
    Matrix phi1 = Matrix::Zero(d * d * p * 2, d * d * p * 2);
    Matrix phi2 = phi1;
    for (std::size_t k = 0; k < h.size(); ++k) {
        const Matrix shift = kron(permutation_matrix(reg.shiftDown[k]), id2);
        phi1 += kron(kron(h.projectors[k], id), shift);
        phi2 += kron(kron(id, h.projectors[k].conjugate()), shift);
    }
    const Matrix kick0 = kron(kron(s, id), kron(idp, id2));
    const Matrix kick1 = kron(kron(id, s.conjugate()), kron(idp, id2));

    // Initialization: pointer at value 0, filter at |0>.
    const Index zero = reg.find(0.0, h.groupingTolerance);
    Matrix init = Matrix::Zero(d * d * p * 2, d * d);
    for (Index col = 0; col < d * d; ++col) init((col * p + zero) * 2, col) = 1.0;

    const Matrix t0 = filterGate * phi1.adjoint() * kick0 * phi1 * init;
    const Matrix t1 = filterGate * phi2.adjoint() * kick1 * phi2 * init;

    RegisterLayout layout;
    layout.sys2Dim = d;
    layout.sys1Dim = d;
    layout.freqDim = static_cast<Index>(grid.size());
    const SingleIndex idx{d, d, layout.freqDim};
    CircuitIsometry out;
    out.pointerDim = p;
    out.t = Matrix::Zero(layout.total(), d * d);
    double leaked = 0.0;
    const double norm = 1.0 / std::sqrt(2.0);
    for (Index a = 0; a < d; ++a) {
        for (Index j = 0; j < d; ++j) {
            for (Index v = 0; v < p; ++v) {
                for (Index q = 0; q < 2; ++q) {
                    const Index row = ((a * d + j) * p + v) * 2 + q;
                    const Index w = gridIndex[static_cast<std::size_t>(v)];
                    if (w < 0) {
                        leaked += t0.row(row).squaredNorm() + t1.row(row).squaredNorm();
                        continue;
                    }
                    out.t.row(idx(a, j, w, q, 0)) = norm * t0.row(row);
                    out.t.row(idx(a, j, w, q, 1)) = norm * t1.row(row);
                }
            }
        }
    }
    out.leakage = std::sqrt(leaked);
    return out;
}

double combine_scale(CombineMode mode, std::size_t couplings)
{
    return mode == CombineMode::StatePrep ? 1.0 : 1.0 / static_cast<double>(couplings);
}

Embedding combine_couplings(const std::vector<Embedding>& parts, const std::vector<double>& weights,
                            CombineMode mode)
{
    if (parts.empty() || parts.size() != weights.size()) {
        throw std::invalid_argument("combine_couplings: need one weight per part");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("combine_couplings: weights must lie in [0, 1]");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-10) throw std::invalid_argument("combine_couplings: weights must sum to 1");
    const RegisterLayout& base = parts.front().layout;
    for (const auto& part : parts) {
        const auto& l = part.layout;
        if (l.sys2Dim != base.sys2Dim || l.sys1Dim != base.sys1Dim || l.freqDim != base.freqDim ||
            l.couplingDim != 1 || l.thetaDim != 1 || part.t.rows() != parts.front().t.rows() ||
            part.t.cols() != parts.front().t.cols()) {
            throw std::invalid_argument("combine_couplings: all parts must share one single-coupling layout");
        }
    }

    const Index m = static_cast<Index>(parts.size());
    const Index n = parts.front().t.rows();
    const Index cols = parts.front().t.cols();
    const SignedPermutation& r = parts.front().r;
    RegisterLayout layout = base;
    layout.couplingDim = m;

    std::vector<Index> target;
    std::vector<double> sign;
    Matrix t;
    if (mode == CombineMode::StatePrep) {
        t = Matrix::Zero(n * m, cols);
        for (Index a = 0; a < m; ++a) {
            const double amp = std::sqrt(weights[static_cast<std::size_t>(a)]);
            for (Index row = 0; row < n; ++row) t.row(row * m + a) = amp * parts[static_cast<std::size_t>(a)].t.row(row);
        }
        target.resize(static_cast<std::size_t>(n * m));
        sign.resize(static_cast<std::size_t>(n * m));
        for (Index row = 0; row < n; ++row) {
            for (Index a = 0; a < m; ++a) {
                target[static_cast<std::size_t>(row * m + a)] = r.target(row) * m + a;
                sign[static_cast<std::size_t>(row * m + a)] = r.sign(row);
            }
        }
    } else {
        layout.thetaDim = 2;
        t = Matrix::Zero(n * m * 2, cols);
        const double norm = 1.0 / std::sqrt(static_cast<double>(m));
        for (Index a = 0; a < m; ++a) {
            const double angle = std::acos(weights[static_cast<std::size_t>(a)]) / 2.0;
            const double amp[2] = {std::cos(angle), std::sin(angle)};
            for (Index row = 0; row < n; ++row) {
                for (Index q = 0; q < 2; ++q) {
                    t.row((row * m + a) * 2 + q) = norm * amp[q] * parts[static_cast<std::size_t>(a)].t.row(row);
                }
            }
        }
        target.resize(static_cast<std::size_t>(n * m * 2));
        sign.resize(static_cast<std::size_t>(n * m * 2));
        for (Index row = 0; row < n; ++row) {
            for (Index a = 0; a < m; ++a) {
                for (Index q = 0; q < 2; ++q) {
                    const auto at = static_cast<std::size_t>((row * m + a) * 2 + q);
                    target[at] = (r.target(row) * m + a) * 2 + q;
                    sign[at] = r.sign(row) * (q == 0 ? 1.0 : -1.0);
                }
            }
        }
    }
    return {layout, std::move(t), SignedPermutation(std::move(target), std::move(sign))};
}

WalkEmbedding::WalkEmbedding(Embedding embedding) : embedding_(std::move(embedding))
{
    const Matrix& t = embedding_.t;
    if (embedding_.r.size() != t.rows()) throw std::invalid_argument("walk: reflection and isometry dimensions differ");
    if (!embedding_.r.is_involution()) throw std::invalid_argument("walk: R is not a reflection");
    isometryResidual_ = operator_norm(t.adjoint() * t - lsz::identity(t.cols()));
    if (isometryResidual_ > 1e-10) {
        std::ostringstream msg;
        msg << "walk: T is not an isometry (||T^dag T - I|| = " << isometryResidual_
            << "); coupling operators must be reflections";
        throw std::invalid_argument(msg.str());
    }
}

Matrix WalkEmbedding::encoded_block() const { return t().adjoint() * r().apply(t()); }

Matrix WalkEmbedding::apply(const Matrix& v) const
{
    return r().apply(2.0 * (t() * (t().adjoint() * v)) - v);
}

Matrix WalkEmbedding::projector() const { return t() * t().adjoint(); }

Matrix WalkEmbedding::unitary() const
{
    return r().apply(2.0 * projector() - lsz::identity(dimension()));
}

WalkEmbedding build_walk_unitary(Matrix t, SignedPermutation r, RegisterLayout layout)
{
    return WalkEmbedding(Embedding{layout, std::move(t), std::move(r)});
}

WalkEmbedding build_walk(const CanonicalLindbladian& cl, CombineMode mode)
{
    std::vector<Embedding> parts;
    std::vector<double> weights;
    for (const auto& term : cl.terms) {
        parts.push_back(build_isometry_single(family_from_term(term, cl.frequencyHamiltonian.groupingTolerance)));
        weights.push_back(term.weight);
    }
    return WalkEmbedding(combine_couplings(parts, weights, mode));
}

namespace {

constexpr double kPi = std::numbers::pi;

double chord(double a, double b) { return std::abs(std::polar(1.0, a) - std::polar(1.0, b)); }

}  // namespace

WalkSpectrum walk_spectrum(const WalkEmbedding& walk, const Matrix& q, const Vector* purified)
{
    const Matrix encoded = walk.encoded_block();
    if (encoded.rows() != q.rows() || encoded.cols() != q.cols()) {
        throw std::invalid_argument("walk_spectrum: Q does not match the walk's input dimension");
    }
    const double mismatch = operator_norm(encoded - q);
    if (mismatch > 1e-8) {
        std::ostringstream msg;
        msg << "walk_spectrum: embedding inconsistent with Q (||T^dag R T - Q|| = " << mismatch << ")";
        throw std::invalid_argument(msg.str());
    }

    WalkSpectrum out;
    const Index n = walk.dimension();
    const Index m = walk.t().cols();

    // Orthonormal basis of B = span(T, R T).
    Matrix span(n, 2 * m);
    span << walk.t(), walk.r().apply(walk.t());
    Eigen::ColPivHouseholderQR<Matrix> qr(span);
    qr.setThreshold(1e-10);
    const Index b = qr.rank();
    const Matrix basis = qr.householderQ() * Matrix::Identity(n, b);
    out.dimB = b;
    out.dimBperp = n - b;

    const Matrix wBasis = walk.apply(basis);
    const Matrix restricted = basis.adjoint() * wBasis;
    out.invarianceResidual = (wBasis - basis * restricted).norm();

    Eigen::ComplexEigenSolver<Matrix> eig(restricted, false);
    for (Index i = 0; i < b; ++i) out.phasesB.push_back(std::arg(eig.eigenvalues()(i)));
    std::sort(out.phasesB.begin(), out.phasesB.end());

    Index expectedZero = 0;
    for (double lambda : hermitian_eigenvalues(q)) {
        if (lambda >= 1.0 - 1e-12) {
            out.expectedPhasesB.push_back(0.0);
            ++expectedZero;
        } else if (lambda <= -1.0 + 1e-12) {
            out.expectedPhasesB.push_back(kPi);
        } else {
            const double phase = std::acos(lambda);
            out.expectedPhasesB.push_back(phase);
            out.expectedPhasesB.push_back(-phase);
        }
    }
    std::sort(out.expectedPhasesB.begin(), out.expectedPhasesB.end());

    out.countsMatch = out.expectedPhasesB.size() == out.phasesB.size();
    if (out.countsMatch) {
        std::vector<bool> used(out.expectedPhasesB.size(), false);
        double worst = 0.0;
        for (double measured : out.phasesB) {
            std::size_t best = 0;
            double bestDistance = std::numeric_limits<double>::infinity();
            for (std::size_t e = 0; e < out.expectedPhasesB.size(); ++e) {
                if (used[e]) continue;
                const double dist = chord(measured, out.expectedPhasesB[e]);
                if (dist < bestDistance) {
                    bestDistance = dist;
                    best = e;
                }
            }
            used[best] = true;
            worst = std::max(worst, bestDistance);
        }
        out.phaseMatchError = worst;
    }

    std::vector<double> magnitudes;
    for (double phase : out.phasesB) {
        magnitudes.push_back(std::abs(phase));
        if (std::abs(phase) <= 1e-7) ++out.phaseZeroMultiplicityB;
    }
    std::sort(magnitudes.begin(), magnitudes.end());
    out.phaseGap = magnitudes.size() > 1 ? magnitudes[1] : 0.0;

    // On B-perp, Pi = 0 and W = -R: phase 0 <-> R = -1, phase pi <-> R = +1.
    const double traceB = (basis.adjoint() * walk.r().apply(basis)).trace().real();
    const double tracePerp = walk.r().trace() - traceB;
    out.bperpPhaseZero = static_cast<Index>(std::llround((static_cast<double>(out.dimBperp) - tracePerp) / 2.0));
    out.bperpPhasePi = out.dimBperp - out.bperpPhaseZero;

    if (purified != nullptr) {
        if (purified->size() != m) throw std::invalid_argument("walk_spectrum: purification has the wrong length");
        const Vector chi = walk.t() * (*purified / purified->norm());
        out.fixedPointResidual = (walk.apply(chi) - chi).norm();
        if (expectedZero == 1) {
            const Matrix shifted = restricted - Matrix::Identity(b, b);
            Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullV);
            const Vector u = basis * svd.matrixV().col(b - 1);
            const Complex overlap = u.dot(chi);  // u^dagger chi
            const Complex phase = overlap / std::abs(overlap);
            out.fixedPointEigenvectorDistance = (chi - phase * u).norm();
        }
    }
    return out;
}

GapCheck gap_amplification_check(const Matrix& q)
{
    auto values = hermitian_eigenvalues(q);
    std::sort(values.rbegin(), values.rend());
    if (values.size() < 2) throw std::invalid_argument("gap_amplification_check: need at least two eigenvalues");
    if (std::abs(values[0] - 1.0) > 1e-8) {
        std::ostringstream msg;
        msg << "gap_amplification_check: top eigenvalue is " << values[0] << ", expected 1";
        throw std::invalid_argument(msg.str());
    }
    GapCheck out;
    out.delta = std::clamp(1.0 - values[1], 0.0, 2.0);
    out.theta = std::acos(1.0 - out.delta);
    out.bound = std::sqrt(2.0 * out.delta);
    out.holds = out.theta >= out.bound - 1e-12;
    return out;
}

}  // namespace lsz
