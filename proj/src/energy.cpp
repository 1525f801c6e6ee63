#include "lsz/energy.hpp"

#include <cmath>
#include <sstream>

namespace lsz {

void RoundingPromise::validate() const
{
    if (r < 1 || r > 24) throw std::invalid_argument("rounding promise: r must lie in [1, 24]");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("rounding promise: alpha must lie in (0, 1)");
}

namespace {

void require_unit_interval(const SpectralDecomposition& h)
{
    for (std::size_t k = 0; k < h.size(); ++k) {
        const double e = h.eigenvalues[k];
        if (!(e >= 0.0 && e < 1.0)) {
            std::ostringstream msg;
            msg << "eigenvalue " << k << " = " << e << " lies outside [0, 1)";
            throw std::invalid_argument(msg.str());
        }
    }
}

long long pointer_of(double e, int r) { return static_cast<long long>(std::floor(std::ldexp(e, r))); }

Index pow2(int r) { return Index{1} << r; }

// Columns of a state on system (x) A (x) B as a d x (A B) matrix and back.
Matrix to_grid(const Vector& v, Index d, Index pointers)
{
    Matrix m(d, pointers);
    for (Index s = 0; s < d; ++s) m.row(s) = v.segment(s * pointers, pointers).transpose();
    return m;
}

Vector from_grid(const Matrix& m)
{
    Vector v(m.size());
    for (Index s = 0; s < m.rows(); ++s) v.segment(s * m.cols(), m.cols()) = m.row(s).transpose();
    return v;
}

}  // namespace

PromiseVerdict check_rounding_promise(const SpectralDecomposition& h, const RoundingPromise& p)
{
    p.validate();
    require_unit_interval(h);
    PromiseVerdict out;
    out.required = std::ldexp(p.alpha, -(p.r + 1));
    out.minDistance = std::numeric_limits<double>::infinity();
    const Index grid = pow2(p.r);
    for (std::size_t k = 0; k < h.size(); ++k) {
        for (Index x = 0; x <= grid; ++x) {
            const double dist = std::abs(h.eigenvalues[k] - std::ldexp(static_cast<double>(x), -p.r));
            if (dist < out.minDistance) {
                out.minDistance = dist;
                out.offendingIndex = k;
            }
        }
    }
    // Absolute slack so that exactly-representable boundary cases count as met.
    out.holds = out.minDistance >= out.required - 1e-12 && out.minDistance > 0.0;
    return out;
}

RoundedHamiltonian rounded_hamiltonian(const SpectralDecomposition& h, int r)
{
    if (r < 1 || r > 24) throw std::invalid_argument("rounded_hamiltonian: r must lie in [1, 24]");
    require_unit_interval(h);
    RoundedHamiltonian out;
    out.original = h;
    out.r = r;
    std::vector<double> values;
    for (double e : h.eigenvalues) {
        const long long x = pointer_of(e, r);
        out.pointers.push_back(x);
        values.push_back(std::ldexp(static_cast<double>(x), -r));
    }
    // Distinct rounded values are at least 2^-r apart, so any tolerance below
    // that merges exactly the coinciding floors.
    out.rounded = make_decomposition(values, h.projectors, std::ldexp(0.25, -r));
    out.rounded.groupingTolerance = h.groupingTolerance;
    return out;
}

Matrix ideal_estimation_unitary(const SpectralDecomposition& h, int r)
{
    const RoundedHamiltonian rh = rounded_hamiltonian(h, r);
    const Index n = pow2(r);
    Matrix u = Matrix::Zero(h.dimension() * n, h.dimension() * n);
    for (std::size_t k = 0; k < h.size(); ++k) {
        Matrix shift = Matrix::Zero(n, n);
        for (Index z = 0; z < n; ++z) shift((z + rh.pointers[k]) % n, z) = 1.0;
        u += kron(h.projectors[k], shift);
    }
    return u;
}

BohrRegisters bohr_registers(Index d, int r) { return {d, pow2(r + 1), pow2(r)}; }

Matrix apply_bohr_circuit(const SpectralDecomposition& h, const Matrix& s, int r, const Matrix& input)
{
    const RoundedHamiltonian rh = rounded_hamiltonian(h, r);
    const Index d = h.dimension();
    if (s.rows() != d || s.cols() != d) throw std::invalid_argument("bohr circuit: coupling dimension mismatch");
    const BohrRegisters reg = bohr_registers(d, r);
    if (input.rows() != reg.total()) throw std::invalid_argument("bohr circuit: input has the wrong dimension");
    const Index na = reg.a;
    const Index nb = reg.b;
    const Index pointers = na * nb;

    // Pointer-controlled addition into register A (which = 0) or B (which = 1).
    auto controlled_add = [&](const Matrix& m, int which, int direction) {
        Matrix out = Matrix::Zero(d, pointers);
        for (std::size_t k = 0; k < h.size(); ++k) {
            const Matrix projected = h.projectors[k] * m;
            const long long x = direction * rh.pointers[k];
            for (Index a = 0; a < na; ++a) {
                for (Index b = 0; b < nb; ++b) {
                    Index ta = a;
                    Index tb = b;
                    if (which == 0) ta = ((a + x) % na + na) % na;
                    else tb = ((b + x) % nb + nb) % nb;
                    out.col(ta * nb + tb) += projected.col(a * nb + b);
                }
            }
        }
        return out;
    };

    Matrix result(input.rows(), input.cols());
    for (Index c = 0; c < input.cols(); ++c) {
        Matrix m = to_grid(input.col(c), d, pointers);
        m = controlled_add(m, 0, +1);
        m = s * m;
        m = controlled_add(m, 1, +1);
        Matrix subtracted(d, pointers);
        for (Index a = 0; a < na; ++a) {
            for (Index b = 0; b < nb; ++b) {
                const Index ta = ((b - a) % na + na) % na;
                subtracted.col(ta * nb + b) = m.col(a * nb + b);
            }
        }
        m = controlled_add(subtracted, 1, -1);
        result.col(c) = from_grid(m);
    }
    return result;
}

Matrix bohr_estimation_unitary(const SpectralDecomposition& h, const Matrix& s, int r)
{
    const BohrRegisters reg = bohr_registers(h.dimension(), r);
    if (reg.total() > 8192) throw std::invalid_argument("bohr_estimation_unitary: register too large for a dense matrix");
    return apply_bohr_circuit(h, s, r, identity(reg.total()));
}

Matrix bohr_estimation_isometry(const SpectralDecomposition& h, const Matrix& s, int r)
{
    const BohrRegisters reg = bohr_registers(h.dimension(), r);
    Matrix input = Matrix::Zero(reg.total(), reg.system);
    for (Index sys = 0; sys < reg.system; ++sys) input(sys * reg.a * reg.b, sys) = 1.0;
    return apply_bohr_circuit(h, s, r, input);
}

Matrix ideal_bohr_estimation(const SpectralDecomposition& rounded, const Matrix& s, int r)
{
    const BohrRegisters reg = bohr_registers(rounded.dimension(), r);
    const BohrGrid grid = bohr_grid(rounded);
    const auto jumps = jump_operators(rounded, grid, s);
    Matrix out = Matrix::Zero(reg.total(), reg.system);
    for (std::size_t w = 0; w < grid.size(); ++w) {
        const double scaled = std::ldexp(grid.frequencies[w], r);
        const long long pointer = std::llround(scaled);
        if (std::abs(scaled - static_cast<double>(pointer)) > 1e-6) {
            throw std::invalid_argument("ideal_bohr_estimation: Hamiltonian is not on the 2^-r grid");
        }
        const Index a = ((pointer % reg.a) + reg.a) % reg.a;
        for (Index row = 0; row < reg.system; ++row) {
            out.row((row * reg.a + a) * reg.b) += jumps[w].row(row);
        }
    }
    return out;
}

double purification_overlap(const ReferenceState& sigma, const ReferenceState& sigmaTilde)
{
    if (sigma.dimension() != sigmaTilde.dimension()) {
        throw std::invalid_argument("purification_overlap: dimension mismatch");
    }
    auto root = [](const ReferenceState& ref) {
        return matfunc(ref.decomposition(), [](double p) { return std::sqrt(p); });
    };
    return (root(sigma) * root(sigmaTilde)).trace().real();
}

double gibbs_overlap_formula(const RoundedHamiltonian& rounded, double beta)
{
    const auto& h = rounded.original;
    const double shift = h.eigenvalues.front();
    double z = 0.0;
    double zTilde = 0.0;
    double cross = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        const double rank = static_cast<double>(h.rank(k));
        const double e = h.eigenvalues[k] - shift;
        const double eTilde = std::ldexp(static_cast<double>(rounded.pointers[k]), -rounded.r) - shift;
        z += rank * std::exp(-beta * e);
        zTilde += rank * std::exp(-beta * eTilde);
        cross += rank * std::exp(-beta * (e + eTilde) / 2.0);
    }
    return cross / std::sqrt(z * zTilde);
}

double overlap_lower_bound(double beta, int r) { return 1.0 - std::ldexp(beta, -r); }

double query_cost_estimate(const RoundingPromise& p, double delta)
{
    p.validate();
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("query_cost_estimate: delta must lie in (0, 1)");
    return (1.0 / p.alpha) * std::log(1.0 / delta) * (std::ldexp(1.0, p.r) + std::log2(1.0 / p.alpha));
}

}  // namespace lsz
