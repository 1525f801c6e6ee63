#include "lsz/superop.hpp"

#include <cmath>
#include <sstream>

namespace lsz {

WeightFunction::WeightFunction(Kind kind, double s, std::function<double(double)> fn, std::string name)
    : kind_(kind), s_(s), fn_(std::move(fn)), name_(std::move(name))
{
}

WeightFunction WeightFunction::constant_one() { return {Kind::ConstantOne, 0.0, nullptr, "one"}; }

WeightFunction WeightFunction::power(double s)
{
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("WeightFunction::power: s must lie in [0, 1]");
    std::ostringstream name;
    name << "pow" << s;
    return {Kind::Power, s, nullptr, name.str()};
}

WeightFunction WeightFunction::sqrt() { return {Kind::Sqrt, 0.5, nullptr, "sqrt"}; }

WeightFunction WeightFunction::custom(std::function<double(double)> fn, std::string name)
{
    if (!fn) throw std::invalid_argument("WeightFunction::custom: empty callable");
    return {Kind::Custom, 0.0, std::move(fn), std::move(name)};
}

double WeightFunction::operator()(double t) const
{
    switch (kind_) {
    case Kind::ConstantOne: return 1.0;
    case Kind::Power: return std::pow(t, s_);
    case Kind::Sqrt: return std::sqrt(t);
    case Kind::Custom: return fn_(t);
    }
    return 0.0;
}

std::vector<WeightFunction> pinned_weight_functions()
{
    return {WeightFunction::constant_one(), WeightFunction::sqrt(), WeightFunction::power(0.3)};
}

ReferenceState ReferenceState::from_density(const Matrix& sigma, double groupingTolerance)
{
    if (sigma.rows() != sigma.cols() || sigma.rows() == 0) {
        throw std::invalid_argument("ReferenceState: sigma must be a non-empty square matrix");
    }
    const Complex trace = sigma.trace();
    if (std::abs(trace - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << "ReferenceState: trace of sigma is " << trace.real() << ", expected 1";
        throw std::invalid_argument(msg.str());
    }
    ReferenceState ref;
    ref.decomposition_ = eig_hermitian(sigma, groupingTolerance);
    const double smallest = ref.decomposition_.eigenvalues.front();
    if (smallest <= kFullRankThreshold) {
        std::ostringstream msg;
        msg << "ReferenceState: sigma is not full rank (smallest eigenvalue " << smallest << ")";
        throw std::invalid_argument(msg.str());
    }
    ref.sigma_ = 0.5 * (sigma + sigma.adjoint());
    ref.sigmaInverse_ = matfunc(ref.decomposition_, [](double p) { return 1.0 / p; });
    ref.h_ = matfunc(ref.decomposition_, [](double p) { return -std::log(p); });

    const auto& dec = ref.decomposition_;
    for (std::size_t k = dec.size(); k-- > 0;) {
        ref.hDecomposition_.eigenvalues.push_back(-std::log(dec.eigenvalues[k]));
        ref.hDecomposition_.projectors.push_back(dec.projectors[k]);
    }
    ref.hDecomposition_.groupingTolerance = groupingTolerance;
    return ref;
}

double ReferenceState::partition_function() const
{
    double z = 0.0;
    for (std::size_t k = 0; k < hDecomposition_.size(); ++k) {
        z += std::exp(-hDecomposition_.eigenvalues[k]) * static_cast<double>(hDecomposition_.rank(k));
    }
    return z;
}

Matrix modular_apply(const ReferenceState& ref, const Matrix& a)
{
    if (a.rows() != ref.dimension() || a.cols() != ref.dimension()) {
        throw std::invalid_argument("modular_apply: dimension mismatch");
    }
    return ref.sigma() * a * ref.sigma_inverse();
}

namespace {

double omega_coefficient(const WeightFunction& f, OmegaPower power, double pk, double pl)
{
    const double fv = f(pk / pl);
    if (!(fv > 0.0) || !std::isfinite(fv)) {
        std::ostringstream msg;
        msg << "Omega_sigma^f: weight function " << f.name() << " is not positive at " << pk / pl;
        throw std::domain_error(msg.str());
    }
    const double forward = fv * pl;
    switch (power) {
    case OmegaPower::Plus: return forward;
    case OmegaPower::Minus: return 1.0 / forward;
    case OmegaPower::PlusHalf: return std::sqrt(forward);
    case OmegaPower::MinusHalf: return 1.0 / std::sqrt(forward);
    }
    return 0.0;
}

}  // namespace

Matrix omega_f_apply(const ReferenceState& ref, const WeightFunction& f, OmegaPower power, const Matrix& a)
{
    if (a.rows() != ref.dimension() || a.cols() != ref.dimension()) {
        throw std::invalid_argument("omega_f_apply: dimension mismatch");
    }
    const auto& dec = ref.decomposition();
    Matrix out = Matrix::Zero(a.rows(), a.cols());
    for (std::size_t k = 0; k < dec.size(); ++k) {
        const Matrix left = dec.projectors[k] * a;
        for (std::size_t l = 0; l < dec.size(); ++l) {
            const double c = omega_coefficient(f, power, dec.eigenvalues[k], dec.eigenvalues[l]);
            out += c * (left * dec.projectors[l]);
        }
    }
    return out;
}

Matrix omega_f_matrix(const ReferenceState& ref, const WeightFunction& f, OmegaPower power)
{
    return superoperator_matrix(ref.dimension(),
                                [&](const Matrix& a) { return omega_f_apply(ref, f, power, a); });
}

Complex hs_inner(const Matrix& a, const Matrix& b) { return (a.adjoint() * b).trace(); }

Complex inner_f(const ReferenceState& ref, const WeightFunction& f, const Matrix& a, const Matrix& b)
{
    return hs_inner(a, omega_f_apply(ref, f, OmegaPower::Plus, b));
}

}  // namespace lsz
