#include <doctest.h>

#include "support.hpp"

using namespace lsz;
using lsz::test::diag;
using lsz::test::dist;
using lsz::test::ket_bra;

namespace {

ReferenceState random_reference(Index d, Rng& rng) { return ReferenceState::from_density(random_density(d, rng)); }

}  // namespace

TEST_CASE("weight functions")
{
    CHECK(WeightFunction::constant_one()(3.0) == 1.0);
    CHECK(WeightFunction::sqrt()(4.0) == doctest::Approx(2.0));
    CHECK(WeightFunction::power(0.3)(2.0) == doctest::Approx(std::pow(2.0, 0.3)));
    CHECK_THROWS_AS(WeightFunction::power(1.5), std::invalid_argument);
    const auto pinned = pinned_weight_functions();
    REQUIRE(pinned.size() == 3);
    CHECK(pinned[0].name() == "one");
    CHECK(pinned[1].name() == "sqrt");
    CHECK(pinned[2].name() == "pow0.3");
    for (const auto& f : pinned) {
        for (double t : {1e-6, 0.3, 1.0, 7.0, 1e6}) CHECK(f(t) > 0.0);
    }
}

TEST_CASE("reference state validation")
{
    CHECK_THROWS_AS(ReferenceState::from_density(diag({1, 0})), std::invalid_argument);
    CHECK_THROWS_AS(ReferenceState::from_density(diag({0.6, 0.6})), std::invalid_argument);
    CHECK_THROWS_AS(ReferenceState::from_density(diag({1.2, -0.2})), std::invalid_argument);

    Rng rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const auto ref = random_reference(2 + trial % 4, rng);
        const Matrix back = matfunc(ref.h_decomposition(), [](double e) { return std::exp(-e); });
        CHECK(dist(back, ref.sigma()) <= 1e-9);
        CHECK(ref.partition_function() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(dist(ref.sigma() * ref.sigma_inverse(), identity(ref.dimension())) <= 1e-9);
    }
}

TEST_CASE("modular operator")
{
    Rng rng(4);
    const Matrix a = random_complex_gaussian(2, 2, rng);
    const auto mixed = ReferenceState::from_density(identity(2) / 2.0);
    CHECK(dist(modular_apply(mixed, a), a) <= 1e-14);

    const double p0 = 0.7;
    const double p1 = 0.3;
    const auto ref = ReferenceState::from_density(diag({p0, p1}));
    CHECK(dist(modular_apply(ref, ket_bra(2, 1, 0)), (p1 / p0) * ket_bra(2, 1, 0)) <= 1e-14);
    CHECK(dist(modular_apply(ref, ref.sigma()), ref.sigma()) <= 1e-14);
}

TEST_CASE("Omega_sigma^f")
{
    Rng rng(6);
    const Matrix a = random_complex_gaussian(3, 3, rng);
    const auto mixed = ReferenceState::from_density(identity(3) / 3.0);
    for (const auto& f : pinned_weight_functions()) {
        CHECK(dist(omega_f_apply(mixed, f, OmegaPower::Plus, a), (f(1.0) / 3.0) * a) <= 1e-14);
    }

    for (int trial = 0; trial < 10; ++trial) {
        const auto ref = random_reference(2 + trial % 4, rng);
        const Matrix b = random_complex_gaussian(ref.dimension(), ref.dimension(), rng);
        for (const auto& f : pinned_weight_functions()) {
            const Matrix there = omega_f_apply(ref, f, OmegaPower::Minus, b);
            CHECK(dist(omega_f_apply(ref, f, OmegaPower::Plus, there), b) <= 1e-10 * (1.0 + operator_norm(b)));
            const Matrix half = omega_f_apply(ref, f, OmegaPower::PlusHalf, b);
            CHECK(dist(omega_f_apply(ref, f, OmegaPower::PlusHalf, half), omega_f_apply(ref, f, OmegaPower::Plus, b)) <=
                  1e-10 * (1.0 + operator_norm(b)));
            const Matrix m = omega_f_matrix(ref, f, OmegaPower::Plus);
            CHECK((m * vec(b) - vec(omega_f_apply(ref, f, OmegaPower::Plus, b))).norm() <= 1e-12 * (1.0 + b.norm()));
        }
        // f = 1 is right multiplication by sigma.
        CHECK(dist(omega_f_apply(ref, WeightFunction::constant_one(), OmegaPower::Plus, b), b * ref.sigma()) <= 1e-12);
    }

    const auto nonpositive = WeightFunction::custom([](double t) { return t - 1.0; }, "t-1");
    const auto ref = ReferenceState::from_density(diag({0.7, 0.3}));
    CHECK_THROWS_AS(omega_f_apply(ref, nonpositive, OmegaPower::Plus, a.topLeftCorner(2, 2)), std::domain_error);
}

TEST_CASE("weighted inner products")
{
    const auto ref = ReferenceState::from_density(diag({0.7, 0.3}));
    CHECK(std::abs(inner_f(ref, WeightFunction::constant_one(), identity(2), identity(2)) - 1.0) <= 1e-14);

    Rng rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto r = random_reference(3, rng);
        const Matrix a = random_complex_gaussian(3, 3, rng);
        for (const auto& f : pinned_weight_functions()) {
            const Complex v = inner_f(r, f, a, a);
            CHECK(v.real() > 0.0);
            CHECK(std::abs(v.imag()) <= 1e-12 * v.real());
        }
    }

    Matrix nonNormal(2, 2);
    nonNormal << 0.2, 1.0, 0.0, -0.5;
    const Complex gns = inner_f(ref, WeightFunction::constant_one(), nonNormal, nonNormal);
    const Complex kms = inner_f(ref, WeightFunction::sqrt(), nonNormal, nonNormal);
    CHECK(std::abs(gns - kms) > 1e-3);
    CHECK(std::abs(hs_inner(identity(2), identity(2)) - 2.0) == 0.0);
}
