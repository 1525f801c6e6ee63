#include <doctest.h>

#include "lsz/discriminant.hpp"
#include "lsz/walk.hpp"
#include "support.hpp"

using namespace lsz;
using lsz::test::diag;
using lsz::test::dist;
using lsz::test::pauli_x;
using lsz::test::pauli_z;

namespace {

JumpFamily qubit_family() { return family_from_term(davies_lindbladian(lsz::test::qubit1()).terms[0]); }

Embedding single_coupling(const Matrix& s)
{
    DaviesInstance inst = lsz::test::qubit1();
    inst.couplings = {{s, 1.0}};
    return build_isometry_single(family_from_term(davies_lindbladian(inst).terms[0]));
}

Matrix single_q(const Matrix& s)
{
    DaviesInstance inst = lsz::test::qubit1();
    inst.couplings = {{s, 1.0}};
    return discriminant_matrix(davies_lindbladian(inst)).q;
}

}  // namespace

TEST_CASE("jump families")
{
    const auto family = qubit_family();
    CHECK(family.size() == 3);
    CHECK_NOTHROW(family.validate());
    CHECK(family.completeness_residual() <= 1e-14);
    CHECK(family.negation[0] == 2);
    CHECK(family.rates[0] == doctest::Approx(1.0));
    CHECK(family.rates[2] == doctest::Approx(std::exp(-1.0)));

    auto bad = family;
    bad.rates[1] = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = family;
    bad.negation[0] = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("isometry of the single-coupling walk")
{
    const auto e = build_isometry_single(qubit_family());
    CHECK(e.t.rows() == 48);
    CHECK(e.t.cols() == 4);
    CHECK(e.layout.total() == 48);
    CHECK(dist(e.t.adjoint() * e.t, identity(4)) <= 1e-12);
    CHECK(dist(e.t.adjoint() * e.r.apply(e.t), single_q(pauli_x())) <= 1e-12);

    // At beta = 0 every filter is 1, so the filter qubit is |1> on every column.
    DaviesInstance hot = lsz::test::qubit1();
    hot.beta = 0.0;
    const auto he = build_isometry_single(family_from_term(davies_lindbladian(hot).terms[0]));
    for (Index row = 0; row < he.t.rows(); ++row) {
        const Index filt = (row / 2) % 2;
        if (filt == 0) CHECK(he.t.row(row).norm() <= 1e-15);
    }
}

TEST_CASE("isometry from explicit gates")
{
    const auto family = qubit_family();
    const auto reference = build_isometry_single(family);
    const auto circuit = build_isometry_via_circuit(eig_hermitian(diag({0, 1})), pauli_x(), family.rates);
    CHECK(circuit.leakage <= 1e-12);
    CHECK(dist(circuit.t, reference.t) <= 1e-11);

    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        DaviesOptions o;
        o.dimension = 2 + trial % 3;
        const auto inst = random_davies(o, rng);
        const auto cl = davies_lindbladian(inst);
        const auto fam = family_from_term(cl.terms[0]);
        const auto built = build_isometry_via_circuit(inst.hamiltonian, inst.couplings[0].s, fam.rates);
        CHECK(built.leakage <= 1e-10);
        CHECK(dist(built.t, build_isometry_single(fam).t) <= 1e-10);
    }
}

TEST_CASE("reflection R")
{
    const auto e = build_isometry_single(qubit_family());
    CHECK(e.r.is_involution());
    const Matrix r = e.r.dense();
    CHECK(dist(r, r.adjoint()) == 0.0);
    CHECK(dist(r * r, identity(48)) == 0.0);
    // Filter 0: identity on 24 rows.  Filter 1: F (x) X has zero diagonal.
    CHECK(e.r.trace() == doctest::Approx(24.0));
    for (Index row = 0; row < 48; ++row) {
        const Index filt = (row / 2) % 2;
        if (filt == 0) CHECK(e.r.target(row) == row);
        else CHECK(e.r.target(row) != row);
    }
    CHECK(SignedPermutation::identity(5).is_involution());
    CHECK_THROWS_AS(SignedPermutation({0, 0}, {1.0, 1.0}), std::invalid_argument);
    CHECK_FALSE(SignedPermutation({1, 2, 0}, {1.0, 1.0, 1.0}).is_involution());
}

TEST_CASE("combining couplings")
{
    const std::vector<Embedding> parts{single_coupling(pauli_x()), single_coupling(pauli_z())};
    const Matrix expected = 0.5 * single_q(pauli_x()) + 0.5 * single_q(pauli_z());

    const WalkEmbedding statePrep(combine_couplings(parts, {0.5, 0.5}, CombineMode::StatePrep));
    CHECK(statePrep.layout().couplingDim == 2);
    CHECK(statePrep.isometry_residual() <= 1e-12);
    CHECK(dist(statePrep.encoded_block(), expected) <= 1e-12);
    CHECK(combine_scale(CombineMode::StatePrep, 2) == 1.0);

    const WalkEmbedding angles(combine_couplings(parts, {0.5, 0.5}, CombineMode::PaperTheta));
    CHECK(angles.layout().thetaDim == 2);
    CHECK(combine_scale(CombineMode::PaperTheta, 2) == 0.5);
    CHECK(dist(angles.encoded_block(), 0.5 * expected) <= 1e-12);

    CHECK_THROWS_AS(combine_couplings(parts, {0.7, 0.7}, CombineMode::StatePrep), std::invalid_argument);
    CHECK_THROWS_AS(combine_couplings(parts, {1.2, -0.2}, CombineMode::StatePrep), std::invalid_argument);

    // One coupling in angles-theta mode with w = 1 is the plain walk.
    const WalkEmbedding one(combine_couplings({parts[0]}, {1.0}, CombineMode::PaperTheta));
    CHECK(dist(one.encoded_block(), single_q(pauli_x())) <= 1e-12);
}

TEST_CASE("walk unitary")
{
    const auto cl = davies_lindbladian(lsz::test::qubit1());
    const auto walk = build_walk(cl);
    const Matrix w = walk.unitary();
    CHECK(dist(w.adjoint() * w, identity(w.rows())) <= 1e-12);
    const Matrix pi = walk.projector();
    CHECK(dist(pi * pi, pi) <= 1e-12);

    Rng rng(33);
    const Matrix v = random_complex_gaussian(w.rows(), 3, rng);
    CHECK(dist(walk.apply(v), w * v) <= 1e-12);

    const Vector psi = purified_fixed_point(cl.reference);
    const Vector lifted = walk.t() * psi;
    CHECK((walk.apply(lifted) - lifted).norm() <= 1e-12);

    Embedding broken = build_isometry_single(qubit_family());
    broken.t *= 2.0;
    CHECK_THROWS_AS(WalkEmbedding(std::move(broken)), std::invalid_argument);
}

TEST_CASE("QUBIT-1 walk spectrum")
{
    const auto cl = davies_lindbladian(lsz::test::qubit1());
    const auto disc = discriminant_matrix(cl);
    const auto walk = build_walk(cl);
    const auto ws = walk_spectrum(walk, disc.q, &disc.purifiedFixedPoint);
    CHECK(ws.dimB == 7);
    CHECK(ws.dimB + ws.dimBperp == 48);
    CHECK(ws.countsMatch);
    CHECK(ws.phaseMatchError <= 1e-7);
    CHECK(ws.invarianceResidual <= 1e-10);
    CHECK(ws.phaseZeroMultiplicityB == 1);
    CHECK(ws.fixedPointResidual <= 1e-12);
    CHECK(ws.fixedPointEigenvectorDistance <= 1e-8);
    CHECK(ws.bperpPhaseZero + ws.bperpPhasePi == ws.dimBperp);

    // Oracle values: arccos(1 - Delta) and arccos(-1/e).
    REQUIRE(ws.phasesB.size() == 7);
    CHECK(ws.phaseGap == doctest::Approx(1.249222).epsilon(1e-5));
    CHECK(ws.phasesB.back() == doctest::Approx(1.947524).epsilon(1e-5));
    CHECK(ws.phasesB.front() == doctest::Approx(-1.947524).epsilon(1e-5));

    const auto gap = gap_amplification_check(disc.q);
    CHECK(gap.delta == doctest::Approx(0.6839397205857212).epsilon(1e-12));
    CHECK(gap.theta == doctest::Approx(1.249222).epsilon(1e-5));
    CHECK(gap.bound == doctest::Approx(std::sqrt(2.0 * gap.delta)));
    CHECK(gap.holds);

    CHECK_THROWS_AS(walk_spectrum(walk, identity(4)), std::invalid_argument);
    CHECK_THROWS_AS(gap_amplification_check(0.5 * identity(4)), std::invalid_argument);
}

TEST_CASE("walk spectra of random Davies instances")
{
    Rng rng(35);
    for (int trial = 0; trial < 20; ++trial) {
        DaviesOptions o;
        o.dimension = 2 + trial % 3;
        o.couplings = 1 + trial % 3;
        const auto cl = davies_lindbladian(random_davies(o, rng));
        const auto disc = discriminant_matrix(cl);
        for (auto mode : {CombineMode::StatePrep, CombineMode::PaperTheta}) {
            const auto walk = build_walk(cl, mode);
            const double scale = combine_scale(mode, cl.terms.size());
            const Matrix target = scale * disc.q;
            CHECK(dist(walk.encoded_block(), target) <= 1e-9);
            if (mode == CombineMode::PaperTheta && cl.terms.size() > 1) continue;  // scaled block is not Q
            const auto ws = walk_spectrum(walk, disc.q, &disc.purifiedFixedPoint);
            CHECK(ws.countsMatch);
            CHECK(ws.phaseMatchError <= 1e-7);
            CHECK(ws.invarianceResidual <= 1e-9);
            CHECK(ws.fixedPointResidual <= 1e-9);
            CHECK(gap_amplification_check(disc.q).holds);
        }
    }
}

TEST_CASE("gap amplification inequality")
{
    for (double delta : {1e-6, 1e-3, 0.1, 0.5, 1.0, 1.5, 2.0}) {
        const Matrix q = diag({1.0, 1.0 - delta, -1.0});
        const auto gap = gap_amplification_check(q);
        CHECK(gap.delta == doctest::Approx(delta));
        CHECK(gap.holds);
    }
}
