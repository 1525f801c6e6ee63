// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "lsz/discriminant.hpp"
#include "lsz/energy.hpp"
#include "lsz/random_instances.hpp"
#include "lsz/reduction.hpp"
#include "lsz/walk.hpp"

using namespace lsz;

namespace {

struct Sample {
    std::string label;
    CanonicalLindbladian cl;
    bool davies = false;
    Matrix hamiltonian;          // Davies only
    std::vector<Matrix> couplings;  // Davies only
};

struct Outcome {
    bool passed = true;
    std::string detail;
};

double max_of(double a, double b) { return std::isnan(b) ? a : std::max(a, b); }

std::string fmt(const char* format, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::vector<Sample> make_samples()
{
    std::vector<Sample> out;
    Rng rng(20240601);
    for (int i = 0; i < 100; ++i) {
        DaviesOptions o;
        o.dimension = 2 + i % 5;
        o.couplings = 1 + (i / 5) % 3;
        const DaviesInstance inst = random_davies(o, rng);
        std::vector<Matrix> couplings;
        for (const auto& c : inst.couplings) couplings.push_back(c.s);
        out.push_back({"davies#" + std::to_string(i), davies_lindbladian(inst), true, inst.hamiltonian_matrix(), couplings});
    }
    for (int i = 0; i < 100; ++i) {
        out.push_back({"canonical#" + std::to_string(i), random_canonical(2 + i % 3, 1 + (i / 3) % 3, rng), false, {}, {}});
    }
    return out;
}

/// Walk for a sample: the direct construction for Davies instances with
/// reflection couplings, the enlarged-space reduction otherwise.
struct SampleWalk {
    WalkEmbedding walk;
    Matrix block;   // T^dag R T (restricted for reductions)
    double scale = 1.0;
};

SampleWalk walk_for(const Sample& s, CombineMode mode)
{
    if (s.davies) {
        WalkEmbedding w = build_walk(s.cl, mode);
        Matrix block = w.encoded_block();
        return {std::move(w), std::move(block), combine_scale(mode, s.cl.terms.size())};
    }
    ReductionResult red = reduce_to_davies(s.cl, mode);
    return {std::move(red.walk), std::move(red.restrictedQ), red.report.scale};
}

SpectralDecomposition unit_interval_hamiltonian(Index d, Rng& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::VectorXd values(d);
    for (Index i = 0; i < d; ++i) values(i) = unit(rng);
    const Matrix u = random_unitary(d, rng);
    const Matrix h = u * values.cast<Complex>().asDiagonal() * u.adjoint();
    return eig_hermitian(0.5 * (h + h.adjoint()));
}

Outcome criterion_detailed_balance(const std::vector<Sample>& samples)
{
    double db = 0.0;
    double fp = 0.0;
    for (const auto& s : samples) {
        const Lindbladian l = s.cl.lindbladian();
        for (const auto& f : pinned_weight_functions()) db = max_of(db, check_detailed_balance(l, s.cl.reference, f));
        fp = max_of(fp, fixed_point_residual(l, s.cl.reference.sigma()));
    }
    return {db <= 1e-8 && fp <= 1e-9,
            std::to_string(samples.size()) + " instances, max DB residual " + fmt("%.2e", db) + " (<= 1e-8), max ||L(sigma)|| " +
                fmt("%.2e", fp) + " (<= 1e-9)"};
}

Outcome criterion_f_independence(const std::vector<Sample>& samples)
{
    double worst = 0.0;
    for (const auto& s : samples) {
        const Lindbladian l = s.cl.lindbladian();
        std::vector<Matrix> versions{discriminant_matrix(s.cl).khat};
        for (const auto& f : pinned_weight_functions()) versions.push_back(similarity_khat(l, s.cl.reference, f));
        for (std::size_t a = 0; a < versions.size(); ++a) {
            for (std::size_t b = a + 1; b < versions.size(); ++b) {
                worst = max_of(worst, operator_norm(versions[a] - versions[b]));
            }
        }
    }
    return {worst <= 1e-8, "closed form vs f in {1, sqrt, t^0.3}: max pairwise residual " + fmt("%.2e", worst) + " (<= 1e-8)"};
}

Outcome criterion_block_encoding(const std::vector<Sample>& samples)
{
    double statePrep = 0.0;
    double angles = 0.0;
    for (const auto& s : samples) {
        const Matrix q = discriminant_matrix(s.cl).q;
        for (auto mode : {CombineMode::StatePrep, CombineMode::PaperTheta}) {
            const SampleWalk w = walk_for(s, mode);
            const double r = operator_norm(w.block - w.scale * q);
            if (mode == CombineMode::StatePrep) statePrep = max_of(statePrep, r);
            else angles = max_of(angles, r);
        }
    }
    return {statePrep <= 1e-9 && angles <= 1e-9,
            "max ||T^dag R T - c Q||: state-prep (c = 1) " + fmt("%.2e", statePrep) + ", angles-theta (c = 1/M) " +
                fmt("%.2e", angles) + " (<= 1e-9)"};
}

Outcome criterion_walk_spectrum(const std::vector<Sample>& samples)
{
    double phase = 0.0;
    double eigvec = 0.0;
    int eigvecChecked = 0;
    int mismatched = 0;
    for (const auto& s : samples) {
        const Discriminant disc = discriminant_matrix(s.cl);
        const SampleWalk w = walk_for(s, CombineMode::StatePrep);
        const WalkSpectrum ws = walk_spectrum(w.walk, disc.q, &disc.purifiedFixedPoint);
        if (!ws.countsMatch) ++mismatched;
        phase = max_of(phase, ws.phaseMatchError);
        if (eigenvalue_multiplicity(disc.q, 1.0) == 1) {
            ++eigvecChecked;
            const double d = ws.fixedPointEigenvectorDistance;
            eigvec = std::isnan(d) ? std::numeric_limits<double>::infinity() : std::max(eigvec, d);
        }
    }
    return {mismatched == 0 && phase <= 1e-8 && eigvec <= 1e-8,
            "max phase error on B " + fmt("%.2e", phase) + " (<= 1e-8), count mismatches " + std::to_string(mismatched) +
                ", phase-0 eigenvector distance " + fmt("%.2e", eigvec) + " on " + std::to_string(eigvecChecked) +
                " instances (<= 1e-8)"};
}

Outcome criterion_gap_amplification(const std::vector<Sample>& samples)
{
    int violations = 0;
    int degenerate = 0;
    double slack = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
        const GapCheck g = gap_amplification_check(discriminant_matrix(s.cl).q);
        if (!g.holds) ++violations;
        if (g.delta <= 1e-12) ++degenerate;
        else slack = std::min(slack, g.theta - g.bound);
    }

    DaviesInstance qubit;
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    qubit.hamiltonian = eig_hermitian(Eigen::Vector2d(0.0, 1.0).cast<Complex>().asDiagonal().toDenseMatrix());
    qubit.beta = 1.0;
    qubit.couplings = {{x, 1.0}};
    const GapCheck g = gap_amplification_check(discriminant_matrix(davies_lindbladian(qubit)).q);
    // Dense oracle values: Delta = (1 + 1/e) / 2, theta = arccos(1 - Delta), sqrt(2 Delta).
    const double deltaRef = 0.6839397205857212;
    const double thetaRef = 1.2492223135852565;
    const double boundRef = 1.169563782429775;
    const double err = std::max({std::abs(g.delta - deltaRef), std::abs(g.theta - thetaRef), std::abs(g.bound - boundRef)});
    return {violations == 0 && err <= 1e-5,
            "theta >= sqrt(2 Delta) violations " + std::to_string(violations) + ", min slack " + fmt("%.3e", slack) + " (" +
                std::to_string(degenerate) + " with Delta = 0); reference qubit Delta " + fmt("%.6f", g.delta) + ", theta " + fmt("%.6f", g.theta) + ", sqrt(2 Delta) " +
                fmt("%.6f", g.bound) + ", max error " + fmt("%.1e", err) + " (<= 1e-5)"};
}

Outcome criterion_energy()
{
    Rng rng(7001);
    double circuit = 0.0;
    for (int i = 0; i < 30; ++i) {
        const Index d = 2 + i % 3;
        const int r = 1 + i % 3;
        const auto h = unit_interval_hamiltonian(d, rng);
        const Matrix s = random_reflection(d, rng);
        const Matrix iso = bohr_estimation_isometry(h, s, r);
        circuit = max_of(circuit, operator_norm(iso - ideal_bohr_estimation(rounded_hamiltonian(h, r).rounded, s, r)));
    }
    std::uniform_real_distribution<double> betas(0.0, 4.0);
    int below = 0;
    double slack = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
        const auto h = unit_interval_hamiltonian(2 + i % 5, rng);
        const int r = 1 + i % 6;
        const double beta = betas(rng);
        const auto rh = rounded_hamiltonian(h, r);
        const double overlap = purification_overlap(gibbs_state(h, beta), gibbs_state(rh.rounded, beta));
        const double bound = overlap_lower_bound(beta, r);
        if (overlap < bound - 1e-12) ++below;
        slack = std::min(slack, overlap - bound);
    }
    return {circuit <= 1e-10 && below == 0,
            "30 circuits: max ||V - ideal(H~)|| " + fmt("%.2e", circuit) + " (<= 1e-10); 100 overlaps below 1 - beta/2^r: " +
                std::to_string(below) + ", min slack " + fmt("%.3e", slack)};
}

Outcome criterion_reduction()
{
    Rng rng(9001);
    double qResidual = 0.0;
    double gapError = 0.0;
    for (int i = 0; i < 50; ++i) {
        const CanonicalLindbladian cl = random_canonical(3, 1 + i % 3, rng);
        const Discriminant disc = discriminant_matrix(cl);
        const ReductionResult red = reduce_to_davies(cl);
        qResidual = max_of(qResidual, operator_norm(red.restrictedQ - disc.q));
        const WalkSpectrum ws = walk_spectrum(red.walk, disc.q, &disc.purifiedFixedPoint);
        gapError = max_of(gapError, std::abs(ws.phaseGap - gap_amplification_check(disc.q).theta));
    }
    return {qResidual <= 1e-9 && gapError <= 1e-7,
            "50 instances (d = 3): max restricted-Q residual " + fmt("%.2e", qResidual) + " (<= 1e-9), max phase-gap error " +
                fmt("%.2e", gapError) + " (<= 1e-7)"};
}

Outcome criterion_uniqueness(const std::vector<Sample>& samples)
{
    int eligible = 0;
    int failures = 0;
    for (const auto& s : samples) {
        if (!s.davies) continue;
        std::vector<Matrix> ops = s.couplings;
        ops.push_back(s.hamiltonian);
        if (commutant_dimension(ops) != 1) continue;
        ++eligible;
        if (eigenvalue_multiplicity(discriminant_matrix(s.cl).q, 1.0) != 1) ++failures;
    }
    return {eligible > 0 && failures == 0,
            std::to_string(eligible) + " instances with trivial commutant, eigenvalue-1 multiplicity != 1 on " +
                std::to_string(failures)};
}

bool report(int id, const std::string& name, double limitSeconds, const std::function<Outcome()>& body)
{
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.2f s", seconds);
    if (limitSeconds > 0) {
        timing += fmt(" (limit %.0f s)", limitSeconds);
        if (seconds > limitSeconds) o.passed = false;
    }
    std::printf("%s [%d] %s: %s; %s\n", o.passed ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
    return o.passed;
}

}  // namespace

int main()
{
    std::vector<Sample> samples;
    const double setup = [&] {
        const auto start = std::chrono::steady_clock::now();
        samples = make_samples();
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }();
    std::printf("instances: 100 Davies (d 2-6, 1-3 reflection couplings), 100 canonical (d 2-4, 1-3 terms); setup %.2f s\n",
                setup);

    bool ok = true;
    ok &= report(1, "detailed balance and fixed point", 30.0, [&] { return criterion_detailed_balance(samples); });
    ok &= report(2, "f-independence of the discriminant", 0.0, [&] { return criterion_f_independence(samples); });
    ok &= report(3, "block encoding T^dag R T = Q", 0.0, [&] { return criterion_block_encoding(samples); });
    ok &= report(4, "walk spectrum on B", 0.0, [&] { return criterion_walk_spectrum(samples); });
    ok &= report(5, "gap amplification", 0.0, [&] { return criterion_gap_amplification(samples); });
    ok &= report(6, "rounding model", 60.0, [] { return criterion_energy(); });
    ok &= report(7, "reduction to reflection couplings", 120.0, [] { return criterion_reduction(); });
    ok &= report(8, "uniqueness from a trivial commutant", 0.0, [&] { return criterion_uniqueness(samples); });
    std::printf("%s\n", ok ? "ALL PASS" : "SOME CRITERIA FAILED");
    return ok ? 0 : 1;
}
