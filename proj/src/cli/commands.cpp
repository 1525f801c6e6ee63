#include "lsz/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "lsz/discriminant.hpp"
#include "lsz/energy.hpp"
#include "lsz/random_instances.hpp"
#include "lsz/reduction.hpp"

namespace lsz::cli {

namespace {

constexpr double kFixedPointTolerance = 1e-9;
constexpr double kEncodingTolerance = 1e-9;
constexpr double kIsometryTolerance = 1e-10;
constexpr double kPhaseGapTolerance = 1e-7;

std::string mode_name(CombineMode mode) { return mode == CombineMode::StatePrep ? "state-prep" : "paper-theta"; }

struct Model {
    std::optional<ReferenceState> reference;
    Lindbladian lindbladian;
    std::optional<CanonicalLindbladian> canonical;
    bool canonicalValid = false;
    bool reflectionCouplings = false;
    std::vector<Matrix> algebra;  // operators whose commutant decides uniqueness
};

ReferenceState channel_reference(const Instance& inst, const Lindbladian& l, Report& report)
{
    const Index d = inst.dimension;
    if (inst.channelSigma) {
        try {
            return ReferenceState::from_density(*inst.channelSigma, inst.options.groupingTolerance);
        } catch (const std::invalid_argument& e) {
            throw InputError(std::string("channel.sigma: ") + e.what());
        }
    }
    const Matrix lhat = lindblad_matrix(l);
    Eigen::JacobiSVD<Matrix> svd(lhat, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = 1e-9 * std::max(1.0, sv(0));
    Index kernel = 0;
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) <= cutoff) ++kernel;
    }
    if (kernel == 1) {
        Matrix rho = unvec(svd.matrixV().col(d * d - 1), d, d);
        rho /= rho.trace();
        rho = 0.5 * (rho + rho.adjoint());
        try {
            return ReferenceState::from_density(rho, inst.options.groupingTolerance);
        } catch (const std::invalid_argument&) {
            report.warn("channel fixed point is not full rank; using sigma = I/d");
        }
    } else {
        report.warn("channel has a " + std::to_string(kernel) + "-dimensional fixed-point space; using sigma = I/d");
    }
    return ReferenceState::from_density(identity(d) / static_cast<double>(d), inst.options.groupingTolerance);
}

Model build_model(const Instance& inst, Report& report)
{
    Model m;
    switch (inst.kind) {
    case InstanceKind::Davies: {
        m.canonical = davies_lindbladian(*inst.davies);
        m.canonicalValid = true;
        m.reflectionCouplings = inst.davies->has_reflection_couplings();
        for (const auto& c : inst.davies->couplings) m.algebra.push_back(c.s);
        m.algebra.push_back(inst.davies->hamiltonian_matrix());
        break;
    }
    case InstanceKind::Canonical: {
        m.canonical = *inst.canonical;
        const CanonicalCheck c = m.canonical->check();
        const double worst = std::max({c.weightSumResidual, c.adjointPairResidual, c.modularResidual, c.kmsResidual});
        std::ostringstream note;
        note << "weights " << c.weightSumResidual << ", adjoint pairs " << c.adjointPairResidual << ", modular "
             << c.modularResidual << ", KMS " << c.kmsResidual << (c.negationClosed ? "" : ", not negation closed")
             << (c.ratesNonnegative ? "" : ", negative rate") << (c.weightsInRange ? "" : ", weight out of range");
        report.check_bool("canonical_form", c.ok(), worst, 1e-9, note.str());
        m.canonicalValid = c.ok();
        for (const auto& term : m.canonical->terms) {
            for (const auto& jump : term.jumps) {
                if (jump.x.norm() > 0.0) m.algebra.push_back(jump.x);
            }
        }
        break;
    }
    case InstanceKind::Channel:
        m.lindbladian = channel_to_lindbladian(*inst.channel);
        m.reference = channel_reference(inst, m.lindbladian, report);
        m.algebra = inst.channel->krausOps;
        return m;
    }
    m.reference = m.canonical->reference;
    m.lindbladian = m.canonical->lindbladian();
    if (m.lindbladian.jumpOps.empty()) m.lindbladian = Lindbladian({Matrix::Zero(inst.dimension, inst.dimension)}, inst.dimension);
    return m;
}

Json complex_list(const Eigen::VectorXcd& values)
{
    std::vector<Complex> v(values.data(), values.data() + values.size());
    std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    Json out = Json::array();
    for (Complex z : v) out.push_back(complex_to_json(z));
    return out;
}

Index walk_rows_estimate(const CanonicalLindbladian& cl, bool viaReduction, CombineMode mode)
{
    const Index d = cl.reference.dimension();
    const Index grid = static_cast<Index>(bohr_grid(cl.frequencyHamiltonian).size());
    const Index m = static_cast<Index>(cl.terms.size()) * (mode == CombineMode::PaperTheta ? 2 : 1);
    if (viaReduction) return 4 * d * d * 3 * grid * 4 * m;
    return d * d * grid * 4 * m;
}

// Walk checks shared by analyze and reduce.  `q` is the matrix the walk is
// expected to encode.
void check_walk(Report& report, const WalkEmbedding& walk, const Matrix& q, const Vector* purified,
                const std::optional<GapCheck>& gap, bool uniqueTop, const AnalysisOptions& opt)
{
    report.check("walk_isometry", walk.isometry_residual(), kIsometryTolerance);
    const double encoded = operator_norm(walk.encoded_block() - q);
    report.check("block_encoding", encoded, kEncodingTolerance, "||T^dag R T - c Q||");
    if (encoded > 1e-8) return;

    const WalkSpectrum sp = walk_spectrum(walk, q, uniqueTop ? purified : nullptr);
    report.check("walk_invariant_subspace", sp.invarianceResidual, 1e-8);
    report.check_bool("walk_phase_match", sp.countsMatch && sp.phaseMatchError <= opt.tolerance,
                      sp.phaseMatchError, opt.tolerance, "eigenphases on B vs +-arccos(lambda(Q))");
    if (uniqueTop && purified != nullptr) {
        report.check("walk_fixed_point", sp.fixedPointEigenvectorDistance, 1e-8, "phase-0 eigenvector vs T|sigma^1/2>");
        if (gap) report.check("walk_phase_gap", std::abs(sp.phaseGap - gap->theta), kPhaseGapTolerance);
    }

    Json phases = Json::array();
    for (double p : sp.phasesB) phases.push_back(p);
    Json expected = Json::array();
    for (double p : sp.expectedPhasesB) expected.push_back(p);
    report.section("walk") = {{"dimension", walk.dimension()},
                              {"dimB", sp.dimB},
                              {"dimBperp", sp.dimBperp},
                              {"phaseGap", sp.phaseGap},
                              {"phasesB", phases},
                              {"expectedPhasesB", expected},
                              {"bperpPhaseZero", sp.bperpPhaseZero},
                              {"bperpPhasePi", sp.bperpPhasePi},
                              {"combineMode", mode_name(opt.combineMode)}};
}

Json reduction_json(const ReductionReport& r)
{
    return {{"systemDimension", r.systemDim},
            {"enlargedDimension", r.enlargedDim},
            {"walkDimension", r.walkDim},
            {"extendedFrequencies", r.extendedFrequencies},
            {"terms", r.terms},
            {"maxXNorm", r.maxXNorm},
            {"scale", r.scale}};
}

void check_reduction(Report& report, const ReductionReport& r)
{
    report.check("reduction_assemble", r.assembleResidual, 1e-9, "Lambda_theta(X) vs X(theta)");
    report.check("reduction_block_encoding", r.blockEncodingResidual, 1e-10);
    report.check("reduction_reflection", r.reflectionResidual, 1e-10);
    report.check("reduction_extended_adjoint", r.extendedAdjointResidual, 1e-10);
    report.check("reduction_extended_completeness", r.extendedCompletenessResidual, 1e-10);
    report.check("reduction_isometry", r.isometryResidual, kIsometryTolerance);
    report.check("reduction_restricted_q", r.restrictedQResidual, kEncodingTolerance);
}

}  // namespace

std::vector<WeightFunction> parse_f_functions(const std::string& list)
{
    std::vector<WeightFunction> out;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item == "one") {
            out.push_back(WeightFunction::constant_one());
        } else if (item == "sqrt") {
            out.push_back(WeightFunction::sqrt());
        } else if (item.rfind("pow", 0) == 0) {
            try {
                std::size_t used = 0;
                const double s = std::stod(item.substr(3), &used);
                if (used != item.size() - 3) throw std::invalid_argument("trailing characters");
                out.push_back(WeightFunction::power(s));
            } catch (const std::exception&) {
                throw InputError("--f-functions: bad power '" + item + "' (expected pow<s>, s in [0, 1])");
            }
        } else {
            throw InputError("--f-functions: unknown weight '" + item + "' (one, sqrt, pow<s>)");
        }
    }
    if (out.empty()) throw InputError("--f-functions: empty list");
    return out;
}

CombineMode parse_combine_mode(const std::string& name)
{
    if (name == "state-prep") return CombineMode::StatePrep;
    if (name == "paper-theta") return CombineMode::PaperTheta;
    throw InputError("--combine-mode: expected state-prep or paper-theta");
}

Report cmd_analyze(const Instance& inst, const AnalysisOptions& opt)
{
    Report report("analyze", &inst);
    report.start_timer("total");
    Model model = build_model(inst, report);
    const ReferenceState& ref = *model.reference;
    const Lindbladian& l = model.lindbladian;

    report.start_timer("detailed_balance");
    double worstDb = 0.0;
    for (const auto& f : opt.fFunctions) {
        const double r = check_detailed_balance(l, ref, f);
        worstDb = std::max(worstDb, r);
        report.check("detailed_balance[" + f.name() + "]", r, opt.tolerance);
    }
    report.check("fixed_point", fixed_point_residual(l, ref.sigma()), kFixedPointTolerance, "||L(sigma)||");
    report.stop_timer("detailed_balance");

    const Matrix lhat = lindblad_matrix(l);
    Json spectra;
    spectra["lindbladian"] = complex_list(Eigen::ComplexEigenSolver<Matrix>(lhat, false).eigenvalues());
    report.section("spectra") = spectra;

    if (worstDb > opt.tolerance || (model.canonical && !model.canonicalValid)) {
        report.warn("not detailed balanced; discriminant and walk skipped");
        report.stop_timer("total");
        return report;
    }

    report.start_timer("discriminant");
    Discriminant disc;
    if (model.canonical) {
        disc = discriminant_matrix(*model.canonical);
    } else {
        disc.khat = similarity_khat(l, ref, WeightFunction::sqrt());
        disc.q = identity(disc.khat.rows()) + disc.khat;
        disc.purifiedFixedPoint = purified_fixed_point(ref);
    }
    for (const auto& f : opt.fFunctions) {
        report.check("f_independence[" + f.name() + "]", verify_similarity(l, ref, f, disc), opt.tolerance);
    }
    report.check("discriminant_hermitian", hermiticity_residual(disc.q), 1e-10);
    const Matrix q = 0.5 * (disc.q + disc.q.adjoint());
    const auto qValues = hermitian_eigenvalues(q);
    report.check("discriminant_top_eigenvalue", std::abs(qValues.back() - 1.0), 1e-8);
    report.check("purified_fixed_point", (q * disc.purifiedFixedPoint - disc.purifiedFixedPoint).norm(), 1e-8,
                 "||Q |sigma^1/2> - |sigma^1/2>||");
    Json qJson = Json::array();
    for (double v : qValues) qJson.push_back(v);
    spectra["discriminant"] = qJson;
    report.section("spectra") = spectra;
    report.stop_timer("discriminant");

    std::optional<GapCheck> gap;
    if (std::abs(qValues.back() - 1.0) <= 1e-8) {
        gap = gap_amplification_check(q);
        report.check_bool("gap_amplification", gap->holds, std::max(0.0, gap->bound - gap->theta), 1e-12,
                          "arccos(1 - delta) >= sqrt(2 delta)");
        report.section("gaps") = {{"delta", gap->delta}, {"theta", gap->theta}, {"sqrt2Delta", gap->bound}};
        if (gap->delta < 1e-10) report.warn("degenerate gap: eigenvalue 1 of Q is degenerate");
    }

    const Index commutant = commutant_dimension(model.algebra);
    const Index multiplicity = eigenvalue_multiplicity(q, 1.0, 1e-8);
    report.section("uniqueness") = {{"commutantDimension", commutant}, {"eigenvalueOneMultiplicity", multiplicity}};
    if (commutant == 1) {
        report.check_bool("uniqueness", multiplicity == 1, static_cast<double>(multiplicity), 1.0,
                          "trivial commutant implies a simple eigenvalue 1");
    }
    const bool uniqueTop = multiplicity == 1;

    if (!model.canonical) {
        report.warn("walk not constructed for channel instances");
        report.stop_timer("total");
        return report;
    }
    const CanonicalLindbladian& cl = *model.canonical;
    const bool viaReduction = !(inst.kind == InstanceKind::Davies && model.reflectionCouplings);
    const Index rows = walk_rows_estimate(cl, viaReduction, opt.combineMode);
    const Index cols = inst.dimension * inst.dimension * (viaReduction ? 4 : 1);
    if (rows * cols > opt.maxWalkEntries) {
        report.warn("walk skipped: " + std::to_string(rows) + "-dimensional walk space is too large");
        report.stop_timer("total");
        return report;
    }

    for (const auto& term : cl.terms) {
        Matrix x = Matrix::Zero(inst.dimension, inst.dimension);
        for (const auto& jump : term.jumps) x += jump.x;
        if (viaReduction && operator_norm(x) > 1.0 + 1e-10) {
            report.warn("walk skipped: a coupling has norm above 1 and cannot be block encoded by a reflection");
            report.stop_timer("total");
            return report;
        }
    }

    report.start_timer("walk");
    const double scale = combine_scale(opt.combineMode, cl.terms.size());
    const Matrix target = scale * q;
    const Vector* purified = scale == 1.0 ? &disc.purifiedFixedPoint : nullptr;
    try {
        if (viaReduction) {
            const ReductionResult red = reduce_to_davies(cl, opt.combineMode);
            check_reduction(report, red.report);
            report.section("reduction") = reduction_json(red.report);
            check_walk(report, red.walk, target, purified, gap, uniqueTop, opt);
        } else {
            check_walk(report, build_walk(cl, opt.combineMode), target, purified, gap, uniqueTop, opt);
        }
    } catch (const std::invalid_argument& e) {
        report.check_bool("walk_construction", false, std::numeric_limits<double>::quiet_NaN(), 0.0, e.what());
    }
    report.stop_timer("walk");
    report.stop_timer("total");
    return report;
}

Json cmd_random(const RandomOptions& opt, Index maxDim)
{
    if (opt.dimension < 1 || opt.dimension > maxDim) {
        throw InputError("--dim must lie in [1, " + std::to_string(maxDim) + "]");
    }
    if (opt.couplings < 1 || opt.couplings > 8) throw InputError("--couplings must lie in [1, 8]");
    Rng rng(opt.seed);
    if (opt.kind == "davies") {
        DaviesOptions o;
        o.dimension = opt.dimension;
        o.couplings = opt.couplings;
        o.beta = opt.beta;
        return davies_to_json(random_davies(o, rng));
    }
    if (opt.kind == "canonical") return canonical_to_json(random_canonical(opt.dimension, opt.couplings, rng));
    if (opt.kind == "channel") {
        Matrix sigma;
        const QuantumChannel ch = random_db_channel(opt.dimension, opt.couplings, rng, &sigma);
        return channel_to_json(ch, &sigma);
    }
    throw InputError("--kind: expected davies, canonical or channel");
}

Report cmd_round(const Instance& inst, const RoundOptions& opt)
{
    if (inst.kind != InstanceKind::Davies) throw InputError("round: needs a davies instance");
    Report report("round", &inst);
    const DaviesInstance& dav = *inst.davies;
    const double beta = opt.beta >= 0.0 ? opt.beta : dav.beta;
    const RoundingPromise promise{opt.r, opt.alpha};

    PromiseVerdict verdict;
    RoundedHamiltonian rounded;
    try {
        verdict = check_rounding_promise(dav.hamiltonian, promise);
        rounded = rounded_hamiltonian(dav.hamiltonian, opt.r);
        if (!(opt.delta > 0.0 && opt.delta < 1.0)) throw std::invalid_argument("--delta must lie in (0, 1)");
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("round: ") + e.what());
    }

    report.section("promise") = {{"r", opt.r},
                                 {"alpha", opt.alpha},
                                 {"holds", verdict.holds},
                                 {"minDistance", verdict.minDistance},
                                 {"required", verdict.required},
                                 {"offendingIndex", verdict.offendingIndex},
                                 {"offendingEigenvalue", dav.hamiltonian.eigenvalues[verdict.offendingIndex]}};

    Json values = Json::array();
    Json pointers = Json::array();
    for (std::size_t k = 0; k < rounded.pointers.size(); ++k) {
        values.push_back(std::ldexp(static_cast<double>(rounded.pointers[k]), -opt.r));
        pointers.push_back(rounded.pointers[k]);
    }
    const Matrix hTilde = rounded.rounded.reconstruct();
    report.section("rounded") = {{"eigenvalues", values}, {"pointers", pointers}, {"hamiltonian", matrix_to_json(hTilde)}};
    report.check("rounding_error", operator_norm(hTilde - dav.hamiltonian_matrix()), std::ldexp(1.0, -opt.r),
                 "||H~ - H|| <= 2^-r");

    const ReferenceState sigma = gibbs_state(dav.hamiltonian, beta);
    const ReferenceState sigmaTilde = gibbs_state(rounded.rounded, beta);
    const double exact = purification_overlap(sigma, sigmaTilde);
    const double formula = gibbs_overlap_formula(rounded, beta);
    const double bound = overlap_lower_bound(beta, opt.r);
    report.section("overlap") = {{"beta", beta}, {"exact", exact}, {"formula", formula}, {"bound", bound}};
    report.check("overlap_formula", std::abs(exact - formula), 1e-10);
    report.check_bool("overlap_bound", exact >= bound - 1e-12, std::max(0.0, bound - exact), 1e-12,
                      "overlap >= 1 - beta / 2^r");

    Json byR = Json::array();
    for (int r = 1; r <= std::max(6, opt.r); ++r) {
        const RoundedHamiltonian rr = rounded_hamiltonian(dav.hamiltonian, r);
        byR.push_back({{"r", r},
                       {"overlap", purification_overlap(sigma, gibbs_state(rr.rounded, beta))},
                       {"bound", overlap_lower_bound(beta, r)}});
    }
    report.section("overlapByR") = byR;
    report.section("queryCost") = {{"delta", opt.delta}, {"estimate", query_cost_estimate(promise, opt.delta)}};

    if (bohr_registers(inst.dimension, opt.r).total() <= (Index{1} << 20)) {
        for (std::size_t a = 0; a < dav.couplings.size(); ++a) {
            const Matrix& s = dav.couplings[a].s;
            const double diff = operator_norm(bohr_estimation_isometry(dav.hamiltonian, s, opt.r) -
                                              ideal_bohr_estimation(rounded.rounded, s, opt.r));
            report.check("bohr_estimation[" + std::to_string(a) + "]", diff, 1e-10,
                         "circuit vs ideal Bohr estimation of H~");
        }
    } else {
        report.warn("Bohr estimation check skipped: pointer registers too large");
    }
    return report;
}

Report cmd_reduce(const Instance& inst, const AnalysisOptions& opt)
{
    if (inst.kind == InstanceKind::Channel) throw InputError("reduce: needs a canonical or davies instance");
    Report report("reduce", &inst);
    report.start_timer("total");
    const CanonicalLindbladian cl = inst.kind == InstanceKind::Davies ? davies_lindbladian(*inst.davies) : *inst.canonical;
    const CanonicalCheck c = cl.check();
    report.check_bool("canonical_form", c.ok(),
                      std::max({c.weightSumResidual, c.adjointPairResidual, c.modularResidual, c.kmsResidual}), 1e-9);
    if (!c.ok()) {
        report.warn("not in canonical detailed-balanced form; reduction skipped");
        return report;
    }
    for (const auto& term : cl.terms) {
        Matrix x = Matrix::Zero(inst.dimension, inst.dimension);
        for (const auto& jump : term.jumps) x += jump.x;
        const double norm = operator_norm(x);
        if (norm > 1.0 + 1e-10) {
            std::ostringstream msg;
            msg << "reduce: ||X|| = " << norm << " exceeds 1; rescale the term";
            throw InputError(msg.str());
        }
    }
    const Index rows = walk_rows_estimate(cl, true, opt.combineMode);
    if (rows * 4 * inst.dimension * inst.dimension > opt.maxWalkEntries) {
        throw InputError("reduce: enlarged walk space of dimension " + std::to_string(rows) + " is too large");
    }

    const ReductionResult red = reduce_to_davies(cl, opt.combineMode);
    check_reduction(report, red.report);
    report.section("reduction") = reduction_json(red.report);

    const Discriminant disc = discriminant_matrix(cl);
    const Matrix q = 0.5 * (disc.q + disc.q.adjoint());
    std::optional<GapCheck> gap;
    try {
        gap = gap_amplification_check(q);
        report.section("gaps") = {{"delta", gap->delta}, {"theta", gap->theta}, {"sqrt2Delta", gap->bound}};
    } catch (const std::invalid_argument& e) {
        report.warn(e.what());
    }
    const double scale = combine_scale(opt.combineMode, cl.terms.size());
    const bool uniqueTop = eigenvalue_multiplicity(q, 1.0, 1e-8) == 1;
    check_walk(report, red.walk, scale * q, scale == 1.0 ? &disc.purifiedFixedPoint : nullptr, gap, uniqueTop, opt);
    report.stop_timer("total");
    return report;
}

std::string spectra_csv(const Json& report)
{
    std::ostringstream out;
    out << std::setprecision(17);
    out << "quantity,subspace,index,re,im,phase\n";
    if (report.contains("spectra")) {
        const Json& s = report.at("spectra");
        if (s.contains("lindbladian")) {
            std::size_t i = 0;
            for (const auto& z : s.at("lindbladian")) {
                out << "lindbladian,," << i++ << "," << z[0].get<double>() << "," << z[1].get<double>() << ",\n";
            }
        }
        if (s.contains("discriminant")) {
            std::size_t i = 0;
            for (const auto& v : s.at("discriminant")) out << "discriminant,," << i++ << "," << v.get<double>() << ",0,\n";
        }
    }
    if (report.contains("walk")) {
        const Json& w = report.at("walk");
        std::size_t i = 0;
        for (const auto& p : w.at("phasesB")) {
            const double phase = p.get<double>();
            out << "walk,B," << i++ << "," << std::cos(phase) << "," << std::sin(phase) << "," << phase << "\n";
        }
        const auto zero = w.at("bperpPhaseZero").get<long long>();
        const auto pi = w.at("bperpPhasePi").get<long long>();
        for (long long k = 0; k < zero; ++k) out << "walk,Bperp," << i++ << ",1,0,0\n";
        for (long long k = 0; k < pi; ++k) out << "walk,Bperp," << i++ << ",-1,0," << std::acos(-1.0) << "\n";
    }
    return out.str();
}

namespace {

void emit(const std::string& text, const std::string& path, std::ostream& out)
{
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path);
    if (!file) throw InputError("cannot write '" + path + "'");
    file << text;
}

int exit_code(const Report& report) { return report.all_passed() ? kExitOk : kExitPropertyFailed; }

void print_failures(const Report& report, std::ostream& err)
{
    for (const auto& c : report.checks()) {
        if (!c.passed) err << "FAILED " << c.name << ": residual " << c.residual << " > tolerance " << c.tolerance << "\n";
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Detailed-balance, discriminant and quantum-walk analysis of Lindbladians"};
    app.require_subcommand(1);
    Index maxDim = max_dim_from_env();
    app.add_option("--max-dim", maxDim, "Largest accepted dimension (default: LSZ_MAX_DIM or 8)")->check(CLI::PositiveNumber);

    AnalysisOptions analysis;
    std::string fList = "one,sqrt,pow0.3";
    std::string mode = "state-prep";
    std::string instancePath;
    std::string outputPath;
    std::string csvPath;
    bool timings = false;

    auto addAnalysisFlags = [&](CLI::App* cmd) {
        cmd->add_option("instance", instancePath, "Instance JSON file")->required();
        cmd->add_option("--tolerance", analysis.tolerance, "Detailed-balance / f-independence / phase tolerance")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--f-functions", fList, "Comma-separated weights: one, sqrt, pow<s>");
        cmd->add_option("--combine-mode", mode, "state-prep or paper-theta");
        cmd->add_option("--output,-o", outputPath, "Write the report here instead of stdout");
        cmd->add_flag("--timings", timings, "Include wall-clock timings in the report");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "Run the full invariant suite on an instance");
    addAnalysisFlags(analyze);
    analyze->add_option("--csv", csvPath, "Also write the spectra as CSV");

    CLI::App* spectrum = app.add_subcommand("spectrum", "Dump the spectra of an instance as CSV");
    addAnalysisFlags(spectrum);

    CLI::App* reduce = app.add_subcommand("reduce", "Verify the reflection-coupling reduction of an instance");
    addAnalysisFlags(reduce);

    RandomOptions random;
    CLI::App* randomCmd = app.add_subcommand("random", "Generate a random instance");
    randomCmd->add_option("--kind", random.kind, "davies, canonical or channel");
    randomCmd->add_option("--dim,-d", random.dimension, "Hilbert-space dimension");
    randomCmd->add_option("--couplings,-n", random.couplings, "Number of couplings / canonical terms");
    randomCmd->add_option("--beta", random.beta, "Inverse temperature (davies; default: random in [0, 4])");
    randomCmd->add_option("--seed", random.seed, "Random seed");
    randomCmd->add_option("--output,-o", outputPath, "Write the instance here instead of stdout");

    RoundOptions round;
    CLI::App* roundCmd = app.add_subcommand("round", "Rounding promise, rounded Hamiltonian and overlap bound");
    roundCmd->add_option("instance", instancePath, "Davies instance JSON file")->required();
    roundCmd->add_option("--r,-r", round.r, "Pointer bits")->required();
    roundCmd->add_option("--alpha", round.alpha, "Promise parameter in (0, 1)")->required();
    roundCmd->add_option("--beta", round.beta, "Inverse temperature (default: the instance's)");
    roundCmd->add_option("--delta", round.delta, "Failure probability for the query-cost estimate");
    roundCmd->add_option("--output,-o", outputPath, "Write the report here instead of stdout");
    roundCmd->add_flag("--timings", timings, "Include wall-clock timings in the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }

    try {
        if (randomCmd->parsed()) {
            emit(cmd_random(random, maxDim).dump(2) + "\n", outputPath, out);
            return kExitOk;
        }
        analysis.fFunctions = parse_f_functions(fList);
        analysis.combineMode = parse_combine_mode(mode);
        const Instance inst = load_instance(instancePath, maxDim);

        std::optional<Report> report;
        if (analyze->parsed() || spectrum->parsed()) report = cmd_analyze(inst, analysis);
        else if (reduce->parsed()) report = cmd_reduce(inst, analysis);
        else report = cmd_round(inst, round);

        const Json json = report->to_json(timings);
        if (spectrum->parsed()) {
            emit(spectra_csv(json), outputPath, out);
        } else {
            emit(json.dump(2) + "\n", outputPath, out);
            if (!csvPath.empty()) emit(spectra_csv(json), csvPath, out);
        }
        for (const auto& w : json.at("warnings")) err << "warning: " << w.get<std::string>() << "\n";
        print_failures(*report, err);
        return exit_code(*report);
    } catch (const InputError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitPropertyFailed;
    }
}

}  // namespace lsz::cli
