#include "lsz/cli/instance_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace lsz::cli {

namespace {

const Json& require(const Json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing field '" + key + "'");
    return j.at(key);
}

double number(const Json& j, const std::string& where)
{
    if (!j.is_number()) throw InputError(where + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw InputError(where + ": not finite");
    return v;
}

Complex complex_from_json(const Json& j, const std::string& where)
{
    if (j.is_number()) return {number(j, where), 0.0};
    if (j.is_array() && j.size() == 2) return {number(j[0], where), number(j[1], where)};
    throw InputError(where + ": expected a number or a [re, im] pair");
}

std::string at(const std::string& where, std::size_t i)
{
    return where + "[" + std::to_string(i) + "]";
}

SpectralDecomposition hamiltonian_from_json(const Json& j, Index d, double tol, const std::string& where)
{
    if (j.is_object()) {
        const Json& values = require(j, "eigenvalues", where);
        if (!values.is_array() || static_cast<Index>(values.size()) != d) {
            throw InputError(where + ".eigenvalues: expected " + std::to_string(d) + " entries");
        }
        const Matrix basis = j.contains("basis") ? matrix_from_json(j.at("basis"), d, d, where + ".basis") : identity(d);
        if (operator_norm(basis.adjoint() * basis - identity(d)) > 1e-10) {
            throw InputError(where + ".basis: columns are not orthonormal");
        }
        std::vector<double> eigen;
        std::vector<Matrix> projectors;
        for (Index i = 0; i < d; ++i) {
            eigen.push_back(number(values[static_cast<std::size_t>(i)], at(where + ".eigenvalues", static_cast<std::size_t>(i))));
            projectors.push_back(basis.col(i) * basis.col(i).adjoint());
        }
        return make_decomposition(eigen, projectors, tol);
    }
    const Matrix h = matrix_from_json(j, d, d, where);
    try {
        return eig_hermitian(h, tol);
    } catch (const NonHermitianError& e) {
        std::ostringstream msg;
        msg << where << ": not hermitian (residual " << e.residual() << ")";
        throw InputError(msg.str());
    }
}

Json hamiltonian_to_json(const SpectralDecomposition& h)
{
    // One orthonormal eigenvector per unit of rank, in eigenvalue order.
    const Index d = h.dimension();
    Json values = Json::array();
    Matrix basis(d, d);
    Index col = 0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(h.projectors[k]);
        for (Index i = d - h.rank(k); i < d; ++i) {
            basis.col(col++) = eig.eigenvectors().col(i);
            values.push_back(h.eigenvalues[k]);
        }
    }
    return {{"eigenvalues", values}, {"basis", matrix_to_json(basis)}};
}

FilterKind filter_from_json(const Json& j, const std::string& where)
{
    if (!j.is_string()) throw InputError(where + ": expected a string");
    const auto s = j.get<std::string>();
    if (s == "metropolis") return FilterKind::Metropolis;
    if (s == "glauber") return FilterKind::Glauber;
    throw InputError(where + ": unknown filter '" + s + "' (metropolis, glauber)");
}

bool flag(const Json& j, const char* key, const std::string& where)
{
    if (!j.contains(key)) return false;
    if (!j.at(key).is_boolean()) throw InputError(where + "." + key + ": expected a boolean");
    return j.at(key).get<bool>();
}

DaviesInstance parse_davies(const Json& j, Index d, const InstanceOptions& opt)
{
    const std::string where = "davies";
    DaviesInstance inst;
    inst.hamiltonian = hamiltonian_from_json(require(j, "hamiltonian", where), d, opt.groupingTolerance, where + ".hamiltonian");
    inst.beta = number(require(j, "beta", where), where + ".beta");
    if (j.contains("filter")) inst.filter = filter_from_json(j.at("filter"), where + ".filter");
    inst.normalizeGlauber = flag(j, "normalizeGlauber", where);
    inst.dropZeroFrequency = flag(j, "dropZeroFrequency", where);
    const Json& couplings = require(j, "couplings", where);
    if (!couplings.is_array() || couplings.empty()) throw InputError(where + ".couplings: expected a non-empty array");
    for (std::size_t a = 0; a < couplings.size(); ++a) {
        const std::string w = at(where + ".couplings", a);
        Coupling c;
        c.s = matrix_from_json(require(couplings[a], "operator", w), d, d, w + ".operator");
        c.weight = couplings[a].contains("weight") ? number(couplings[a].at("weight"), w + ".weight")
                                                   : 1.0 / static_cast<double>(couplings.size());
        inst.couplings.push_back(std::move(c));
    }
    try {
        inst.validate(false);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    return inst;
}

CanonicalLindbladian parse_canonical(const Json& j, Index d, const InstanceOptions& opt)
{
    const std::string where = "canonical";
    const Matrix sigma = matrix_from_json(require(j, "sigma", where), d, d, where + ".sigma");
    std::optional<ReferenceState> ref;
    try {
        ref = ReferenceState::from_density(sigma, opt.groupingTolerance);
    } catch (const std::exception& e) {
        throw InputError(std::string("canonical.sigma: ") + e.what());
    }
    SpectralDecomposition freq = ref->h_decomposition();
    double scale = 1.0;
    if (j.contains("frequencyHamiltonian")) {
        const Json& fh = j.at("frequencyHamiltonian");
        freq = hamiltonian_from_json(require(fh, "hamiltonian", where + ".frequencyHamiltonian"), d,
                                     opt.groupingTolerance, where + ".frequencyHamiltonian.hamiltonian");
        scale = number(require(fh, "scale", where + ".frequencyHamiltonian"), where + ".frequencyHamiltonian.scale");
    }
    CanonicalLindbladian cl{std::move(*ref), std::move(freq), scale, {}};
    const Json& terms = require(j, "terms", where);
    if (!terms.is_array() || terms.empty()) throw InputError(where + ".terms: expected a non-empty array");
    for (std::size_t a = 0; a < terms.size(); ++a) {
        const std::string w = at(where + ".terms", a);
        CanonicalTerm term;
        term.weight = terms[a].contains("weight") ? number(terms[a].at("weight"), w + ".weight")
                                                  : 1.0 / static_cast<double>(terms.size());
        const Json& jumps = require(terms[a], "jumps", w);
        if (!jumps.is_array() || jumps.empty()) throw InputError(w + ".jumps: expected a non-empty array");
        for (std::size_t i = 0; i < jumps.size(); ++i) {
            const std::string wj = at(w + ".jumps", i);
            CanonicalJump jump;
            jump.omega = number(require(jumps[i], "theta", wj), wj + ".theta");
            jump.x = matrix_from_json(require(jumps[i], "operator", wj), d, d, wj + ".operator");
            jump.rate = number(require(jumps[i], "rate", wj), wj + ".rate");
            term.jumps.push_back(std::move(jump));
        }
        std::sort(term.jumps.begin(), term.jumps.end(),
                  [](const CanonicalJump& x, const CanonicalJump& y) { return x.omega < y.omega; });
        cl.terms.push_back(std::move(term));
    }
    return cl;
}

QuantumChannel parse_channel(const Json& j, Index d, std::optional<Matrix>& sigma)
{
    const std::string where = "channel";
    const Json& kraus = require(j, "kraus", where);
    if (!kraus.is_array() || kraus.empty()) throw InputError(where + ".kraus: expected a non-empty array");
    QuantumChannel ch;
    for (std::size_t i = 0; i < kraus.size(); ++i) {
        ch.krausOps.push_back(matrix_from_json(kraus[i], d, d, at(where + ".kraus", i)));
    }
    const double residual = ch.completeness_residual();
    if (residual > 1e-10) {
        std::ostringstream msg;
        msg << where << ".kraus: not trace preserving (||sum A^dag A - I|| = " << residual << ")";
        throw InputError(msg.str());
    }
    if (j.contains("sigma")) sigma = matrix_from_json(j.at("sigma"), d, d, where + ".sigma");
    return ch;
}

}  // namespace

std::string to_string(InstanceKind kind)
{
    switch (kind) {
    case InstanceKind::Davies: return "davies";
    case InstanceKind::Canonical: return "canonical";
    case InstanceKind::Channel: return "channel";
    }
    return "unknown";
}

Matrix matrix_from_json(const Json& j, Index rows, Index cols, const std::string& where)
{
    if (!j.is_array() || static_cast<Index>(j.size()) != rows) {
        throw InputError(where + ": expected " + std::to_string(rows) + " rows");
    }
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const Json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
            throw InputError(at(where, static_cast<std::size_t>(i)) + ": expected " + std::to_string(cols) + " entries");
        }
        for (Index k = 0; k < cols; ++k) {
            m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)],
                                        at(at(where, static_cast<std::size_t>(i)), static_cast<std::size_t>(k)));
        }
    }
    return m;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const Matrix& m)
{
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Instance parse_instance(const Json& j, Index maxDim)
{
    if (!j.is_object()) throw InputError("instance: top level must be an object");
    const Json& version = require(j, "schemaVersion", "instance");
    if (!version.is_string() || version.get<std::string>() != kSchemaVersion) {
        throw InputError(std::string("instance.schemaVersion: expected \"") + kSchemaVersion + "\"");
    }
    Instance out;
    const Json& kind = require(j, "kind", "instance");
    const std::string k = kind.is_string() ? kind.get<std::string>() : "";
    if (k == "davies") out.kind = InstanceKind::Davies;
    else if (k == "canonical") out.kind = InstanceKind::Canonical;
    else if (k == "channel") out.kind = InstanceKind::Channel;
    else throw InputError("instance.kind: expected davies, canonical or channel");

    const Json& dim = require(j, "dimension", "instance");
    if (!dim.is_number_integer() || dim.get<long long>() < 1) throw InputError("instance.dimension: expected a positive integer");
    out.dimension = dim.get<Index>();
    if (out.dimension > maxDim) {
        throw InputError("instance.dimension: " + std::to_string(out.dimension) + " exceeds the maximum " +
                         std::to_string(maxDim) + " (--max-dim / LSZ_MAX_DIM)");
    }
    if (j.contains("options")) {
        const Json& opt = j.at("options");
        if (!opt.is_object()) throw InputError("instance.options: expected an object");
        if (opt.contains("groupingTolerance")) {
            out.options.groupingTolerance = number(opt.at("groupingTolerance"), "instance.options.groupingTolerance");
            if (!(out.options.groupingTolerance > 0.0)) throw InputError("instance.options.groupingTolerance: must be positive");
        }
    }

    switch (out.kind) {
    case InstanceKind::Davies: out.davies = parse_davies(require(j, "davies", "instance"), out.dimension, out.options); break;
    case InstanceKind::Canonical:
        out.canonical = parse_canonical(require(j, "canonical", "instance"), out.dimension, out.options);
        break;
    case InstanceKind::Channel:
        out.channel = parse_channel(require(j, "channel", "instance"), out.dimension, out.channelSigma);
        break;
    }
    out.digest = fnv1a64_hex(j.dump());
    return out;
}

Instance load_instance(const std::string& path, Index maxDim)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open instance file '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw InputError("instance file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_instance(j, maxDim);
}

Index max_dim_from_env()
{
    const char* env = std::getenv("LSZ_MAX_DIM");
    if (env == nullptr) return kDefaultMaxDim;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) return kDefaultMaxDim;
    return static_cast<Index>(v);
}

std::string fnv1a64_hex(const std::string& bytes)
{
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << hash;
    return out.str();
}

Json davies_to_json(const DaviesInstance& inst)
{
    Json couplings = Json::array();
    for (const auto& c : inst.couplings) couplings.push_back({{"operator", matrix_to_json(c.s)}, {"weight", c.weight}});
    return {{"schemaVersion", kSchemaVersion},
            {"kind", "davies"},
            {"dimension", inst.dimension()},
            {"davies",
             {{"hamiltonian", hamiltonian_to_json(inst.hamiltonian)},
              {"beta", inst.beta},
              {"filter", inst.filter == FilterKind::Metropolis ? "metropolis" : "glauber"},
              {"normalizeGlauber", inst.normalizeGlauber},
              {"dropZeroFrequency", inst.dropZeroFrequency},
              {"couplings", couplings}}}};
}

Json canonical_to_json(const CanonicalLindbladian& cl)
{
    Json terms = Json::array();
    for (const auto& term : cl.terms) {
        Json jumps = Json::array();
        for (const auto& jump : term.jumps) {
            jumps.push_back({{"theta", jump.omega}, {"operator", matrix_to_json(jump.x)}, {"rate", jump.rate}});
        }
        terms.push_back({{"weight", term.weight}, {"jumps", jumps}});
    }
    Json body = {{"sigma", matrix_to_json(cl.reference.sigma())}, {"terms", terms}};
    if (cl.frequencyScale != 1.0) {
        body["frequencyHamiltonian"] = {{"hamiltonian", hamiltonian_to_json(cl.frequencyHamiltonian)},
                                        {"scale", cl.frequencyScale}};
    }
    return {{"schemaVersion", kSchemaVersion},
            {"kind", "canonical"},
            {"dimension", cl.reference.dimension()},
            {"canonical", body}};
}

Json channel_to_json(const QuantumChannel& ch, const Matrix* sigma)
{
    Json kraus = Json::array();
    for (const auto& a : ch.krausOps) kraus.push_back(matrix_to_json(a));
    Json body = {{"kraus", kraus}};
    if (sigma != nullptr) body["sigma"] = matrix_to_json(*sigma);
    return {{"schemaVersion", kSchemaVersion}, {"kind", "channel"}, {"dimension", ch.dimension()}, {"channel", body}};
}

}  // namespace lsz::cli
