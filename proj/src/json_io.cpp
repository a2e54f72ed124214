// Copyright (c) the opext authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include "opext/json_io.hpp"

#include <charconv>
#include <stdexcept>

namespace opext::io {

std::string double_str(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2) return cplx(j[0].get<double>(), j[1].get<double>());
    throw std::invalid_argument("complex_from_json: expected number or [re, im]");
}

json rat_to_json(const Rat& r) {
    if (rat_fits_double(r)) return json(to_double(r));
    return json(rat_str(r));
}

Rat rat_from_json(const json& j) {
    if (j.is_number()) return rat_of_double(j.get<double>());
    if (j.is_string()) return rat_parse(j.get<std::string>());
    throw std::invalid_argument("rat_from_json: expected number or 'p/q' string");
}

json to_json(const IndexSet& s) {
    switch (s.kind) {
        case IndexKind::Naturals: return json("naturals");
        case IndexKind::Integers: return json("integers");
        case IndexKind::Finite: return json::object({{"finite", s.n}});
    }
    throw std::logic_error("indexset to_json");
}

IndexSet indexset_from_json(const json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "naturals") return IndexSet::naturals();
        if (s == "integers") return IndexSet::integers();
        throw std::invalid_argument("indexset_from_json: unknown kind '" + s + "'");
    }
    if (j.is_object() && j.contains("finite")) return IndexSet::finite(j["finite"].get<long>());
    throw std::invalid_argument("indexset_from_json: malformed index set");
}

json to_json(const WeightSeq& w) {
    json core = json::array();
    for (const auto& r : w.core) core.push_back(rat_to_json(r));
    return json{{"left", rat_to_json(w.left_tail)},
                {"core", core},
                {"offset", w.core_offset},
                {"right", rat_to_json(w.right_tail)}};
}

WeightSeq weightseq_from_json(const json& j) {
    std::vector<Rat> core;
    if (j.contains("core"))
        for (const auto& e : j["core"]) core.push_back(rat_from_json(e));
    return WeightSeq(rat_from_json(j.at("left")), core, j.value("offset", 0L), rat_from_json(j.at("right")));
}

namespace {
const char* normp_str(NormP p) { return p == NormP::One ? "1" : (p == NormP::Two ? "2" : "sup"); }
NormP normp_parse(const std::string& s) {
    if (s == "1") return NormP::One;
    if (s == "2") return NormP::Two;
    if (s == "sup") return NormP::Sup;
    throw std::invalid_argument("normp_parse: expected '1', '2' or 'sup'");
}
}  // namespace

json to_json(const SeqVector& v) {
    json j{{"p", normp_str(v.p)}};
    if (v.single_block()) {
        IndexSet is = v.blocks.empty() ? IndexSet::integers() : v.blocks.begin()->second.iset;
        j["index_set"] = to_json(is);
        json entries = json::array();
        if (!v.blocks.empty())
            for (const auto& [n, z] : v.blocks.begin()->second.entries)
                entries.push_back(json::array({n, complex_to_json(z)}));
        j["entries"] = entries;
        return j;
    }
    json blocks = json::object();
    for (const auto& [k, b] : v.blocks) {
        json entries = json::array();
        for (const auto& [n, z] : b.entries) entries.push_back(json::array({n, complex_to_json(z)}));
        blocks[std::to_string(k)] = json{{"index_set", to_json(b.iset)}, {"entries", entries}};
    }
    j["blocks"] = blocks;
    return j;
}

SeqVector seqvector_from_json(const json& j) {
    SeqVector v(normp_parse(j.value("p", std::string("2"))));
    if (j.contains("entries")) {
        v.set_block_iset(0, j.contains("index_set") ? indexset_from_json(j["index_set"]) : IndexSet::integers());
        for (const auto& e : j["entries"]) v.set(0, e[0].get<long>(), complex_from_json(e[1]));
        return v;
    }
    for (const auto& [key, bj] : j.at("blocks").items()) {
        int k = std::stoi(key);
        v.set_block_iset(k, indexset_from_json(bj.at("index_set")));
        for (const auto& e : bj.at("entries")) v.set(k, e[0].get<long>(), complex_from_json(e[1]));
    }
    return v;
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (long i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (long j2 = 0; j2 < m.cols(); ++j2) row.push_back(complex_to_json(m(i, j2)));
        rows.push_back(row);
    }
    return rows;
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
    long rows = static_cast<long>(j.size());
    if (rows == 0) throw std::invalid_argument("matrix_from_json: empty matrix");
    long cols = static_cast<long>(j[0].size());
    Eigen::MatrixXcd m(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long k = 0; k < cols; ++k) m(i, k) = complex_from_json(j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
    return m;
}

json to_json(const Operator& op) {
    switch (op.kind) {
        case Operator::Kind::Dense:
            return json{{"variant", "dense"}, {"matrix", matrix_to_json(op.dense)}};
        case Operator::Kind::WeightedShift:
            return json{{"variant", "weighted_shift"}, {"index_set", to_json(op.iset)}, {"weights", to_json(op.weights)}};
        case Operator::Kind::Diagonal:
            return json{{"variant", "diagonal"}, {"index_set", to_json(op.iset)}, {"weights", to_json(op.weights)}};
        case Operator::Kind::DirectSum: {
            json parts = json::array();
            for (const auto& p : op.parts) parts.push_back(to_json(p));
            return json{{"variant", "direct_sum"}, {"summands", parts}};
        }
        case Operator::Kind::Block2x2: {
            json parts = json::array();
            for (const auto& p : op.parts) parts.push_back(to_json(p));
            return json{{"variant", "block2x2"}, {"blocks", parts}};
        }
        case Operator::Kind::AffineShift:
            return json{{"variant", "affine_shift"}, {"lambda", complex_to_json(op.scalar)}, {"base", to_json(op.parts[0])}};
        case Operator::Kind::Scaled:
            return json{{"variant", "scaled"}, {"factor", complex_to_json(op.scalar)}, {"base", to_json(op.parts[0])}};
    }
    throw std::logic_error("operator to_json");
}

Operator operator_from_json(const json& j) {
    std::string v = j.at("variant").get<std::string>();
    if (v == "dense") return Operator::dense_op(matrix_from_json(j.at("matrix")));
    if (v == "weighted_shift")
        return Operator::weighted_shift(weightseq_from_json(j.at("weights")), indexset_from_json(j.at("index_set")));
    if (v == "diagonal")
        return Operator::diagonal(weightseq_from_json(j.at("weights")), indexset_from_json(j.at("index_set")));
    if (v == "direct_sum") {
        std::vector<Operator> parts;
        for (const auto& p : j.at("summands")) parts.push_back(operator_from_json(p));
        return Operator::direct_sum(std::move(parts));
    }
    if (v == "block2x2") {
        std::vector<Operator> parts;
        for (const auto& p : j.at("blocks")) parts.push_back(operator_from_json(p));
        if (parts.size() != 4) throw std::invalid_argument("operator_from_json: block2x2 needs 4 blocks");
        return Operator::block2x2(parts[0], parts[1], parts[2], parts[3]);
    }
    if (v == "affine_shift")
        return Operator::affine_shift(operator_from_json(j.at("base")), complex_from_json(j.at("lambda")));
    if (v == "scaled")
        return Operator::scaled(operator_from_json(j.at("base")), complex_from_json(j.at("factor")));
    throw std::invalid_argument("operator_from_json: unknown variant '" + v + "'");
}

json to_json(const CertifiedValue& cv) {
    return json{{"value", cv.value}, {"radius", cv.radius}, {"note", cv.note}};
}

json to_json(const SpectrumDesc& s) {
    switch (s.kind) {
        case SpectrumDesc::Kind::FinitePoints: {
            json pts = json::array();
            for (auto z : s.points) pts.push_back(complex_to_json(z));
            return json{{"kind", "finite_points"}, {"points", pts}};
        }
        case SpectrumDesc::Kind::CircleUnion:
            return json{{"kind", "circle_union"}, {"radii", s.radii}};
        case SpectrumDesc::Kind::Annulus:
            return json{{"kind", "annulus"}, {"inner", s.inner()}, {"outer", s.outer()}};
        case SpectrumDesc::Kind::AnnulusUnion: {
            json an = json::array();
            for (auto [i, o] : s.annuli) an.push_back(json{{"inner", i}, {"outer", o}});
            return json{{"kind", "annulus_union"}, {"annuli", an}};
        }
    }
    throw std::logic_error("spectrum to_json");
}

namespace {
const char* bundle_kind_str(extend::ExtensionBundle::Kind k) {
    using K = extend::ExtensionBundle::Kind;
    switch (k) {
        case K::TrivialDense: return "trivial_dense";
        case K::MinimalShift: return "minimal_shift";
        case K::PolarDense: return "polar_dense";
        case K::PolarShift: return "polar_shift";
    }
    return "?";
}
}  // namespace

json to_json(const extend::ExtensionBundle& b) {
    json j{{"kind", bundle_kind_str(b.kind)},
           {"c", b.c},
           {"minimal", b.minimal},
           {"ambient", b.ambient.str()},
           {"p", normp_str(b.ambient.p)},
           {"A", to_json(b.A)}};
    using K = extend::ExtensionBundle::Kind;
    if (b.kind == K::TrivialDense) j["A_inv"] = matrix_to_json(b.Ainv);
    if (b.kind == K::PolarDense) {
        j["U"] = matrix_to_json(b.U);
        j["P"] = matrix_to_json(b.P);
        j["B_tilde"] = matrix_to_json(b.Btilde);
        j["B_tilde_inv"] = matrix_to_json(b.BtildeInv);
    }
    return j;
}

extend::ExtensionBundle bundle_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    Operator A = operator_from_json(j.at("A"));
    double c = j.at("c").get<double>();
    NormP p = normp_parse(j.value("p", std::string("2")));
    if (kind == "minimal_shift") return extend::minimal_invertible_extension(A, extend::ComplementDesc::orthocomplement(), c, p);
    if (kind == "trivial_dense") return extend::minimal_invertible_extension(A, extend::ComplementDesc::orthocomplement(), c, p);
    if (kind == "polar_dense") return extend::polar_extension(A, c, j.value("minimal", false));
    if (kind == "polar_shift") return extend::polar_extension(A, c, j.value("minimal", true));
    throw std::invalid_argument("bundle_from_json: unknown kind '" + kind + "'");
}

json to_json(const shifts::SplitResult& s) {
    auto geom = [](const shifts::GeomSeq& g) {
        json core = json::array();
        for (const auto& r : g.core) core.push_back(rat_to_json(r));
        return json{{"lo", g.lo},
                    {"hi", g.hi},
                    {"core", core},
                    {"left_ratio", rat_to_json(g.left_ratio)},
                    {"right_ratio", rat_to_json(g.right_ratio)}};
    };
    return json{{"w", to_json(s.w)},
                {"sigma", rat_to_json(s.sigma)},
                {"tau", rat_to_json(s.tau)},
                {"a", geom(s.a)},
                {"b", geom(s.b)},
                {"alpha", to_json(s.alpha)},
                {"beta", to_json(s.beta)},
                {"kappa1", s.kappa1},
                {"kappa2", s.kappa2}};
}

json to_json(const semi::CombParams& p) {
    return json{{"c", rat_to_json(p.c)},         {"M", rat_to_json(p.M)},
                {"eps", rat_to_json(p.eps)},     {"k_eps", p.k_eps},
                {"eps_prime", rat_to_json(p.eps_prime)}, {"h", rat_to_json(p.h)}};
}

semi::CombParams combparams_from_json(const json& j) {
    return semi::comb_build(rat_from_json(j.at("c")), rat_from_json(j.at("M")), rat_from_json(j.at("eps")));
}

json to_json(const semi::SemigroupModel& m) {
    if (m.kind == semi::SemigroupModel::Kind::MatrixExp)
        return json{{"variant", "matrix_exp"}, {"A", matrix_to_json(m.A)}};
    return json{{"variant", "comb"}, {"params", to_json(m.comb)}};
}

semi::SemigroupModel model_from_json(const json& j) {
    std::string v = j.at("variant").get<std::string>();
    if (v == "matrix_exp") return semi::SemigroupModel::matrix_exp(matrix_from_json(j.at("A")));
    if (v == "comb") {
        const json& p = j.at("params");
        return semi::SemigroupModel::comb_model(combparams_from_json(p));
    }
    throw std::invalid_argument("model_from_json: unknown variant '" + v + "'");
}

}  // namespace opext::io
