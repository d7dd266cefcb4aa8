#include "freeprob/serial.hpp"

#include "freeprob/errors.hpp"

namespace freeprob {

json to_json(const Partition& p) {
    json blocks = json::array();
    for (const auto& b : p.blocks()) blocks.push_back(b);
    return blocks;
}

Partition partition_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw DomainError("partition JSON must be a non-empty array");
    std::vector<std::vector<int>> blocks;
    int ground = 0;
    for (const auto& b : j) {
        std::vector<int> block = b.get<std::vector<int>>();
        for (int e : block) ground = std::max(ground, e);
        blocks.push_back(std::move(block));
    }
    return Partition(ground, std::move(blocks));
}

json to_json(const ExactScalar& z) {
    return json{{"re", rational_str(z.re)}, {"im", rational_str(z.im)}};
}

ExactScalar scalar_from_json(const json& j) {
    if (j.is_string()) return ExactScalar(parse_rational(j.get<std::string>()));
    if (j.is_number_integer()) return ExactScalar(Rational(j.get<long>()));
    Rational re = j.contains("re") ? parse_rational(j.at("re").get<std::string>()) : Rational(0);
    Rational im = j.contains("im") ? parse_rational(j.at("im").get<std::string>()) : Rational(0);
    return {re, im};
}

json to_json(const StarWord& w) {
    json letters = json::array();
    for (const auto& l : w.letters())
        letters.push_back(json{{"label", l.label}, {"exp", l.exp == Exp::One ? "1" : "*"}});
    return letters;
}

StarWord starword_from_json(const json& j) {
    std::vector<StarLetter> letters;
    for (const auto& e : j) {
        std::string exp = e.at("exp").get<std::string>();
        if (exp != "1" && exp != "*") throw DomainError("star-word exponent must be \"1\" or \"*\"");
        letters.push_back({e.at("label").get<std::string>(), exp == "1" ? Exp::One : Exp::Star});
    }
    if (letters.empty()) throw DomainError("star-word JSON must be non-empty");
    return StarWord(std::move(letters));
}

json to_json(const GramMatrix& g) {
    json basis = json::array();
    for (const auto& p : g.basis) basis.push_back(to_json(p));
    json rows = json::array();
    for (const auto& row : g.entries) {
        json r = json::array();
        for (const auto& e : row) r.push_back(e.get_str());
        rows.push_back(std::move(r));
    }
    return json{{"n", g.n}, {"k", g.k}, {"basis", basis}, {"G", rows}};
}

json to_json(const WeingartenMatrix& w) {
    json basis = json::array();
    for (const auto& p : w.basis) basis.push_back(to_json(p));
    json rows = json::array();
    for (const auto& row : w.entries) {
        json r = json::array();
        for (const auto& e : row) r.push_back(rational_str(e));
        rows.push_back(std::move(r));
    }
    return json{{"n", w.n}, {"k", w.k}, {"basis", basis}, {"W", rows}};
}

json to_json(const RationalInterval& iv) {
    return json::array({rational_str(iv.lo), rational_str(iv.hi)});
}

json to_json(const ShiCertificate& cert) {
    return json{{"lhs_pow", rational_str(cert.lhs_pow)},
                {"rhs_interval", to_json(cert.rhs_pow)},
                {"verdict", verdict_str(cert.verdict)},
                {"d", cert.d},
                {"m", cert.m},
                {"mode", cert.mode}};
}

json to_json(const AbcReport& r) {
    return json{{"d", r.d},
                {"m", r.m},
                {"A", r.count_eps.get_str()},
                {"A_pairings", r.count_eps_pairings.get_str()},
                {"A_vs_pairing_bound", verdict_str(r.a_vs_pairings)},
                {"A_vs_closed_form", verdict_str(r.a_vs_closed_form)},
                {"B_sq", rational_str(r.b_max_sq)},
                {"B_bound", verdict_str(r.b_bound)},
                {"C_interval", to_json(r.c_max)},
                {"C_bound", verdict_str(r.c_bound)},
                {"inner_lemma", r.inner_lemma_ok}};
}

json to_json(const CharacterReport& r) {
    json pows = json::array();
    for (const auto& v : r.norm_pows) pows.push_back(rational_str(v));
    return json{{"d", r.d},
                {"norm_pows", pows},
                {"fuss_catalan", r.fuss_catalan_ok},
                {"monotone", r.monotone_ok},
                {"bound", r.bound_ok}};
}

json to_json(const MultiplierReport& r) {
    return json{{"m", r.m},
                {"K_psi_sq", rational_str(r.k_psi_sq)},
                {"lhs_pow", rational_str(r.lhs_pow)},
                {"rhs_interval", to_json(r.rhs_pow)},
                {"verdict", verdict_str(r.verdict)}};
}

json to_json(const FreeGroupReport& r) {
    json out{{"d", r.d},
             {"m", r.m},
             {"semigroup", r.semigroup},
             {"norm_2m_pow", rational_str(r.norm_2m_pow)},
             {"l2_sq", rational_str(r.l2_sq)},
             {"classical", verdict_str(r.classical)}};
    if (r.strong_applicable) out["strong"] = verdict_str(r.strong);
    return out;
}

json to_json(const OracleReport& r) {
    json out{{"checked", r.checked}, {"mismatches", r.mismatches}};
    if (!r.first_mismatch.empty()) out["first_mismatch"] = r.first_mismatch;
    return out;
}

json to_json(const InvarianceReport& r) {
    json out{{"passed", r.passed}, {"words_checked", r.words_checked}};
    if (!r.first_violation.empty()) out["first_violation"] = r.first_violation;
    return out;
}

json to_json(const ReducedWord& w) {
    return json(w.letters());
}

ReducedWord word_from_json(const json& j) {
    std::vector<int> letters = j.get<std::vector<int>>();
    return ReducedWord::reduce(letters);
}

json to_json(const GroupFunction& f) {
    json out = json::array();
    for (const auto& [w, c] : f.support())
        out.push_back(json{{"word", to_json(w)}, {"coeff", to_json(c)}});
    return out;
}

GroupFunction groupfn_from_json(const json& j) {
    GroupFunction f;
    for (const auto& item : j)
        f.add(word_from_json(item.at("word")), scalar_from_json(item.at("coeff")));
    return f;
}

json to_json(const HomPolynomial& T) {
    json coeffs = json::array();
    for (const auto& [idx, a] : T.support())
        coeffs.push_back(json{{"index", idx}, {"value", to_json(a)}});
    return json{{"degree", T.degree()}, {"coeffs", coeffs}};
}

HomPolynomial hompoly_from_json(const json& j) {
    HomPolynomial T(j.at("degree").get<int>());
    for (const auto& item : j.at("coeffs"))
        T.set(item.at("index").get<std::vector<std::string>>(), scalar_from_json(item.at("value")));
    return T;
}

json to_json(const ArrayPolynomial& T) {
    json coeffs = json::array();
    for (const auto& [key, a] : T.support())
        coeffs.push_back(json{{"rows", key.first}, {"cols", key.second}, {"value", to_json(a)}});
    return json{{"degree", T.degree()}, {"dim", T.dim()}, {"coeffs", coeffs}};
}

ArrayPolynomial arraypoly_from_json(const json& j) {
    ArrayPolynomial T(j.at("degree").get<int>(), j.at("dim").get<int>());
    for (const auto& item : j.at("coeffs"))
        T.set(item.at("rows").get<std::vector<int>>(), item.at("cols").get<std::vector<int>>(),
              scalar_from_json(item.at("value")));
    return T;
}

}  // namespace freeprob
