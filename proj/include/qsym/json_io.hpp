#pragma once

#include "json.hpp"

#include "qsym/cayley.hpp"
#include "qsym/partlin.hpp"
#include "qsym/sparse_tensor.hpp"

namespace qsym::json_io {

using json = nlohmann::ordered_json;

inline json to_json(const Q& q) { return to_string(q); }

inline json to_json(const Cyclotomic& x) {
    Cyclotomic c = x.normalized();
    json coeffs = json::array();
    for (const auto& q : c.coeffs()) coeffs.push_back(to_string(q));
    auto z = c.to_complex();
    return json{{"level", c.level()}, {"coeffs", coeffs}, {"approx", json::array({z.real(), z.imag()})}};
}

inline json to_json(const GroupElement& a) {
    json j = json::array();
    for (auto v : a) j.push_back(v);
    return j;
}

inline json to_json(const AbelianGroup& G, const GeneratingSet& S, const SpectralDecomposition& sp) {
    json gens = json::array();
    for (const auto& s : S.elems) gens.push_back(to_json(s));
    json eig = json::array();
    for (const auto& it : sp.items) {
        json labels = json::array();
        for (const auto& mu : it.labels) labels.push_back(to_json(mu));
        eig.push_back(json{{"value", to_json(it.value)}, {"multiplicity", it.labels.size()}, {"labels", labels}});
    }
    return json{{"group", json{{"orders", G.orders()}}}, {"gens", gens}, {"symmetric", S.symmetric}, {"eigenvalues", eig}};
}

template <class S>
json to_json(const SparseTensor<S>& T) {
    json entries = json::array();
    for (auto k : T.sorted_keys()) {
        const Index idx = T.decode(k);
        json v;
        if constexpr (std::is_same_v<S, Cyclotomic>)
            v = to_json(T.get_key(k));
        else
            v = to_json(Cyclotomic(T.get_key(k)));
        entries.push_back(json{{"idx", idx}, {"value", v}});
    }
    return json{{"shape", T.shape()}, {"out_axes", T.out_axes()}, {"entries", entries}};
}

inline json to_json(const PartLin& e) {
    json terms = json::array();
    for (const auto& [p, c] : e.terms()) terms.push_back(json{{"partition", p.str()}, {"coeff", c.str()}});
    return json{{"k", e.k()}, {"l", e.l()}, {"terms", terms}};
}

inline Cyclotomic cyclotomic_from_json(const json& j) {
    if (!j.is_object() || !j.contains("level") || !j.contains("coeffs")) throw invalid_input("cyclotomic JSON needs level and coeffs");
    int m = j.at("level").get<int>();
    if (m < 1) throw invalid_input("cyclotomic level must be positive");
    std::vector<Q> c;
    for (const auto& s : j.at("coeffs")) c.push_back(parse_rational(s.get<std::string>()));
    return Cyclotomic::from_powers(m, c);
}

}  // namespace qsym::json_io
