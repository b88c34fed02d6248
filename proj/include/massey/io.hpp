#pragma once

// JSON and CSV encodings. Vertices and generator indices are 1-based on the wire.

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "massey/face_rings.hpp"
#include "massey/koszul.hpp"
#include "massey/lie.hpp"

namespace massey::io {

using json = nlohmann::json;

inline constexpr int kSchema = 1;

inline json wire_set(VSet s) {
    json a = json::array();
    for (int v : vertices_of(s)) a.push_back(v + 1);
    return a;
}

inline VSet read_set(const json& a, int m) {
    if (!a.is_array()) throw Error(ErrorKind::InvalidInput, "vertex set must be an array");
    VSet s = 0;
    for (const auto& x : a) {
        if (!x.is_number_integer()) throw Error(ErrorKind::InvalidInput, "vertices must be integers");
        int v = x.get<int>();
        if (v < 1 || v > m) throw Error(ErrorKind::InvalidInput, "vertex " + std::to_string(v) + " outside 1.." + std::to_string(m));
        s |= VSet(1) << (v - 1);
    }
    return s;
}

inline json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
    }
}

inline SimplicialComplex complex_from_json(const json& j) {
    if (!j.is_object() || !j.contains("m") || !j["m"].is_number_integer())
        throw Error(ErrorKind::InvalidInput, "complex needs an integer field \"m\"");
    const int m = j["m"].get<int>();
    if (m < 1 || m > 32) throw Error(ErrorKind::InvalidInput, "m must lie in 1..32");
    std::vector<VSet> sets;
    if (j.contains("minimal_nonfaces")) {
        for (const auto& a : j["minimal_nonfaces"]) sets.push_back(read_set(a, m));
        return SimplicialComplex::from_nonfaces(m, sets);
    }
    if (j.contains("facets")) {
        for (const auto& a : j["facets"]) sets.push_back(read_set(a, m));
        return SimplicialComplex::from_facets(m, sets);
    }
    throw Error(ErrorKind::InvalidInput, "complex needs \"minimal_nonfaces\" or \"facets\"");
}

inline json complex_to_json(const SimplicialComplex& K) {
    json nf = json::array();
    for (VSet s : K.minimal_nonfaces()) nf.push_back(wire_set(s));
    return json{{"m", K.m()}, {"minimal_nonfaces", nf}};
}

inline MonomialQuotient ring_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("gens")) throw Error(ErrorKind::InvalidInput, "ring needs \"n\" and \"gens\"");
    try {
        return MonomialQuotient::make(j["n"].get<int>(), j["gens"].get<std::vector<Exponent>>());
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("bad ring JSON: ") + e.what());
    }
}

inline json ring_to_json(const MonomialQuotient& A) { return json{{"n", A.n_vars}, {"gens", A.gens}}; }

inline GradedLie lie_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::InvalidInput, "Lie presentation must be an object");
    try {
        if (j.contains("name")) {
            const auto name = j["name"].get<std::string>();
            const int W = j.at("W").get<int>();
            if (name == "m0") return m0(W);
            if (name == "witt_plus") return witt_plus(W);
            throw Error(ErrorKind::InvalidInput, "unknown Lie algebra '" + name + "'");
        }
        GradedLie g;
        g.name = "custom";
        for (const auto& x : j.at("generators")) g.generators.push_back({x.at("i").get<int>(), x.at("w").get<int>()});
        std::sort(g.generators.begin(), g.generators.end(), [](const auto& a, const auto& b) { return a.i < b.i; });
        if (j.contains("brackets"))
            for (const auto& b : j["brackets"]) {
                auto& terms = g.brackets[{b.at("i").get<int>(), b.at("j").get<int>()}];
                for (const auto& t : b.at("terms")) terms.emplace_back(t.at("k").get<int>(), Rationals{}.parse(t.at("c").get<std::string>()));
            }
        if (j.contains("truncation_weight")) g.truncation = j["truncation_weight"].get<int>();
        g.validate();
        if (!g.jacobi_holds()) throw Error(ErrorKind::InvalidInput, "brackets violate the Jacobi identity");
        return g;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("bad Lie JSON: ") + e.what());
    }
}

inline json betti_to_json(const BettiTable& T) {
    json entries = json::array();
    for (const auto& [k, d] : T.entries) entries.push_back({{"i", k.first}, {"I", wire_set(k.second)}, {"dim", d}});
    return json{{"field", T.field}, {"entries", entries}};
}

inline std::string betti_to_csv(const BettiTable& T) {
    std::ostringstream os;
    os << "i,I,dim\n";
    for (const auto& [k, d] : T.entries) {
        os << k.first << ",\"";
        bool first = true;
        for (int v : vertices_of(k.second)) {
            os << (first ? "" : " ") << v + 1;
            first = false;
        }
        os << "\"," << d << "\n";
    }
    return os.str();
}

template <class F>
json scalars(const F& f, const std::vector<typename F::Scalar>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(f.to_string(x));
    return a;
}

/// Cochain of a DGA as {basis name: "p/q"}.
template <class F>
json cochain(const Dga<F>& A, const SparseVector<typename F::Scalar>& v) {
    json o = json::object();
    for (const auto& [i, x] : v) o[A.element(i).name] = A.field().to_string(x);
    return o;
}

template <class F>
json simplicial_cochain(const F& f, const SimplicialCochain<typename F::Scalar>& c) {
    json a = json::array();
    for (const auto& [s, x] : c) a.push_back({{"face", wire_set(s)}, {"value", f.to_string(x)}});
    return a;
}

template <class F>
json massey_outcome(const F& f, const MasseyOutcome<F>& out) {
    json layout = json::array();
    for (const auto& d : out.layout.degrees) layout.push_back(d.str());
    json indet = json::array();
    for (const auto& v : out.indeterminacy) indet.push_back(scalars(f, v));
    return json{{"status", to_string(out.status)},
                {"triviality", to_string(out.triviality)},
                {"complete", out.complete},
                {"affine", out.affine},
                {"layout", layout},
                {"value", scalars(f, out.value)},
                {"indeterminacy", indet},
                {"families", out.families.size()}};
}

inline json envelope(const std::string& command, const std::string& field) {
    return json{{"schema", kSchema}, {"command", command}, {"field", field}};
}

}  // namespace massey::io
