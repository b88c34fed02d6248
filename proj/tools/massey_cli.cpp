// massey_cli: batch front-end over the massey headers.
//
// Exit codes: 0 ok, 1 failed invariant, 2 bad input, 3 cap exceeded.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "massey/face_rings.hpp"
#include "massey/generators.hpp"
#include "massey/io.hpp"
#include "massey/koszul.hpp"
#include "massey/lie.hpp"

using namespace massey;
using io::json;

namespace {

struct Config {
    std::string field = "q";
    int wmax = 8;
    int qmax = 3;
    int order_cap = -1;
    std::size_t budget = 8;
    std::uint64_t seed = 1;
    std::string in;
    std::string out;
    std::string format = "json";
    int cap = kDefaultVertexCap;

    // subcommand arguments
    std::string supports, dims, classes, kinds, j;
    std::string kind;
    int n = 3, m = 5, r = 2, k = 1, order = 6;
    std::size_t stop_after = 0;
    bool inhomogeneous = false;
    bool all = false;
};

std::string read_input(const Config& c) {
    if (c.in.empty() || c.in == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream f(c.in);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot open " + c.in);
    return {std::istreambuf_iterator<char>(f), {}};
}

class Output {
public:
    explicit Output(const Config& c) {
        if (!c.out.empty()) {
            file_.open(c.out);
            if (!file_) throw Error(ErrorKind::InvalidInput, "cannot write " + c.out);
        }
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }
    void line(const json& j) { os() << j.dump() << "\n" << std::flush; }
    void doc(const json& j) { os() << j.dump(2) << "\n"; }

private:
    std::ofstream file_;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

int to_int(const std::string& s) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidInput, "not an integer: '" + s + "'");
    }
}

std::vector<int> int_list(const std::string& s) {
    std::vector<int> out;
    for (const auto& t : split(s, ',')) out.push_back(to_int(t));
    return out;
}

/// "1,4;2,5;3,6" -> vertex masks (1-based on the wire).
std::vector<VSet> parse_supports(const std::string& s, int m) {
    if (s.empty()) throw Error(ErrorKind::InvalidInput, "--supports is required");
    std::vector<VSet> out;
    for (const auto& grp : split(s, ';')) {
        VSet I = 0;
        for (int v : int_list(grp)) {
            if (v < 1 || v > m) throw Error(ErrorKind::InvalidInput, "support vertex " + std::to_string(v) + " out of range");
            I |= VSet(1) << (v - 1);
        }
        if (!I) throw Error(ErrorKind::InvalidInput, "empty support");
        out.push_back(I);
    }
    return out;
}

SimplicialComplex load_complex(const json& j) {
    if (j.contains("n") && j.contains("gens")) return polarization(io::ring_from_json(j));
    return io::complex_from_json(j);
}

bool is_lie(const json& j) { return j.is_object() && (j.contains("generators") || j.contains("name")); }

MasseyOptions options(const Config& c) {
    MasseyOptions o;
    o.budget = c.budget;
    o.seed = c.seed;
    o.homogeneous = !c.inhomogeneous;
    return o;
}

/// Exterior forms "e1;e2^e5+-3*e3^e4" -> cochains of the window.
template <class F>
std::vector<SparseVector<typename F::Scalar>> parse_forms(const CEWindow<F>& win, const std::string& s) {
    if (s.empty()) throw Error(ErrorKind::InvalidInput, "--classes is required");
    const auto& f = win.dga->field();
    std::vector<SparseVector<typename F::Scalar>> out;
    for (const auto& cls : split(s, ';')) {
        SparseVector<typename F::Scalar> v;
        for (const auto& term : split(cls, '+')) {
            std::string mono = term;
            auto coef = f.one();
            if (auto star = term.find('*'); star != std::string::npos) {
                coef = f.parse(term.substr(0, star));
                mono = term.substr(star + 1);
            } else if (!mono.empty() && mono[0] == '-') {
                coef = -f.one();
                mono = mono.substr(1);
            }
            std::vector<int> idx;
            for (const auto& e : split(mono, '^')) {
                if (e.size() < 2 || e[0] != 'e') throw Error(ErrorKind::InvalidInput, "bad monomial '" + mono + "'");
                idx.push_back(to_int(e.substr(1)));
            }
            if (idx.empty()) throw Error(ErrorKind::InvalidInput, "empty term in '" + cls + "'");
            axpy(v, coef, win.form(idx));
        }
        out.push_back(v);
    }
    return out;
}

// ---- subcommands ----

template <class F>
void cmd_cohomology(const F& f, const Config& c, Output& o) {
    auto g = io::lie_from_json(io::parse(read_input(c)));
    auto win = ce_window(f, g, c.qmax, c.wmax);
    json table = json::array();
    for (int q = 0; q <= c.qmax; ++q)
        for (int w = 0; w <= c.wmax; ++w) {
            auto d = win.degree(q, w);
            std::size_t b = win.dga->has_degree(d) ? win.pieces->at(d).betti() : 0;
            if (b || c.all) table.push_back({{"q", q}, {"w", w}, {"dim", b}});
        }
    auto r = io::envelope("cohomology", f.name());
    r["algebra"] = g.name;
    r["qmax"] = c.qmax;
    r["wmax"] = c.wmax;
    r["table"] = table;
    o.doc(r);
}

template <class F>
void cmd_goncharova(const F& f, const Config& c, Output& o) {
    auto t = goncharova_table(f, c.qmax, c.wmax);
    json table = json::array();
    bool matches = true;
    for (const auto& [qw, d] : t) {
        const auto [q, w] = qw;
        // ones exactly at w = (3q^2 -+ q)/2
        bool expected = w == q * (3 * q - 1) / 2 || w == q * (3 * q + 1) / 2;
        if ((d != 0) != expected || d > 1) matches = false;
        if (d || c.all) table.push_back({{"q", q}, {"w", w}, {"dim", d}});
    }
    auto r = io::envelope("goncharova", f.name());
    r["qmax"] = c.qmax;
    r["wmax"] = c.wmax;
    r["table"] = table;
    r["pentagonal"] = matches;
    o.doc(r);
}

/// Default class on K_I: first basis representative of the lowest nonzero H~^p.
template <class F>
std::pair<int, SimplicialCochain<typename F::Scalar>> default_class(const F& f, const SimplicialComplex& K, VSet I,
                                                                    std::optional<int> p) {
    InducedCochains<F> C(f, K, I);
    for (int q = p.value_or(-1); q <= (p ? *p : C.top()); ++q) {
        if (!C.betti(q)) continue;
        auto Q = C.cohomology(q);
        return {q, C.to_cochain(q, Q.representatives().front())};
    }
    throw Error(ErrorKind::InvalidInput, "no reduced cohomology on the support " + vset_str(I) +
                                             (p ? " in degree " + std::to_string(*p) : std::string()));
}

template <class F>
json mainlemma_json(const MainlemmaResult& m) {
    return json{{"cond1", m.cond1}, {"cond2", m.cond2}, {"strict", m.cond1 && m.cond2}};
}

template <class F>
void cmd_massey(const F& f, const Config& c, Output& o) {
    auto input = io::parse(read_input(c));
    if (is_lie(input)) {
        auto g = io::lie_from_json(input);
        auto win = ce_window(f, g, c.qmax, c.wmax);
        auto reps = parse_forms(win, c.classes);
        auto opt = options(c);
        std::optional<std::vector<MultiDegree>> degs;
        if (c.inhomogeneous) {
            std::vector<MultiDegree> d;
            for (const auto& x : reps) d.push_back(MultiDegree{win.dga->qdegree(x).value_or(0), {}});
            degs = d;
        }
        auto out = massey::massey(win.cache(), reps, opt, std::nullopt, degs);
        auto r = io::envelope("massey", f.name());
        r["algebra"] = g.name;
        r["result"] = io::massey_outcome(f, out);
        r["value_cochain"] = io::cochain(*win.dga, out.value_rep);
        o.doc(r);
        return;
    }
    auto K = load_complex(input);
    auto sup = parse_supports(c.supports, K.m());
    std::vector<std::optional<int>> want(sup.size());
    if (!c.dims.empty()) {
        auto d = int_list(c.dims);
        if (d.size() != sup.size()) throw Error(ErrorKind::InvalidInput, "one dimension per support");
        for (std::size_t i = 0; i < d.size(); ++i) want[i] = d[i];
    }
    std::vector<int> dims;
    std::vector<SimplicialCochain<typename F::Scalar>> cls;
    for (std::size_t i = 0; i < sup.size(); ++i) {
        auto [p, z] = default_class(f, K, sup[i], want[i]);
        dims.push_back(p);
        cls.push_back(z);
    }
    auto res = zk_massey(f, K, sup, dims, cls, options(c));
    auto r = io::envelope("massey", f.name());
    json classes = json::array();
    for (std::size_t i = 0; i < sup.size(); ++i)
        classes.push_back({{"support", io::wire_set(sup[i])}, {"degree", dims[i]}, {"cochain", io::simplicial_cochain(f, cls[i])}});
    r["classes"] = classes;
    r["result"] = io::massey_outcome(f, res.outcome);
    if (sup.size() >= 3) r["mainlemma"] = mainlemma_json<F>(res.conditions);
    r["value_degree"] = res.value_degree;
    r["value_support"] = io::wire_set(res.support);
    r["value_cochain"] = io::simplicial_cochain(f, res.value_cochain);
    o.doc(r);
}

template <class F>
void cmd_kstep(const F& f, const Config& c, Output& o) {
    auto g = io::lie_from_json(io::parse(read_input(c)));
    auto win = ce_window(f, g, c.qmax, c.wmax);
    auto reps = parse_forms(win, c.classes);
    std::optional<std::vector<MultiDegree>> degs;
    if (c.inhomogeneous) {
        std::vector<MultiDegree> d;
        for (const auto& x : reps) d.push_back(MultiDegree{win.dga->qdegree(x).value_or(0), {}});
        degs = d;
    }
    auto out = k_step_massey(win.cache(), reps, static_cast<std::size_t>(c.k), options(c), degs);
    auto r = io::envelope("kstep", f.name());
    r["algebra"] = g.name;
    r["k"] = c.k;
    r["defined"] = out.defined;
    r["complete"] = out.complete;
    r["triviality"] = to_string(out.triviality);
    json tuple = json::array();
    for (const auto& v : out.classes) tuple.push_back(io::scalars(f, v));
    r["tuple"] = tuple;
    o.doc(r);
}

template <class F>
void cmd_betti(const F& f, const Config& c, Output& o) {
    auto K = load_complex(io::parse(read_input(c)));
    auto T = hochster_table(f, K, c.cap);
    if (c.format == "csv") {
        o.os() << io::betti_to_csv(T);
        return;
    }
    auto r = io::envelope("betti", f.name());
    auto bt = io::betti_to_json(T);
    r["entries"] = bt["entries"];
    json totals = json::object();
    for (const auto& [i, b] : T.totals()) totals[std::to_string(i)] = b;
    r["totals"] = totals;
    o.doc(r);
}

template <class F>
void cmd_golod(const F& f, const Config& c, Output& o) {
    auto K = load_complex(io::parse(read_input(c)));
    auto rep = golod_test(f, K, c.order_cap, c.cap, options(c));
    auto r = io::envelope("golod", f.name());
    r["verdict"] = to_string(rep.verdict);
    r["trivial_multiplication"] = rep.trivial_multiplication;
    r["massey_trivial_up_to_cap"] = rep.massey_trivial_up_to_cap;
    r["order_cap"] = rep.order_cap;
    r["witness"] = rep.witness;
    o.doc(r);
}

template <class F>
void cmd_triple_scan(const F& f, const Config& c, Output& o) {
    auto K = load_complex(io::parse(read_input(c)));
    ScanOptions so;
    if (!c.kinds.empty()) {
        so.kinds.clear();
        for (const auto& kd : split(c.kinds, ',')) {
            auto parts = split(kd, ':');
            if (parts.size() != 2) throw Error(ErrorKind::InvalidInput, "kinds are size:degree pairs");
            so.kinds.insert({to_int(parts[0]), to_int(parts[1])});
        }
    }
    so.stop_after = c.stop_after;
    std::size_t total = 0, nontrivial = 0, strict = 0;
    auto sink = [&](const TripleScanEntry& e) {
        ++total;
        if (e.triviality == Triviality::Nontrivial) ++nontrivial;
        if (e.status == MasseyStatus::DefinedStrict) ++strict;
        o.line({{"supports", {io::wire_set(e.I1), io::wire_set(e.I2), io::wire_set(e.I3)}},
                {"degrees", {e.d1, e.d2, e.d3}},
                {"status", to_string(e.status)},
                {"triviality", to_string(e.triviality)},
                {"indeterminacy", e.indeterminacy},
                {"mainlemma_strict", e.mainlemma_strict}});
    };
    triple_massey_scan(f, K, so, options(c), c.cap, sink);
    auto r = io::envelope("triple-scan", f.name());
    r["summary"] = {{"defined", total}, {"nontrivial", nontrivial}, {"strict", strict}};
    o.line(r);
}

template <class F>
void cmd_mainlemma(const F& f, const Config& c, Output& o) {
    auto K = load_complex(io::parse(read_input(c)));
    auto sup = parse_supports(c.supports, K.m());
    std::vector<int> dims;
    if (c.dims.empty())
        for (VSet I : sup) dims.push_back(default_class(f, K, I, std::nullopt).first);
    else
        dims = int_list(c.dims);
    auto m = mainlemma_check(f, K, sup, dims);
    auto r = io::envelope("mainlemma", f.name());
    json s = json::array();
    for (VSet I : sup) s.push_back(io::wire_set(I));
    r["supports"] = s;
    r["degrees"] = dims;
    r["conditions"] = mainlemma_json<F>(m);
    o.doc(r);
}

template <class F>
void cmd_poincare(const F& f, const Config& c, Output& o) {
    auto A = io::ring_from_json(io::parse(read_input(c)));
    if (c.order < 0 || c.order > kDefaultResolutionCap)
        throw Error(ErrorKind::CapExceeded, "series order above the resolution cap");
    auto g = golod_series_check(f, A, c.order);
    auto H = koszul_homology(f, A, c.cap);
    auto r = io::envelope("poincare", f.name());
    auto series = [](const PowerSeries& s) {
        json a = json::array();
        for (const auto& x : s.coef) a.push_back(x.get_num().get_str() + "/" + x.get_den().get_str());
        return a;
    };
    json kb = json::object();
    for (const auto& [i, b] : H.betti) kb[std::to_string(i)] = b;
    r["koszul_betti"] = kb;
    r["trivial_multiplication"] = H.trivial_multiplication;
    r["poincare"] = series(g.poincare);
    r["bound"] = series(g.bound);
    r["dominated"] = g.dominated;
    r["equal"] = g.equal;
    o.doc(r);
}

void cmd_generate(const Config& c, Output& o) {
    auto r = io::envelope("generate", "");
    r.erase("field");
    r["kind"] = c.kind;
    auto put = [&](const SimplicialComplex& K) {
        auto j = io::complex_to_json(K);
        r["m"] = j["m"];
        r["minimal_nonfaces"] = j["minimal_nonfaces"];
    };
    if (c.kind == "cube") put(cube(c.n));
    else if (c.kind == "qn") {
        put(qn(c.n));
        r["labels"] = qn_labels(c.n).names;
    } else if (c.kind == "polygon") put(polygon(c.m));
    else if (c.kind == "simplex") put(SimplicialComplex::from_nonfaces(c.m, {}));
    else if (c.kind == "dodecahedron") put(dodecahedron_nerve());
    else if (c.kind == "multiwedge") put(multiwedge(load_complex(io::parse(read_input(c))), int_list(c.j)));
    else if (c.kind == "anr") {
        auto A = anr(c.n, c.r);
        r["n"] = A.n_vars;
        r["gens"] = A.gens;
    } else
        throw Error(ErrorKind::InvalidInput, "unknown generator '" + c.kind + "'");
    o.doc(r);
}

template <class F>
void dispatch(const F& f, const std::string& cmd, const Config& c, Output& o) {
    if (cmd == "cohomology") cmd_cohomology(f, c, o);
    else if (cmd == "goncharova") cmd_goncharova(f, c, o);
    else if (cmd == "massey") cmd_massey(f, c, o);
    else if (cmd == "kstep") cmd_kstep(f, c, o);
    else if (cmd == "betti") cmd_betti(f, c, o);
    else if (cmd == "golod") cmd_golod(f, c, o);
    else if (cmd == "triple-scan") cmd_triple_scan(f, c, o);
    else if (cmd == "mainlemma") cmd_mainlemma(f, c, o);
    else if (cmd == "poincare") cmd_poincare(f, c, o);
}

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::CapExceeded: return 3;
        case ErrorKind::Inconsistency: return 1;
        default: return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Massey products in Lie algebra and moment-angle cohomology"};
    app.require_subcommand(1);
    app.fallthrough();
    Config c;

    app.add_option("--field", c.field, "q or fp:<p>");
    app.add_option("--in", c.in, "input file (default stdin)");
    app.add_option("--out", c.out, "output file (default stdout)");
    app.add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--budget", c.budget, "live parameter budget");
    app.add_option("--seed", c.seed, "seed for sampled searches");
    app.add_option("--cap", c.cap, "vertex cap");

    auto window = [&](CLI::App* s) {
        s->add_option("--qmax", c.qmax)->check(CLI::NonNegativeNumber);
        s->add_option("--wmax", c.wmax)->check(CLI::PositiveNumber);
    };
    auto* coh = app.add_subcommand("cohomology", "H^q_w of a graded Lie algebra");
    window(coh);
    coh->add_flag("--all", c.all, "include zero entries");
    auto* gon = app.add_subcommand("goncharova", "cohomology table of W+");
    window(gon);
    gon->add_flag("--all", c.all, "include zero entries");
    auto* mas = app.add_subcommand("massey", "Massey product of classes");
    window(mas);
    mas->add_option("--supports", c.supports, "vertex supports, e.g. 1,4;2,5;3,6");
    mas->add_option("--dims", c.dims, "simplicial degree per support");
    mas->add_option("--classes", c.classes, "exterior forms, e.g. e1;e2^e5+-3*e3^e4");
    mas->add_flag("--inhomogeneous", c.inhomogeneous, "drop the weight grading from entries");
    auto* ks = app.add_subcommand("kstep", "k-step Massey product");
    window(ks);
    ks->add_option("--classes", c.classes)->required();
    ks->add_option("--k", c.k)->check(CLI::PositiveNumber);
    ks->add_flag("--inhomogeneous", c.inhomogeneous);
    app.add_subcommand("betti", "bigraded Betti numbers via Hochster");
    auto* gol = app.add_subcommand("golod", "Golod test up to an order cap");
    gol->add_option("--order-cap", c.order_cap)->check(CLI::PositiveNumber);
    auto* scan = app.add_subcommand("triple-scan", "all triple products of scan classes (JSON lines)");
    scan->add_option("--kinds", c.kinds, "size:degree pairs, default 2:0");
    scan->add_option("--stop-after", c.stop_after);
    auto* ml = app.add_subcommand("mainlemma", "strictness conditions for given supports");
    ml->add_option("--supports", c.supports)->required();
    ml->add_option("--dims", c.dims);
    auto* pc = app.add_subcommand("poincare", "Poincare series against the Serre bound");
    pc->add_option("--order", c.order)->check(CLI::NonNegativeNumber);
    auto* gen = app.add_subcommand("generate", "named complexes and rings");
    gen->add_option("kind", c.kind, "cube|qn|polygon|simplex|dodecahedron|multiwedge|anr")->required();
    gen->add_option("--n", c.n);
    gen->add_option("--m", c.m);
    gen->add_option("--r", c.r);
    gen->add_option("--j", c.j, "multiwedge multiplicities, e.g. 2,1,1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        Output o(c);
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "generate") {
            cmd_generate(c, o);
        } else if (c.field == "q") {
            dispatch(Rationals{}, cmd, c, o);
        } else if (c.field.rfind("fp:", 0) == 0) {
            int p = to_int(c.field.substr(3));
            if (p < 2) throw Error(ErrorKind::InvalidInput, "bad modulus");
            dispatch(PrimeField(static_cast<std::uint32_t>(p)), cmd, c, o);
        } else {
            throw Error(ErrorKind::InvalidInput, "field must be q or fp:<p>");
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
