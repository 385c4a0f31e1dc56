#include <iostream>

#include "CLI11.hpp"
#include "suites.hpp"

using namespace qsym;
using json_io::json;

namespace {

constexpr const char* env_help =
    "Environment guards:\n"
    "  QSYM_MAX_N       largest group order (default 4096)\n"
    "  QSYM_MAX_DENSE   largest dense matrix entry count (default 1000000)\n"
    "  QSYM_MAX_SPARSE  largest sparse nonzero count (default 10000000)\n"
    "  QSYM_FIXTURES    fixture directory used by `verify lemmas`\n"
    "Exit status: 0 success, 1 verification failure, 2 invalid input or guard exceeded.";

std::vector<int> parse_ints(const std::string& s, char sep, const std::string& what) {
    std::vector<int> out;
    std::string cur;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            std::string t = dsl::detail::trim(cur);
            if (t.empty()) throw invalid_input("empty entry in " + what);
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(t, &used);
            } catch (const std::exception&) {
                throw invalid_input("bad integer '" + t + "' in " + what);
            }
            if (used != t.size()) throw invalid_input("bad integer '" + t + "' in " + what);
            out.push_back(v);
            cur.clear();
        } else {
            cur += s[i];
        }
    }
    return out;
}

Family resolve(const std::string& fam, const std::string& orders, const std::string& gens) {
    if (!fam.empty()) {
        if (!orders.empty() || !gens.empty()) throw invalid_input("use either --family or --orders/--gens");
        return family(fam);
    }
    if (orders.empty()) throw invalid_input("need --family or --orders with --gens");
    auto o = parse_ints(orders, ',', "--orders");
    for (int m : o)
        if (m < 1) throw invalid_input("cyclic orders must be positive");
    AbelianGroup G(o);
    if (G.order() > config::max_n()) throw guard_error("group order exceeds QSYM_MAX_N");
    if (dsl::detail::trim(gens).empty()) throw invalid_input("the generating set must not be empty");
    std::vector<GroupElement> S;
    std::string cur;
    for (std::size_t i = 0; i <= gens.size(); ++i) {
        if (i == gens.size() || gens[i] == ';') {
            auto v = parse_ints(cur, ',', "--gens");
            if (v.size() != o.size()) throw invalid_input("generator '" + cur + "' has the wrong number of coordinates");
            std::vector<long long> w(v.begin(), v.end());
            S.push_back(G.element(w));
            cur.clear();
        } else {
            cur += gens[i];
        }
    }
    return {"custom", G, make_generating_set(G, S)};
}

std::pair<int, int> parse_block(const std::string& s) {
    auto v = parse_ints(s, ',', "--block");
    if (v.size() != 2 || v[0] < 0 || v[1] < 0 || v[0] + v[1] == 0) throw invalid_input("--block takes k,l with k, l >= 0 and k + l >= 1");
    return {v[0], v[1]};
}

void print_report(const VerificationReport& r, bool as_json) {
    if (as_json)
        std::cout << r.to_json().dump(2) << "\n";
    else
        std::cout << r.text();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectra, Fourier intertwiners and partition calculus for Cayley graphs of finite abelian groups"};
    app.footer(env_help);
    app.require_subcommand(1);

    std::string fam, orders, gens;
    bool as_json = false;

    auto* sp = app.add_subcommand("spectrum", "eigenvalues with their character labels");
    sp->add_option("--family", fam, "hypercube:n, halved:n, folded:n, hamming:n,m, complete:m, circulant:m,(s1;s2)");
    sp->add_option("--orders", orders, "cyclic orders, e.g. 2,2,2");
    sp->add_option("--gens", gens, "generators, coordinates separated by ',' and elements by ';'");
    sp->add_flag("--json", as_json, "emit JSON");

    auto* fc = app.add_subcommand("fourier-check", "checks that the Fourier transform diagonalizes the adjacency matrix");
    fc->add_option("--family", fam);
    fc->add_option("--orders", orders);
    fc->add_option("--gens", gens);
    fc->add_flag("--json", as_json);

    std::string block, proj;
    auto* it = app.add_subcommand("intertwiner", "Fourier transform of a block intertwiner");
    it->add_option("--family", fam);
    it->add_option("--orders", orders);
    it->add_option("--gens", gens);
    it->add_option("--block", block, "k,l")->required();
    it->add_option("--project", proj, "eigenspace selection, e.g. V1 or V1+V3; omitted means all labels");
    it->add_flag("--json", as_json);

    auto* pt = app.add_subcommand("partition", "partition calculus expressions and fixtures");
    pt->require_subcommand(1);
    std::string expr, fixture;
    std::vector<std::uint32_t> at;
    auto* pe = pt->add_subcommand("eval", "canonical form of an expression");
    pe->add_option("expr", expr)->required();
    pe->add_option("--at", at, "dimension(s) for tensor evaluation");
    pe->add_flag("--json", as_json);
    auto* pc = pt->add_subcommand("check", "runs the statements of a fixture file");
    pc->add_option("fixture", fixture)->required();
    pc->add_option("--at", at, "dimension(s) for the tensor oracle");
    pc->add_flag("--json", as_json);

    std::string suite;
    auto* vf = app.add_subcommand("verify", "runs a verification suite");
    vf->add_option("suite", suite, "hypercube:n, halved:n, folded:n, hamming:n,m, wreath:n,m, lemmas, all")->required();
    vf->add_flag("--json", as_json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*sp) {
            auto f = resolve(fam, orders, gens);
            auto s = spectrum(f.group, f.gens);
            if (as_json) {
                std::cout << json_io::to_json(f.group, f.gens, s).dump(2) << "\n";
            } else {
                for (const auto& item : s.items) {
                    std::cout << item.value.str() << "  multiplicity " << item.labels.size() << "  labels";
                    for (const auto& mu : item.labels) std::cout << " " << AbelianGroup::str(mu);
                    std::cout << "\n";
                }
            }
            return 0;
        }
        if (*fc) {
            auto f = resolve(fam, orders, gens);
            VerificationReport r;
            r.suite = "fourier-check " + f.name;
            suites::fourier_diagonal(r, f);
            print_report(r, as_json);
            return r.exit_code();
        }
        if (*it) {
            auto f = resolve(fam, orders, gens);
            auto [k, l] = parse_block(block);
            const auto& G = f.group;
            json out;
            if (proj.empty()) {
                auto T = hat_block_intertwiner(G, k, l);
                out = json{{"block", {k, l}}, {"basis", "all"}, {"tensor", json_io::to_json(T)}};
            } else {
                auto s = spectrum(G, f.gens);
                auto B = eigen_basis(G, s, proj);
                auto T = project(G, functor_T<long long>(block_partition(k, l), static_cast<std::uint32_t>(G.order())), B, B);
                json labels = json::array();
                for (const auto& mu : B.labels) labels.push_back(json_io::to_json(mu));
                out = json{{"block", {k, l}}, {"basis", proj}, {"labels", labels}, {"tensor", json_io::to_json(T)}};
            }
            if (as_json) {
                std::cout << out.dump(2) << "\n";
            } else {
                const auto& t = out["tensor"];
                std::cout << "block " << k << "," << l << " on " << out["basis"].get<std::string>() << ": " << t["entries"].size()
                          << " nonzero entries\n";
                for (const auto& e : t["entries"]) {
                    std::cout << "  " << e["idx"].dump() << " = ";
                    const auto& c = e["value"]["coeffs"];
                    if (e["value"]["level"] == 1)
                        std::cout << (c.empty() ? std::string("0") : c[0].get<std::string>()) << "\n";
                    else
                        std::cout << e["value"].dump() << "\n";
                }
            }
            return 0;
        }
        if (*pe) {
            auto e = dsl::eval_text(expr);
            json out = json_io::to_json(e);
            out["canonical"] = e.str();
            json evals = json::array();
            for (auto N : at) {
                if (N < 1) throw invalid_input("--at needs N >= 1");
                auto T = evaluate(e, N);
                json st{{"N", N}, {"nonzero", T.nnz()}, {"shape", T.shape()}};
                if (e.k() == e.l() && e.k() > 0) {
                    Q tr = 0;
                    for (const auto& [key, v] : T.data()) {
                        Index ix = T.decode(key);
                        bool diag = true;
                        for (std::size_t a = 0; a < static_cast<std::size_t>(e.k()); ++a)
                            diag = diag && ix[a] == ix[a + static_cast<std::size_t>(e.k())];
                        if (diag) tr += v;
                    }
                    st["trace"] = to_string(tr);
                    st["idempotent"] = compose(T, T) == T;
                }
                evals.push_back(st);
            }
            if (!at.empty()) out["evaluations"] = evals;
            if (as_json) {
                std::cout << out.dump(2) << "\n";
            } else {
                std::cout << e.str() << "\n";
                for (const auto& s : evals) std::cout << "at N=" << s["N"] << ": " << s.dump() << "\n";
            }
            return 0;
        }
        if (*pc) {
            VerificationReport r;
            r.suite = "partition check " + fixture;
            suites::fixture_checks(r, fixture, at);
            print_report(r, as_json);
            return r.exit_code();
        }
        if (*vf) {
            auto reports = suites::run_suite(suite);
            int rc = 0;
            if (as_json) {
                json arr = json::array();
                for (const auto& r : reports) arr.push_back(r.to_json());
                std::cout << (arr.size() == 1 ? arr[0] : arr).dump(2) << "\n";
            }
            for (const auto& r : reports) {
                if (!as_json) std::cout << r.text();
                rc = std::max(rc, r.exit_code());
            }
            return rc;
        }
    } catch (const invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const guard_error& e) {
        std::cerr << "guard exceeded: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
