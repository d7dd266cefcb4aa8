/*
 * Batch front end. Every computation is exposed as a subcommand with
 * machine-readable JSON (or CSV for matrix dumps) on stdout.
 *
 * Exit codes: 0 success / all checks pass, 1 an inequality or oracle check
 * failed, 2 usage or size-guard errors.
 */

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "freeprob/errors.hpp"
#include "freeprob/serial.hpp"

using namespace freeprob;
using nlohmann::json;

namespace {

// Seeded draws for the randomized subcommands; identical seeds give
// byte-identical output.
struct CoeffSampler {
    explicit CoeffSampler(unsigned long seed) : rng(seed) {}
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
    ExactScalar complex_scalar() {
        auto part = [&] {
            Rational r(uniform(-5, 5), uniform(1, 3));
            r.canonicalize();
            return r;
        };
        return {part(), part()};
    }
    std::mt19937_64 rng;
};

json load_payload(const std::string& inline_json, const std::string& path) {
    if (!inline_json.empty()) return json::parse(inline_json);
    if (path.empty()) throw DomainError("provide --json or --input");
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open input file: " + path);
    json j;
    in >> j;
    return j;
}

CumulantSpec named_spec(const std::string& name) {
    if (name == "haar" || name == "haar-unitary") return CumulantSpec::haar_unitary();
    if (name == "circular") return CumulantSpec::circular();
    if (name == "semicircular") return CumulantSpec::semicircular();
    throw DomainError("unknown spec '" + name + "' (haar|circular|semicircular)");
}

CumulantSpec spec_from_json(const json& j) {
    if (j.is_string()) return named_spec(j.get<std::string>());
    const json& c = j.at("custom");
    std::map<std::string, ExactScalar> table;
    for (const auto& [pattern, value] : c.at("table").items())
        table.emplace(pattern, scalar_from_json(value));
    return CumulantSpec::custom(std::move(table), c.at("max_order").get<int>());
}

FreeFamily family_from_json(const json& j) {
    FreeFamily fam;
    for (const auto& [label, spec] : j.items()) fam.with(label, spec_from_json(spec));
    return fam;
}

FreeFamily uniform_family(const HomPolynomial& T, const CumulantSpec& spec) {
    FreeFamily fam;
    for (const auto& [idx, a] : T.support())
        for (const Label& l : idx)
            if (!fam.has(l)) fam.with(l, spec);
    if (fam.specs().empty()) fam.with("x", spec);
    return fam;
}

std::vector<int> parse_index_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    if (out.empty()) throw DomainError("empty index list");
    return out;
}

PartitionClass class_from_name(const std::string& name, const std::string& eps) {
    if (name == "all") return PartitionClass::all();
    if (name == "nc") return PartitionClass::noncrossing();
    if (name == "pair") return PartitionClass::pairing();
    if (name == "ncpair") return PartitionClass::nc_pairing();
    if (name == "even") return PartitionClass::even();
    if (name == "nceven") return PartitionClass::nc_even();
    if (name == "eps") return PartitionClass::eps(EpsilonPattern(eps));
    if (name == "nceps") return PartitionClass::nc_eps(EpsilonPattern(eps));
    throw DomainError("unknown class '" + name + "'");
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

struct CapFlags {
    int enum_cap = -1, word_cap = -1, weingarten_cap = -1, expansion_cap = -1;
    int support_cap = -1, m_cap = -1;
    long long tuple_budget = -1;
    bool unsafe_large = false;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--cap-enum", enum_cap, "partition enumeration ground-size cap");
        cmd->add_option("--cap-word", word_cap, "moment star-word length cap");
        cmd->add_option("--cap-weingarten", weingarten_cap, "Weingarten 2k cap");
        cmd->add_option("--cap-2dm", expansion_cap, "L^{2m} expansion 2dm cap");
        cmd->add_option("--cap-support", support_cap, "coefficient support cap");
        cmd->add_option("--cap-m", m_cap, "power index cap");
        cmd->add_option("--cap-tuples", tuple_budget, "free-group tuple budget");
        cmd->add_flag("--unsafe-large", unsafe_large,
                      "acknowledge raising any cap beyond its default");
    }

    Caps resolve() const {
        Caps caps;
        auto apply = [&](int requested, int& slot, const char* name) {
            if (requested < 0) return;
            if (requested > slot && !unsafe_large)
                throw DomainError(std::string("raising ") + name +
                                  " beyond its default requires --unsafe-large");
            slot = requested;
        };
        apply(enum_cap, caps.enumeration_cap, "--cap-enum");
        apply(word_cap, caps.moment_word_cap, "--cap-word");
        apply(weingarten_cap, caps.weingarten_cap, "--cap-weingarten");
        apply(expansion_cap, caps.expansion_cap, "--cap-2dm");
        apply(support_cap, caps.support_cap, "--cap-support");
        apply(m_cap, caps.m_cap, "--cap-m");
        if (tuple_budget >= 0) {
            if (tuple_budget > caps.tuple_budget && !unsafe_large)
                throw DomainError("raising --cap-tuples beyond its default requires --unsafe-large");
            caps.tuple_budget = tuple_budget;
        }
        return caps;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact combinatorics of free probability: partitions, cumulants, "
                 "Weingarten calculus, Haagerup-inequality certification"};
    app.require_subcommand(1);
    int exit_code = 0;

    // ---- partitions ----
    auto* cmd_part = app.add_subcommand("partitions", "enumerate partition classes of [k]");
    int part_k = 0;
    std::string part_class = "nc", part_eps;
    bool part_count_only = false;
    CapFlags part_caps;
    cmd_part->add_option("--k", part_k, "ground size")->required();
    cmd_part->add_option("--class", part_class, "all|nc|pair|ncpair|even|nceven|eps|nceps");
    cmd_part->add_option("--eps", part_eps, "epsilon pattern over {1,*} for eps classes");
    cmd_part->add_flag("--count", part_count_only, "emit only the count");
    part_caps.add_to(cmd_part);
    cmd_part->callback([&] {
        auto parts = enumerate_partitions(part_k, class_from_name(part_class, part_eps),
                                          part_caps.resolve());
        json out;
        out["count"] = parts.size();
        if (!part_count_only) {
            json arr = json::array();
            for (const auto& p : parts) arr.push_back(to_json(p));
            out["partitions"] = std::move(arr);
        }
        emit(out);
    });

    // ---- moebius ----
    auto* cmd_mu = app.add_subcommand("moebius", "Moebius function of the non-crossing lattice");
    int mu_k = 0;
    std::string mu_s, mu_p;
    cmd_mu->add_option("--k", mu_k, "evaluate mu(0_k, 1_k)");
    cmd_mu->add_option("--s", mu_s, "lower partition as JSON blocks");
    cmd_mu->add_option("--p", mu_p, "upper partition as JSON blocks");
    cmd_mu->callback([&] {
        BigInt value;
        if (!mu_s.empty() || !mu_p.empty()) {
            if (mu_s.empty() || mu_p.empty()) throw DomainError("--s and --p go together");
            value = moebius_nc(partition_from_json(json::parse(mu_s)),
                               partition_from_json(json::parse(mu_p)));
        } else if (mu_k >= 1) {
            value = moebius_nc(Partition::singletons(mu_k), Partition::full(mu_k));
        } else {
            throw DomainError("provide --k or both --s and --p");
        }
        emit(json{{"mu", value.get_str()}});
    });

    // ---- cumulants ----
    auto* cmd_kappa = app.add_subcommand("cumulants", "query a cumulant spec");
    std::string kappa_spec = "haar", kappa_pattern, kappa_spec_json;
    int kappa_rd_order = 0;
    cmd_kappa->add_option("--spec", kappa_spec, "haar|circular|semicircular");
    cmd_kappa->add_option("--spec-json", kappa_spec_json, "custom spec JSON");
    cmd_kappa->add_option("--pattern", kappa_pattern, "exponent pattern, e.g. 1*1*");
    cmd_kappa->add_option("--r-diagonal-order", kappa_rd_order,
                          "check R-diagonality up to this even order");
    cmd_kappa->callback([&] {
        CumulantSpec spec = kappa_spec_json.empty() ? named_spec(kappa_spec)
                                                    : spec_from_json(json::parse(kappa_spec_json));
        json out;
        if (!kappa_pattern.empty())
            out["kappa"] = to_json(spec.kappa(EpsilonPattern(kappa_pattern)));
        if (kappa_rd_order > 0) out["r_diagonal"] = is_r_diagonal(spec, kappa_rd_order);
        if (out.empty()) throw DomainError("provide --pattern or --r-diagonal-order");
        emit(out);
    });

    // ---- moments ----
    auto* cmd_mom = app.add_subcommand("moments", "joint moment of a star-word");
    std::string mom_json, mom_file;
    bool mom_complexified = false;
    CapFlags mom_caps;
    cmd_mom->add_option("--json", mom_json, "inline payload {family, word}");
    cmd_mom->add_option("--input", mom_file, "payload file");
    cmd_mom->add_flag("--complexified", mom_complexified, "evaluate the free complexification");
    mom_caps.add_to(cmd_mom);
    cmd_mom->callback([&] {
        json payload = load_payload(mom_json, mom_file);
        FreeFamily fam = family_from_json(payload.at("family"));
        StarWord w = starword_from_json(payload.at("word"));
        Caps caps = mom_caps.resolve();
        ExactScalar v = mom_complexified ? complexified_moment(fam, w, caps)
                                         : moment(fam, w, caps);
        emit(json{{"value", to_json(v)}});
    });

    // ---- weingarten ----
    auto* cmd_wg = app.add_subcommand("weingarten", "Gram / Weingarten matrices for NC_e(2k)");
    int wg_n = 0, wg_k = 0;
    bool wg_gram = false, wg_csv = false;
    CapFlags wg_caps;
    cmd_wg->add_option("--n", wg_n, "dimension parameter")->required();
    cmd_wg->add_option("--k", wg_k, "half-order (basis NC_e(2k))")->required();
    cmd_wg->add_flag("--gram", wg_gram, "emit the Gram matrix instead of its inverse");
    cmd_wg->add_flag("--csv", wg_csv, "emit entries as CSV rows");
    wg_caps.add_to(cmd_wg);
    cmd_wg->callback([&] {
        Caps caps = wg_caps.resolve();
        if (wg_csv) {
            if (wg_gram) {
                auto g = gram(wg_n, wg_k, caps);
                for (const auto& row : g.entries) {
                    for (size_t c = 0; c < row.size(); ++c)
                        std::cout << row[c].get_str() << (c + 1 < row.size() ? "," : "");
                    std::cout << "\n";
                }
            } else {
                auto w = weingarten(wg_n, wg_k, caps);
                for (const auto& row : w.entries) {
                    for (size_t c = 0; c < row.size(); ++c)
                        std::cout << rational_str(row[c]) << (c + 1 < row.size() ? "," : "");
                    std::cout << "\n";
                }
            }
            return;
        }
        if (wg_gram) {
            auto g = gram(wg_n, wg_k, caps);
            json basis = json::array();
            for (const auto& p : g.basis) basis.push_back(to_json(p));
            json rows = json::array();
            for (const auto& row : g.entries) {
                json r = json::array();
                for (const auto& e : row) r.push_back(e.get_str());
                rows.push_back(std::move(r));
            }
            emit(json{{"basis", basis}, {"G", rows}});
        } else {
            auto w = weingarten(wg_n, wg_k, caps);
            json basis = json::array();
            for (const auto& p : w.basis) basis.push_back(to_json(p));
            json rows = json::array();
            for (const auto& row : w.entries) {
                json r = json::array();
                for (const auto& e : row) r.push_back(rational_str(e));
                rows.push_back(std::move(r));
            }
            emit(json{{"basis", basis}, {"W", rows}});
        }
    });

    // ---- haar-moment ----
    auto* cmd_hm = app.add_subcommand("haar-moment", "Haar-state moment of generator entries");
    int hm_n = 0;
    std::string hm_i, hm_j;
    CapFlags hm_caps;
    cmd_hm->add_option("--n", hm_n, "dimension parameter")->required();
    cmd_hm->add_option("--i", hm_i, "row multi-index, comma separated")->required();
    cmd_hm->add_option("--j", hm_j, "column multi-index, comma separated")->required();
    hm_caps.add_to(cmd_hm);
    cmd_hm->callback([&] {
        Rational v = haar_moment(hm_n, parse_index_list(hm_i), parse_index_list(hm_j),
                                 hm_caps.resolve());
        emit(json{{"value", rational_str(v)}});
    });

    // ---- shi-certify ----
    auto* cmd_shi = app.add_subcommand("shi-certify",
                                       "certify the strong Haagerup bound for a polynomial");
    std::string shi_json, shi_file, shi_spec = "circular";
    int shi_m = 1;
    bool shi_array = false;
    CapFlags shi_caps;
    cmd_shi->add_option("--json", shi_json, "inline polynomial payload");
    cmd_shi->add_option("--input", shi_file, "polynomial payload file");
    cmd_shi->add_option("--spec", shi_spec, "family spec: haar|circular|semicircular");
    cmd_shi->add_option("--m", shi_m, "power index")->required();
    cmd_shi->add_flag("--array", shi_array, "use the array-mode constant");
    shi_caps.add_to(cmd_shi);
    cmd_shi->callback([&] {
        json payload = load_payload(shi_json, shi_file);
        Caps caps = shi_caps.resolve();
        ShiCertificate cert;
        if (shi_array) {
            ArrayPolynomial A = arraypoly_from_json(payload);
            FreeFamily fam = uniform_family(A.to_hom(), named_spec(shi_spec));
            cert = shi_certify(A, fam, shi_m, caps);
        } else {
            HomPolynomial T = hompoly_from_json(payload);
            FreeFamily fam = uniform_family(T, named_spec(shi_spec));
            cert = shi_certify(T, fam, shi_m, caps);
        }
        emit(to_json(cert));
        if (cert.verdict != Verdict::Pass) exit_code = 1;
    });

    // ---- abc ----
    auto* cmd_abc = app.add_subcommand("abc", "count / cumulant / coefficient-sum estimates");
    std::string abc_json, abc_file, abc_spec = "circular";
    int abc_d = 1, abc_m = 1;
    CapFlags abc_caps;
    cmd_abc->add_option("--json", abc_json, "inline polynomial payload");
    cmd_abc->add_option("--input", abc_file, "polynomial payload file");
    cmd_abc->add_option("--spec", abc_spec, "family spec");
    cmd_abc->add_option("--d", abc_d, "degree")->required();
    cmd_abc->add_option("--m", abc_m, "power index")->required();
    abc_caps.add_to(cmd_abc);
    cmd_abc->callback([&] {
        HomPolynomial T = hompoly_from_json(load_payload(abc_json, abc_file));
        FreeFamily fam = uniform_family(T, named_spec(abc_spec));
        auto report = abc_estimates(abc_d, abc_m, T, fam, abc_caps.resolve());
        emit(to_json(report));
        if (report.a_vs_pairings != Verdict::Pass || report.a_vs_closed_form != Verdict::Pass ||
            report.b_bound != Verdict::Pass || report.c_bound != Verdict::Pass ||
            !report.inner_lemma_ok)
            exit_code = 1;
    });

    // ---- chebyshev ----
    auto* cmd_cheb = app.add_subcommand("chebyshev", "Chebyshev recursion polynomials");
    int cheb_d = 0;
    std::string cheb_eval;
    cmd_cheb->add_option("--d", cheb_d, "degree")->required();
    cmd_cheb->add_option("--eval", cheb_eval, "evaluate at a rational point");
    cmd_cheb->callback([&] {
        auto T = chebyshev_u(cheb_d);
        json coeffs = json::array();
        for (const auto& c : T.coeffs) coeffs.push_back(c.get_str());
        json out{{"d", cheb_d}, {"coeffs", coeffs}};
        if (!cheb_eval.empty())
            out["value"] = rational_str(T.eval(parse_rational(cheb_eval)));
        emit(out);
    });

    // ---- character-check ----
    auto* cmd_char = app.add_subcommand("character-check",
                                        "circular power norms against chain counts");
    int char_d = 1, char_mmax = 1;
    CapFlags char_caps;
    cmd_char->add_option("--d", char_d, "power of the circular variable")->required();
    cmd_char->add_option("--m-max", char_mmax, "largest power index")->required();
    char_caps.add_to(cmd_char);
    cmd_char->callback([&] {
        Caps caps = char_caps.resolve();
        if (char_mmax > caps.m_cap) caps.m_cap = char_mmax;  // guarded by 2 d m_max cap
        auto report = character_norm_check(char_d, char_mmax, caps);
        emit(to_json(report));
        if (!report.fuss_catalan_ok || !report.monotone_ok || !report.bound_ok) exit_code = 1;
    });

    // ---- freegroup-check ----
    auto* cmd_fg = app.add_subcommand("freegroup-check", "word-length Haagerup bounds");
    std::string fg_json, fg_file;
    int fg_d = 1, fg_m = 1, fg_trials = 0, fg_support = 6;
    unsigned long fg_seed = 1;
    bool fg_semigroup = false;
    CapFlags fg_caps;
    cmd_fg->add_option("--json", fg_json, "inline GroupFunction payload");
    cmd_fg->add_option("--input", fg_file, "GroupFunction payload file");
    cmd_fg->add_option("--d", fg_d, "word length of the support")->required();
    cmd_fg->add_option("--m", fg_m, "power index")->required();
    cmd_fg->add_flag("--semigroup", fg_semigroup, "support restricted to positive words");
    cmd_fg->add_option("--random", fg_trials, "run this many random trials instead of a payload");
    cmd_fg->add_option("--seed", fg_seed, "seed for --random");
    cmd_fg->add_option("--support-size", fg_support, "support size for --random");
    fg_caps.add_to(cmd_fg);
    cmd_fg->callback([&] {
        Caps caps = fg_caps.resolve();
        if (fg_trials > 0) {
            CoeffSampler sampler(fg_seed);
            json results = json::array();
            bool all_ok = true;
            for (int t = 0; t < fg_trials; ++t) {
                GroupFunction f;
                for (int s = 0; s < fg_support; ++s) {
                    std::vector<int> letters;
                    for (int j = 0; j < fg_d; ++j) {
                        for (;;) {
                            int g = sampler.uniform(1, 2);
                            int letter =
                                fg_semigroup ? g : (sampler.uniform(0, 1) ? g : -g);
                            if (!letters.empty() && letters.back() == -letter) continue;
                            letters.push_back(letter);
                            break;
                        }
                    }
                    f.add(ReducedWord::reduce(letters), sampler.complex_scalar());
                }
                if (f.support_size() == 0) continue;
                auto rep = haagerup_check(f, fg_d, fg_m, fg_semigroup, caps);
                all_ok = all_ok && rep.classical == Verdict::Pass &&
                         (!fg_semigroup || rep.strong == Verdict::Pass);
                results.push_back(to_json(rep));
            }
            emit(json{{"trials", results.size()}, {"reports", results}});
            if (!all_ok) exit_code = 1;
        } else {
            GroupFunction f = groupfn_from_json(load_payload(fg_json, fg_file));
            auto rep = haagerup_check(f, fg_d, fg_m, fg_semigroup, caps);
            emit(to_json(rep));
            if (rep.classical != Verdict::Pass ||
                (fg_semigroup && rep.strong != Verdict::Pass))
                exit_code = 1;
        }
    });

    // ---- oracle-check ----
    auto* cmd_oc = app.add_subcommand("oracle-check",
                                      "cumulant moments vs free-group traces for Haar words");
    int oc_cap = 6;
    cmd_oc->add_option("--cap", oc_cap, "maximum word length (<= 8)");
    cmd_oc->callback([&] {
        auto rep = haar_oracle_check(oc_cap);
        emit(to_json(rep));
        if (rep.mismatches != 0) exit_code = 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const SizeGuardError& e) {
        std::cerr << "size guard: " << e.what() << "\n";
        return 2;
    } catch (const TruncationError& e) {
        std::cerr << "truncation: " << e.what() << "\n";
        return 2;
    } catch (const GramSingularError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return 2;
    } catch (const UndecidableError& e) {
        std::cerr << "undecidable: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}
