#pragma once

// Commands of the hodge tool. Each command reads one problem, runs the
// library operation and its checks, and produces a JSON report:
//
//   { "version": "hodge-report/1", "command", "kind", "verdict",
//     "error"?, "checks": [...], "results": {...} }
//
// The verdict is "pass", "fail" (a check failed or an operation raised a
// mathematical failure) or "invalid" (the input did not parse or validate).

#include <cstdint>
#include <optional>
#include <string>

#include <hodge/corpus.hpp>
#include <hodge/higgs/higgs.hpp>
#include <hodge/io/problem.hpp>

namespace hodge::io {

inline constexpr const char *report_version = "hodge-report/1";

enum exit_code : int { exit_pass = 0, exit_check_failed = 1, exit_invalid = 2 };

struct run_options {
    std::optional<int> order;
    std::optional<std::uint64_t> seed;
};

struct run_result {
    int code = exit_pass;
    std::string report;
    std::string summary;
};

inline const std::map<std::string, std::string> &command_kinds() {
    static const std::map<std::string, std::string> m{
        {"bigrading", "mhs"},         {"mhs", "mhs"},
        {"weight-filtration", "weight-filtration"}, {"rel-weight", "rel-weight"},
        {"higgs-extract", "higgs-extract"},         {"orbit-reconstruct", "orbit-reconstruct"},
        {"amodel", "amodel"},         {"wdvv", "amodel"},
        {"bmodel", "bmodel"},         {"verify", "verify"}};
    return m;
}

namespace detail {

inline std::string bidegree_key(const bidegree &pq) { return std::to_string(pq.first) + "," + std::to_string(pq.second); }

inline json checks_json(const report &r) {
    json a = json::array();
    for (const auto &c : r.checks) {
        json o = json::object();
        o["name"] = c.name;
        o["pass"] = c.pass;
        if (!c.detail.empty()) o["detail"] = c.detail;
        a.push_back(o);
    }
    return a;
}

inline json bigrading_json(const bigrading &I) {
    json o = json::object();
    for (const auto &[pq, s] : I) o[bidegree_key(pq)] = subspace_json(s);
    return o;
}

inline json matrices_json(const std::vector<matrix> &ms) {
    json a = json::array();
    for (const auto &m : ms) a.push_back(matrix_json(m));
    return a;
}

inline json gamma_levels_json(const orbit_germ &g) {
    json o = json::object();
    for (int k = 1; k <= g.limit.depth(); ++k) o["Gamma_-" + std::to_string(k)] = series_json(g.gamma_part(k));
    return o;
}

inline std::string index_key(std::size_t a, std::size_t b, std::size_t c) {
    return std::to_string(a + 1) + "," + std::to_string(b + 1) + "," + std::to_string(c + 1);
}

inline json structure_constants_json(const quantum_product &qp) {
    json o = json::object();
    for (std::size_t j = 0; j < qp.n(); ++j)
        for (std::size_t k = 0; k < qp.n(); ++k)
            for (std::size_t l = 0; l < qp.n(); ++l) o[index_key(j, k, l)] = series_json(qp.c(j, k, l));
    return o;
}

struct outcome {
    report checks;
    json results = json::object();
    std::string summary;
};

inline outcome run_bigrading(const problem &p) {
    outcome out;
    mixed_hodge_structure m{*p.F, *p.W};
    mhs_summary s = validate_mhs(m);
    bigrading I = deligne_bigrading(m);
    out.checks.append(verify_bigrading(m, I));
    bool identity = true;
    const int lo = std::min(m.F.lowest(), m.W.lowest()) - 1;
    const int hi = std::max(m.F.highest(), m.W.highest()) + 1;
    for (int q = lo; q <= hi; ++q) identity = identity && appendix_filtration_identity(m, q).holds();
    out.checks.add("filtration identity for the conjugate bigrading", identity);
    json h = json::object();
    std::string names;
    for (const auto &[pq, n] : s.hodge_numbers) {
        h[bidegree_key(pq)] = n;
        if (!names.empty()) names += ", ";
        names += "h^{" + bidegree_key(pq) + "}=" + std::to_string(n);
    }
    out.results["hodge_numbers"] = h;
    out.results["bigrading"] = bigrading_json(I);
    out.summary = "hodge numbers: " + names;
    return out;
}

inline outcome run_weight_filtration(const problem &p) {
    outcome out;
    const matrix &n = p.N.at(0);
    increasing_filtration w = monodromy_weight_filtration(n, *p.center);
    out.checks.append(verify_monodromy_filtration(n, w, *p.center));
    json chains = json::array();
    for (const auto &c : jordan_chains(n)) chains.push_back(c.length);
    out.results["jordan_chain_lengths"] = chains;
    out.results["W"] = filtration_json(w);
    out.summary = "weights " + std::to_string(w.lowest()) + ".." + std::to_string(w.highest());
    return out;
}

inline outcome run_rel_weight(const problem &p) {
    outcome out;
    const matrix &n = p.N.at(0);
    increasing_filtration m = relative_weight_filtration(n, *p.W);
    out.checks.append(verify_relative_filtration(n, *p.W, m));
    out.results["relW"] = filtration_json(m);
    out.summary = "weights " + std::to_string(m.lowest()) + ".." + std::to_string(m.highest());
    return out;
}

inline outcome run_higgs(const problem &p) {
    outcome out;
    mixed_hodge_structure m{*p.F, *p.W};
    validate_mhs(m);
    graded_polarization s = p.polarization.value_or(graded_polarization{});
    higgs_pair h = extract_higgs(m, s, *p.gamma);
    out.checks.append(h.checks);
    std::vector<matrix> alt = tau_from_theta(h, grading_from_mhs(m));
    out.checks.add("tau equals the ad(Y) weight-zero part of conj theta", alt == h.tau);
    out.results["theta"] = matrices_json(h.theta);
    out.results["tau"] = matrices_json(h.tau);
    out.results["antiholomorphic"] = matrices_json(h.antiholomorphic);
    out.summary = std::to_string(h.theta.size()) + " Higgs field direction(s)";
    return out;
}

inline outcome run_orbit(const problem &p, const run_options &opt) {
    outcome out;
    limit_data ld = make_limit_data(*p.F, *p.W, p.N);
    reconstruct_options ro;
    ro.shuffle_seed = opt.seed;
    orbit_germ g = reconstruct_gamma(*p.gamma, ld, ro);
    residual_report res = horizontality_residual(g);
    out.checks.add("horizontality residual lies in P_{-1}", res.pass());
    reconstruct_options other;
    other.shuffle_seed = opt.seed.value_or(0) + 1;
    other.verify_uniqueness = false;
    out.checks.add("reconstruction is independent of the visiting order",
                   reconstruct_gamma(*p.gamma, ld, other).gamma == g.gamma);
    out.checks.append(lie_polynomial_check(g));
    bool mono = true;
    for (std::size_t j = 0; j < g.nvars(); ++j) {
        series_endo t = recover_monodromy(g, j);
        mono = mono && t.constant_term() == exp_nilpotent(-ld.N[j]);
        for (std::size_t k = 0; k < j; ++k) mono = mono && bracket(t, recover_monodromy(g, k)).is_zero();
    }
    out.checks.add("monodromy is unipotent with constant term e^{-N_j} and commutes", mono);
    if (ld.hodge_tate()) out.checks.append(hodge_tate_theta(g));
    out.results["relW"] = filtration_json(ld.relW);
    out.results["limit_bigrading"] = bigrading_json(ld.I);
    out.results["gamma"] = gamma_levels_json(g);
    out.summary = "Gamma reconstructed to order " + std::to_string(g.order());
    return out;
}

inline outcome run_amodel(const problem &p) {
    outcome out;
    if (p.perturbation) throw validation_error("$.perturbation: only the wdvv command takes a perturbation");
    const gw_potential &pot = *p.potential;
    amodel_vhs v = build_vhs(pot);
    out.checks.append(v.checks);
    out.checks.append(higgs_equals_product(v));
    gw_potential back = potential_from_vhs(v);
    out.checks.add("potential recovered from the germ", back.kappa == pot.kappa && back.instantons == pot.instantons);
    out.checks.append(wdvv_check(pot), "WDVV: ");
    out.results["structure_constants"] = structure_constants_json(v.quantum);
    out.results["gamma"] = gamma_levels_json(v.germ);
    out.summary = "A-model variation with n = " + std::to_string(pot.n) + " to order " + std::to_string(pot.order);
    return out;
}

inline outcome run_wdvv(const problem &p) {
    outcome out;
    const gw_potential &pot = *p.potential;
    limit_data ld = amodel_limit_data(pot);
    series_endo g1 = amodel_gamma1(pot.n, phi_hol(pot));
    if (p.perturbation) g1 += *p.perturbation;
    report r = wdvv_check(ld, g1);
    out.checks.append(r);
    json flags = json::object();
    for (const auto &c : r.checks) flags[c.name] = c.pass;
    out.results["verdicts"] = flags;
    out.results["structure_constants"] = structure_constants_json(product_from_higgs(ld, g1));
    auto yes = [](bool b) { return b ? std::string("true") : std::string("false"); };
    out.summary = "associative: " + yes(r.checks[0].pass && r.checks[1].pass) + "; higgs-flat: " + yes(r.checks[2].pass);
    return out;
}

inline outcome run_bmodel(const problem &p) {
    outcome out;
    extension_class e;
    std::optional<quantum_product> expected;
    if (p.potential) {
        amodel_vhs v = build_vhs(*p.potential);
        e = extension_from_amodel(v, p.coordinates);
        expected = v.quantum;
    } else {
        e = *p.extension;
    }
    theta_result tr = theta_from_extension(e);
    out.checks.add("exponential and logarithmic readings of theta agree", tr.readings_agree, tr.discrepancy);
    b_quantum_product bp = three_point(e);
    report r = b_associativity(bp, e);
    out.checks.append(r);
    json phi = json::object();
    bool matches = true;
    for (std::size_t a = 0; a < e.n; ++a)
        for (std::size_t b = 0; b < e.n; ++b)
            for (std::size_t c = 0; c < e.n; ++c) {
                phi[index_key(a, b, c)] = series_json(bp.phi[a][b][c]);
                if (expected) matches = matches && bp.phi[a][b][c] == expected->c(a, b, c);
            }
    if (expected) out.checks.add("three-point function equals the A-model Yukawa series", matches);
    out.results["phi"] = phi;
    out.results["frame"] = series_json(bp.frame.X);
    out.summary = "three-point function with n = " + std::to_string(e.n);
    return out;
}

// Seeded property sweep over the whole library.
inline outcome run_verify(const problem &p, const run_options &opt) {
    outcome out;
    const std::uint64_t seed = opt.seed.value_or(0);
    const int count = p.count.value_or(10);
    const int cap = p.order.value_or(3);
    corpus::rng_t rng(seed);
    bool bigr = true, weight = true, orbit = true, amod = true, bmod = true;
    for (int t = 0; t < count; ++t) {
        auto sample = corpus::random_mhs(rng, 6);
        bigrading I = deligne_bigrading(sample.m);
        bigr = bigr && I == sample.expected && verify_bigrading(sample.m, I).pass();
        matrix n = corpus::random_nilpotent(rng, static_cast<std::size_t>(corpus::uniform(rng, 1, 6)));
        weight = weight && verify_monodromy_filtration(n, monodromy_weight_filtration(n), 0).pass();
        const std::size_t nv = static_cast<std::size_t>(corpus::uniform(rng, 1, 2));
        gw_potential pot = corpus::random_potential(rng, nv, corpus::uniform(rng, 1, std::max(1, cap)));
        amodel_vhs v = build_vhs(pot);
        reconstruct_options ro;
        ro.shuffle_seed = seed + static_cast<std::uint64_t>(t);
        orbit_germ g = reconstruct_gamma(v.germ.gamma_part(1), v.limit, ro);
        orbit = orbit && g.gamma == v.germ.gamma && lie_polynomial_check(g).pass();
        gw_potential back = potential_from_vhs(v);
        amod = amod && v.checks.pass() && higgs_equals_product(v).pass() && back.instantons == pot.instantons;
        extension_class e = extension_from_amodel(v);
        b_quantum_product bp = three_point(e);
        bool same = b_associativity(bp, e).pass();
        for (std::size_t a = 0; a < nv; ++a)
            for (std::size_t b = 0; b < nv; ++b)
                for (std::size_t c = 0; c < nv; ++c) same = same && bp.phi[a][b][c] == v.quantum.c(a, b, c);
        bmod = bmod && same;
    }
    out.checks.add("bigrading of random mixed Hodge structures", bigr);
    out.checks.add("monodromy weight filtration of random nilpotents", weight);
    out.checks.add("orbit reconstruction from Gamma_{-1}", orbit);
    out.checks.add("A-model variation and potential round trip", amod);
    out.checks.add("B-model three-point function equals the Yukawa series", bmod);
    out.results["seed"] = std::to_string(seed);
    out.results["count"] = count;
    out.summary = std::to_string(count) + " random instance(s) per suite, seed " + std::to_string(seed);
    return out;
}

inline std::string error_detail(const error &e) {
    std::string w = e.what();
    const std::string prefix = e.kind() + ": ";
    return w.rfind(prefix, 0) == 0 ? w.substr(prefix.size()) : w;
}

} // namespace detail

// Runs one command on the text of a problem file.
inline run_result run_command(const std::string &command, const std::string &text, const run_options &opt = {}) {
    using namespace detail;
    json rep = json::object();
    rep["version"] = report_version;
    rep["command"] = command;
    rep["verdict"] = nullptr;
    run_result rr;
    auto finish = [&](const std::string &verdict, int code, const std::string &summary) {
        rep["verdict"] = verdict;
        rr.code = code;
        rr.report = to_text(rep);
        rr.summary = command + ": " + verdict + (summary.empty() ? "" : "; " + summary);
        return rr;
    };
    auto kit = command_kinds().find(command);
    if (kit == command_kinds().end()) {
        rep["error"] = json::object({{"kind", "ValidationError"}, {"detail", "unknown command \"" + command + "\""}});
        return finish("invalid", exit_invalid, "unknown command");
    }
    problem p;
    try {
        p = parse_problem(text, opt.order);
        if (p.kind != kit->second) {
            throw validation_error("command " + command + " needs a problem of kind \"" + kit->second + "\", found \"" +
                                   p.kind + "\"");
        }
    } catch (const error &e) {
        rep["error"] = json::object({{"kind", e.kind()}, {"detail", error_detail(e)}});
        return finish("invalid", exit_invalid, e.what());
    }
    rep["kind"] = p.kind;
    outcome out;
    try {
        if (command == "bigrading" || command == "mhs") out = run_bigrading(p);
        else if (command == "weight-filtration") out = run_weight_filtration(p);
        else if (command == "rel-weight") out = run_rel_weight(p);
        else if (command == "higgs-extract") out = run_higgs(p);
        else if (command == "orbit-reconstruct") out = run_orbit(p, opt);
        else if (command == "amodel") out = run_amodel(p);
        else if (command == "wdvv") out = run_wdvv(p);
        else if (command == "bmodel") out = run_bmodel(p);
        else out = run_verify(p, opt);
    } catch (const check_failure &e) {
        rep["error"] = json::object({{"kind", e.kind()}, {"detail", error_detail(e)}});
        return finish("fail", exit_check_failed, e.what());
    } catch (const error &e) {
        rep["error"] = json::object({{"kind", e.kind()}, {"detail", error_detail(e)}});
        return finish("invalid", exit_invalid, e.what());
    }
    rep["checks"] = checks_json(out.checks);
    rep["results"] = out.results;
    if (out.checks.pass()) return finish("pass", exit_pass, out.summary);
    const check_result *f = out.checks.first_failure();
    std::string why = out.summary.empty() ? f->name : out.summary + "; first failure: " + f->name;
    if (command == "wdvv") why = out.summary;
    return finish("fail", exit_check_failed, why);
}

} // namespace hodge::io
