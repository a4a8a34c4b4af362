#include "ptspec/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ptspec/oracle.hpp"
#include "ptspec/spectra.hpp"

namespace ptspec {

using json = nlohmann::ordered_json;

namespace {

const double kPi = std::acos(-1.0);

// Round to 15 significant digits so that output bytes do not depend on the last bits.
double r15(double v)
{
    if (!std::isfinite(v))
        return v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::strtod(buf, nullptr);
}

json num(double v)
{
    if (!std::isfinite(v))
        return nullptr;
    return r15(v);
}

std::string fmt(double v, int prec = 10)
{
    std::ostringstream s;
    s << std::setprecision(prec) << v;
    return s.str();
}

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

} // namespace

double parse_angle(const std::string& text)
{
    static const std::regex pi_form(R"(^\s*([-+]?[0-9]*\.?[0-9]*)\s*\*?\s*pi\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$)",
                                    std::regex::icase);
    std::smatch m;
    if (std::regex_match(text, m, pi_form)) {
        double k = 1.0;
        const std::string ks = m[1].str();
        if (ks == "-")
            k = -1.0;
        else if (!ks.empty() && ks != "+")
            k = std::stod(ks);
        const double d = m[2].matched ? std::stod(m[2].str()) : 1.0;
        if (d == 0)
            throw UsageError("division by zero in angle '" + text + "'");
        return k * kPi / d;
    }
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw UsageError("cannot parse angle '" + text + "'");
    }
    if (used != text.size())
        throw UsageError("cannot parse angle '" + text + "'");
    return v;
}

// ---- verification suites ---------------------------------------------------

namespace {

SuiteResult suite_wronskian(int n, bool fault)
{
    SuiteResult r{"wronskian", true, 0.0, ""};
    double worst12 = 0.0, worst_self = 0.0;
    for (int nn : {n, n + 1}) {
        ReferencePair ref = *cached_reference_pair(PotentialSpec::limit_circle(nn), 1e-12);
        if (fault)
            ref.w2.samples = ref.w2.samples.scaled(1.0 + 1e-3);
        const auto& g = ref.w1.samples.grid();
        for (std::size_t i = 0; i < g.size(); ++i) {
            const SamplePoint a{ref.w1.samples.values()[i], ref.w1.samples.derivatives()[i]};
            const SamplePoint b{ref.w2.samples.values()[i], ref.w2.samples.derivatives()[i]};
            worst12 = std::max(worst12, std::abs(bracket(a, b) - 1.0));
            worst_self = std::max({worst_self, std::abs(bracket(a, a)), std::abs(bracket(b, b))});
        }
    }
    r.residual = worst12;
    r.pass = worst12 < 1e-7 && worst_self < 1e-9;
    r.detail = "sup|[w1,w2]-1| = " + fmt(worst12, 3) + ", sup|[wi,wi]| = " + fmt(worst_self, 3) +
               " (n = " + std::to_string(n) + ", " + std::to_string(n + 1) + ")";
    return r;
}

cplx random_c(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double re = u(rng);
    return {re, u(rng)};
}

BoundaryFunctionals conj_of(const BoundaryFunctionals& b)
{
    return {std::conj(b.a1), std::conj(b.a2), std::conj(b.b1), std::conj(b.b2)};
}

SuiteResult suite_transforms(int n)
{
    SuiteResult r{"transforms", true, 0.0, ""};
    const auto ref = cached_reference_pair(PotentialSpec::limit_circle(n), 1e-12);
    std::mt19937_64 rng(43);
    double worst = 0.0, printed_t = 0.0;
    for (int i = 0; i < 20; ++i) {
        const GluedFunction g = build_glued(*ref, {random_c(rng), random_c(rng)}, {random_c(rng), random_c(rng)});
        const BoundaryFunctionals bf = functionals(g.samples, *ref);
        const BoundaryFunctionals bp = functionals(apply_parity(g.samples), *ref);
        const BoundaryFunctionals bt = functionals(apply_time_reversal(g.samples), *ref);
        const BoundaryFunctionals bpt = functionals(apply_parity(apply_time_reversal(g.samples)), *ref);
        worst = std::max({worst, max_abs_diff(bf, g.predicted()), max_abs_diff(bp, transform_parity(bf)),
                          max_abs_diff(bt, conj_of(bf)),
                          max_abs_diff(bpt, transform_time_reversal(bf))});
        printed_t = std::max(printed_t, max_abs_diff(bt, transform_time_reversal(bf)));
    }
    r.residual = worst;
    r.pass = worst < 1e-6;
    r.detail = "20 glued functions: prescribed values, P, T (conjugation) and PT laws, max deviation " + fmt(worst, 3) +
               "; T against the swapped-endpoint law deviates by " + fmt(printed_t, 3);
    return r;
}

SuiteResult suite_classification()
{
    SuiteResult r{"classification", true, 0.0, ""};
    int mismatches = 0, symmetric = 0;
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) {
            const bool v = is_pt_symmetric_separated({i * kPi / 12, j * kPi / 12}).symmetric;
            const bool expect = (i + j == 0) || (i + j == 12);
            symmetric += v;
            mismatches += v != expect;
        }
    std::mt19937_64 rng(45);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    const double phis[] = {0.0, kPi / 4, kPi / 2, kPi};
    for (int i = 0; i < 200; ++i) {
        MixedBC bc;
        bc.phi = phis[i % 4];
        bc.a = u(rng);
        bc.b = u(rng) - 1.25;
        bc.c = u(rng) - 1.25;
        if (i % 3 == 0)
            bc.d = bc.a, bc.c = (bc.a * bc.a - 1) / bc.b;
        else
            bc.d = (1 + bc.b * bc.c) / bc.a;
        if (std::abs(bc.a * bc.d - bc.b * bc.c - 1) > kAngleSlack)
            bc.d = (1 + bc.b * bc.c) / bc.a;
        const bool expect = (bc.phi == 0.0 || bc.phi == kPi) && std::abs(bc.a - bc.d) <= kAngleSlack;
        mismatches += is_pt_symmetric_mixed(bc).symmetric != expect;
    }
    r.residual = mismatches;
    r.pass = mismatches == 0 && symmetric == 12;
    r.detail = std::to_string(symmetric) + " symmetric separated pairs of 144, " +
               std::to_string(mismatches) + " mismatches (incl. 200 mixed)";
    return r;
}

SuiteResult suite_ptdomain(int n)
{
    SuiteResult r{"ptdomain", true, 0.0, ""};
    const auto ref = cached_reference_pair(PotentialSpec::limit_circle(n), 1e-12);
    std::mt19937_64 rng(47);
    double worst_sym = 0.0, worst_counter = 0.0, min_mixed = 1e300;
    const std::vector<BoundaryCondition> symmetric = {
        SeparatedBC{0.0, 0.0}, SeparatedBC{kPi / 3, 2 * kPi / 3}, SeparatedBC{kPi / 2, kPi / 2},
        MixedBC{0.0, 1.0, 0.0, 0.0, 1.0}, MixedBC{kPi, 2.0, 3.0, 1.0, 2.0}};
    for (const auto& bc : symmetric)
        for (int i = 0; i < 4; ++i) {
            const GluedFunction g = project_domain(*ref, bc, {random_c(rng), random_c(rng)});
            worst_sym = std::max(worst_sym, pt_domain_check(functionals(g.samples, *ref), bc));
        }
    for (auto [a, b] : {std::pair{kPi / 3, kPi / 2}, {kPi / 6, kPi / 4}, {0.0, kPi / 5}}) {
        const SeparatedBC bc{a, b};
        const GluedFunction y = separated_counterexample(*ref, bc);
        const double res = pt_domain_check(functionals(y.samples, *ref), bc);
        worst_counter = std::max(worst_counter, std::abs(res - std::abs(std::sin(a + b))));
    }
    for (const MixedBC& bc : {MixedBC{kPi / 2, 1, 0, 0, 1}, MixedBC{0.0, 2, 1, 1, 1}}) {
        const auto [y, z] = mixed_counterexamples(*ref, bc);
        const double res = std::max(pt_domain_check(functionals(y.samples, *ref), bc),
                                    pt_domain_check(functionals(z.samples, *ref), bc));
        min_mixed = std::min(min_mixed, res);
    }
    r.residual = std::max(worst_sym, worst_counter);
    r.pass = worst_sym < 1e-6 && worst_counter < 1e-6 && min_mixed > 1e-3;
    r.detail = "symmetric bc residual " + fmt(worst_sym, 3) + ", |sin(a+b)| deviation " +
               fmt(worst_counter, 3) + ", smallest mixed counterexample residual " + fmt(min_mixed, 3);
    return r;
}

SuiteResult suite_oracle(int n)
{
    SuiteResult r{"oracle", true, 0.0, ""};
    const PotentialSpec spec = PotentialSpec::limit_point(n);
    const int k = 6;
    const LimitPointResult lp = solve_limit_point(spec, k);
    const std::vector<double> fd = fd_spectrum_limit_point(spec, {}, k);
    double worst = 0.0;
    for (int i = 0; i < k && i < static_cast<int>(lp.records.size()); ++i)
        worst = std::max(worst, std::abs(lp.records[i].lambda - fd[i]) / std::abs(fd[i]));
    r.residual = worst;
    r.pass = !lp.truncated && worst < 1e-6;
    r.detail = "first " + std::to_string(k) + " shooting vs FD eigenvalues, max relative gap " + fmt(worst, 3);
    return r;
}

} // namespace

std::vector<SuiteResult> run_verify(int n, const std::string& suite, bool inject_fault)
{
    if (!suite.empty() && std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end())
        throw UsageError("unknown suite '" + suite + "'");
    std::vector<SuiteResult> out;
    auto want = [&](const char* s) { return suite.empty() || suite == s; };
    auto guarded = [&](const char* name, auto&& fn) {
        try {
            out.push_back(fn());
        } catch (const std::exception& e) {
            out.push_back({name, false, NAN, std::string("error: ") + e.what()});
        }
    };
    if (want("wronskian"))
        guarded("wronskian", [&] { return suite_wronskian(n, inject_fault); });
    if (want("transforms"))
        guarded("transforms", [&] { return suite_transforms(n); });
    if (want("classification"))
        guarded("classification", [&] { return suite_classification(); });
    if (want("ptdomain"))
        guarded("ptdomain", [&] { return suite_ptdomain(n); });
    if (want("oracle"))
        guarded("oracle", [&] { return suite_oracle(n); });
    return out;
}

// ---- command line ----------------------------------------------------------

namespace {

struct RunConfig
{
    std::string command;
    int n = 1;
    std::string branch = "lc";
    std::optional<std::string> alpha, beta, phi;
    std::optional<double> a, b, c, d;
    std::optional<std::string> window;
    int kmax = 6;
    double tol = 1e-10;
    double functional_tol = 1e-8;
    std::string format = "json";
    std::string out_path;
    std::string suite;
    std::string cache;
    int index = 0;
    int points = 401;
    std::vector<int> k_values = {4, 8, 16, 32, 64};
    bool inject_fault = false;
};

std::optional<BoundaryCondition> read_bc(const RunConfig& cfg)
{
    const bool sep = cfg.alpha || cfg.beta;
    const bool mix = cfg.phi || cfg.a || cfg.b || cfg.c || cfg.d;
    if (sep && mix)
        throw UsageError("separated (--alpha/--beta) and mixed (--phi/--a/--b/--c/--d) flags are exclusive");
    BoundaryCondition bc;
    if (sep) {
        if (!cfg.alpha || !cfg.beta)
            throw UsageError("separated condition needs both --alpha and --beta");
        bc = SeparatedBC{parse_angle(*cfg.alpha), parse_angle(*cfg.beta)};
    } else if (mix) {
        MixedBC m;
        m.phi = cfg.phi ? parse_angle(*cfg.phi) : 0.0;
        m.a = cfg.a.value_or(1.0);
        m.b = cfg.b.value_or(0.0);
        m.c = cfg.c.value_or(0.0);
        m.d = cfg.d.value_or(1.0);
        bc = m;
    } else {
        return std::nullopt;
    }
    try {
        validate(bc);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    return bc;
}

std::pair<double, double> read_window(const std::string& w)
{
    const auto colon = w.find(':');
    if (colon == std::string::npos)
        throw UsageError("--window must have the form LO:HI");
    double lo = 0, hi = 0;
    try {
        lo = std::stod(w.substr(0, colon));
        hi = std::stod(w.substr(colon + 1));
    } catch (const std::exception&) {
        throw UsageError("--window must have the form LO:HI with numeric bounds");
    }
    if (!(lo <= hi))
        throw UsageError("--window requires LO <= HI");
    return {lo, hi};
}

json bc_json(const BoundaryCondition& bc)
{
    if (const auto* s = std::get_if<SeparatedBC>(&bc))
        return {{"type", "separated"}, {"alpha", num(s->alpha)}, {"beta", num(s->beta)}};
    const auto& m = std::get<MixedBC>(bc);
    return {{"type", "mixed"}, {"phi", num(m.phi)}, {"a", num(m.a)}, {"b", num(m.b)}, {"c", num(m.c)}, {"d", num(m.d)}};
}

std::string bc_text(const BoundaryCondition& bc)
{
    if (const auto* s = std::get_if<SeparatedBC>(&bc))
        return "alpha=" + fmt(s->alpha, 6) + " beta=" + fmt(s->beta, 6);
    const auto& m = std::get<MixedBC>(bc);
    return "phi=" + fmt(m.phi, 6) + " B=[[" + fmt(m.a, 6) + "," + fmt(m.b, 6) + "],[" + fmt(m.c, 6) + "," +
           fmt(m.d, 6) + "]]";
}

json config_json(const RunConfig& cfg, const std::optional<BoundaryCondition>& bc)
{
    json c;
    c["command"] = cfg.command;
    c["n"] = cfg.n;
    c["branch"] = cfg.branch;
    c["bc"] = bc ? bc_json(*bc) : json(nullptr);
    c["window"] = cfg.window ? json(*cfg.window) : json(nullptr);
    c["kmax"] = cfg.kmax;
    c["tol"] = num(cfg.tol);
    c["functional_tol"] = num(cfg.functional_tol);
    if (cfg.command == "verify")
        c["suite"] = cfg.suite.empty() ? json("all") : json(cfg.suite);
    if (cfg.command == "eigfn")
        c["index"] = cfg.index, c["points"] = cfg.points;
    if (cfg.command == "demo-nonclosed")
        c["k"] = cfg.k_values;
    return c;
}

PotentialSpec read_spec(const RunConfig& cfg)
{
    if (cfg.n < 1)
        throw UsageError("--n must be >= 1");
    return cfg.branch == "lp" ? PotentialSpec::limit_point(cfg.n) : PotentialSpec::limit_circle(cfg.n);
}

std::shared_ptr<const ReferencePair> reference_for(const RunConfig& cfg, const PotentialSpec& spec)
{
    const double ref_tol = 1e-12;
    if (cfg.cache.empty())
        return cached_reference_pair(spec, ref_tol);
    if (std::filesystem::exists(cfg.cache)) {
        ReferencePair r = load_reference(cfg.cache);
        if (r.spec.n != spec.n)
            throw UsageError("cache file " + cfg.cache + " holds n = " + std::to_string(r.spec.n));
        return std::make_shared<const ReferencePair>(std::move(r));
    }
    auto r = cached_reference_pair(spec, ref_tol);
    save_reference(*r, cfg.cache);
    return r;
}

json record_json(const EigenRecord& r)
{
    json j;
    j["lambda"] = num(r.lambda);
    j["multiplicity"] = r.multiplicity;
    j["krein_sign"] = to_string(r.krein_sign);
    j["parity"] = to_string(r.parity);
    j["flagged"] = r.flagged;
    j["residuals"] = {{"det", num(r.det_residual)},
                      {"ode", num(r.ode_residual)},
                      {"bc", num(r.bc_residual)},
                      {"parity", num(r.parity_residual)}};
    return j;
}

std::vector<EigenRecord> compute_spectrum(const RunConfig& cfg, const PotentialSpec& spec,
                                          const std::optional<BoundaryCondition>& bc)
{
    if (!spec.is_limit_circle()) {
        if (bc)
            throw UsageError("limit-point branch takes no boundary condition");
        if (cfg.kmax < 1)
            throw UsageError("--kmax must be >= 1");
        LimitPointResult lp = solve_limit_point(spec, cfg.kmax, cfg.tol);
        if (lp.truncated)
            throw ConvergenceError("only " + std::to_string(lp.records.size()) + " of " +
                                       std::to_string(cfg.kmax) + " eigenvalues resolved",
                                   NAN);
        return std::move(lp.records);
    }
    if (!bc)
        throw UsageError("limit-circle spectrum needs a boundary condition (--alpha/--beta or --phi/--a/--b/--c/--d)");
    if (!cfg.window)
        throw UsageError("limit-circle spectrum needs --window LO:HI");
    const auto [lo, hi] = read_window(*cfg.window);
    const auto ref = reference_for(cfg, spec);
    LimitCircleOptions opts;
    opts.tol = cfg.tol;
    opts.functional_tol = cfg.functional_tol;
    return solve_limit_circle(spec, *ref, *bc, lo, hi, opts);
}

json residual_summary(const std::vector<EigenRecord>& recs)
{
    double det = 0, ode = 0, bcr = 0, par = 0;
    for (const auto& r : recs) {
        det = std::max(det, r.det_residual);
        ode = std::max(ode, r.ode_residual);
        bcr = std::max(bcr, r.bc_residual);
        par = std::max(par, r.parity_residual);
    }
    return {{"det", num(det)}, {"ode", num(ode)}, {"bc", num(bcr)}, {"parity", num(par)}};
}

void print_table(std::ostream& os, const std::vector<std::string>& head,
                 const std::vector<std::vector<std::string>>& rows)
{
    std::vector<std::size_t> w(head.size());
    for (std::size_t i = 0; i < head.size(); ++i)
        w[i] = head[i].size();
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size(); ++i)
            w[i] = std::max(w[i], r[i].size());
    auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i)
            os << std::left << std::setw(static_cast<int>(w[i]) + (i + 1 < r.size() ? 2 : 0)) << r[i];
        os << '\n';
    };
    line(head);
    for (const auto& r : rows)
        line(r);
}

struct Output
{
    json results = json::array();
    json residuals = json::object();
    std::vector<std::string> head;
    std::vector<std::vector<std::string>> rows;
    bool failed = false;
};

Output cmd_classify(const std::optional<BoundaryCondition>& bc)
{
    Output o;
    o.head = {"bc", "verdict", "reason"};
    auto add = [&](const BoundaryCondition& b) {
        const PTVerdict v = is_pt_symmetric(b);
        json j = bc_json(b);
        j["pt_symmetric"] = v.symmetric;
        j["reason"] = to_string(v.reason);
        o.results.push_back(j);
        o.rows.push_back({bc_text(b), v.symmetric ? "symmetric" : "not symmetric", to_string(v.reason)});
    };
    if (bc) {
        add(*bc);
        return o;
    }
    int count = 0;
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) {
            const SeparatedBC s{i * kPi / 12, j * kPi / 12};
            add(s);
            count += is_pt_symmetric_separated(s).symmetric;
        }
    o.residuals["symmetric_count"] = count;
    return o;
}

Output cmd_spectrum(const RunConfig& cfg)
{
    const PotentialSpec spec = read_spec(cfg);
    const auto bc = read_bc(cfg);
    const auto recs = compute_spectrum(cfg, spec, bc);
    Output o;
    o.head = {"lambda", "mult", "krein", "parity", "det_res", "ode_res", "bc_res", "flag"};
    for (const auto& r : recs) {
        o.results.push_back(record_json(r));
        o.rows.push_back({fmt(r.lambda, 15), std::to_string(r.multiplicity), to_string(r.krein_sign),
                          to_string(r.parity), fmt(r.det_residual, 3), fmt(r.ode_residual, 3),
                          fmt(r.bc_residual, 3), r.flagged ? "*" : ""});
    }
    o.residuals = residual_summary(recs);
    return o;
}

Output cmd_eigfn(const RunConfig& cfg)
{
    const PotentialSpec spec = read_spec(cfg);
    const auto bc = read_bc(cfg);
    if (cfg.points < 2)
        throw UsageError("--points must be >= 2");
    if (cfg.index < 0)
        throw UsageError("--index must be >= 0");
    RunConfig c2 = cfg;
    if (!spec.is_limit_circle())
        c2.kmax = std::max(cfg.kmax, cfg.index + 1);
    const auto recs = compute_spectrum(c2, spec, bc);
    if (cfg.index >= static_cast<int>(recs.size()))
        throw ConvergenceError("eigenvalue index " + std::to_string(cfg.index) + " not found (" +
                                   std::to_string(recs.size()) + " available)",
                               NAN);
    const EigenRecord& r = recs[cfg.index];
    Output o;
    o.head = {"x", "re", "im"};
    for (std::size_t e = 0; e < r.eigenfunctions.size(); ++e) {
        const SampledFunction& f = r.eigenfunctions[e];
        json xs = json::array(), re = json::array(), im = json::array();
        for (int i = 0; i < cfg.points; ++i) {
            const double x = f.front() + (f.back() - f.front()) * i / (cfg.points - 1);
            const cplx y = f.at(x).y;
            xs.push_back(num(x));
            re.push_back(num(y.real()));
            im.push_back(num(y.imag()));
            if (e == 0)
                o.rows.push_back({fmt(x, 10), fmt(y.real(), 12), fmt(y.imag(), 12)});
        }
        json j = record_json(r);
        j["x"] = xs;
        j["re"] = re;
        j["im"] = im;
        o.results.push_back(j);
    }
    o.residuals = residual_summary({r});
    return o;
}

Output cmd_verify(const RunConfig& cfg)
{
    if (cfg.n < 1)
        throw UsageError("--n must be >= 1");
    Output o;
    o.head = {"suite", "status", "residual", "detail"};
    for (const auto& s : run_verify(cfg.n, cfg.suite, cfg.inject_fault)) {
        o.results.push_back({{"suite", s.name}, {"pass", s.pass}, {"residual", num(s.residual)}, {"detail", s.detail}});
        o.residuals[s.name] = num(s.residual);
        o.rows.push_back({s.name, s.pass ? "PASS" : "FAIL", fmt(s.residual, 3), s.detail});
        o.failed |= !s.pass;
    }
    return o;
}

Output cmd_demo(const RunConfig& cfg)
{
    if (cfg.n < 1)
        throw UsageError("--n must be >= 1");
    for (int k : cfg.k_values)
        if (k < 2)
            throw UsageError("--k values must be >= 2");
    const NonClosednessReport rep = nonclosedness_demo(cfg.n, cfg.k_values);
    Output o;
    o.head = {"k", "||y_k-y||", "||tau y_k - tau y||", "alpha_k", "alpha_k(printed)"};
    for (std::size_t i = 0; i < rep.k_values.size(); ++i) {
        o.results.push_back({{"k", rep.k_values[i]},
                             {"dist_y", num(rep.dist_y[i])},
                             {"dist_tau", num(rep.dist_tau[i])},
                             {"alpha", num(rep.alpha[i])},
                             {"alpha_printed", num(rep.alpha_printed[i])}});
        o.rows.push_back({std::to_string(rep.k_values[i]), fmt(rep.dist_y[i], 6), fmt(rep.dist_tau[i], 6),
                          fmt(rep.alpha[i], 6), fmt(rep.alpha_printed[i], 6)});
    }
    o.residuals = {{"tau_y_norm", num(rep.tau_y_norm)}, {"coefficient_discrepancy", rep.coefficient_discrepancy}};
    return o;
}

void add_common(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--n", cfg.n, "family index n >= 1")->capture_default_str();
    sub->add_option("--branch", cfg.branch, "lp (x^{4n+2}) or lc (-x^{4n+4})")
        ->check(CLI::IsMember({"lp", "lc"}))
        ->capture_default_str();
    sub->add_option("--tol", cfg.tol, "root tolerance")->capture_default_str();
    sub->add_option("--functional-tol", cfg.functional_tol, "boundary functional tolerance")->capture_default_str();
    sub->add_option("--format", cfg.format, "json or table")->check(CLI::IsMember({"json", "table"}))->capture_default_str();
    sub->add_option("--out", cfg.out_path, "write output to PATH instead of stdout");
    sub->add_option("--cache", cfg.cache, "reference pair cache file");
}

void add_bc(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--alpha", cfg.alpha, "separated angle at -inf, in [0, pi)");
    sub->add_option("--beta", cfg.beta, "separated angle at +inf, in [0, pi)");
    sub->add_option("--phi", cfg.phi, "mixed phase, in [0, 2 pi)");
    sub->add_option("--a", cfg.a);
    sub->add_option("--b", cfg.b);
    sub->add_option("--c", cfg.c);
    sub->add_option("--d", cfg.d);
    sub->add_option("--window", cfg.window, "spectral window LO:HI (limit circle)");
    sub->add_option("--kmax", cfg.kmax, "number of eigenvalues (limit point)")->capture_default_str();
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Spectra of PT-symmetric operators -y'' + q y on the real line", "ptspec"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    auto* classify = app.add_subcommand("classify", "PT-symmetry verdicts for boundary conditions");
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues with Krein signature and residuals");
    auto* eigfn = app.add_subcommand("eigfn", "sampled eigenfunction");
    auto* verify = app.add_subcommand("verify", "property suites");
    auto* demo = app.add_subcommand("demo-nonclosed", "non-closedness of the minimal operator");
    for (auto* s : {classify, spectrum, eigfn, verify, demo})
        add_common(s, cfg);
    for (auto* s : {classify, spectrum, eigfn})
        add_bc(s, cfg);
    eigfn->add_option("--index", cfg.index, "eigenvalue index in ascending order")->capture_default_str();
    eigfn->add_option("--points", cfg.points, "number of output samples")->capture_default_str();
    verify->add_option("--suite", cfg.suite, "run only this suite");
    verify->add_flag("--inject-fault", cfg.inject_fault)->group("");
    demo->add_option("--k", cfg.k_values, "cutoff parameters")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    Output o;
    std::optional<BoundaryCondition> bc;
    try {
        bc = cfg.command == "verify" || cfg.command == "demo-nonclosed" ? std::nullopt : read_bc(cfg);
        if (cfg.command == "classify")
            o = cmd_classify(bc);
        else if (cfg.command == "spectrum")
            o = cmd_spectrum(cfg);
        else if (cfg.command == "eigfn")
            o = cmd_eigfn(cfg);
        else if (cfg.command == "verify")
            o = cmd_verify(cfg);
        else
            o = cmd_demo(cfg);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    std::ostringstream text;
    if (cfg.format == "json") {
        json doc;
        doc["config"] = config_json(cfg, bc);
        doc["results"] = o.results;
        doc["residuals"] = o.residuals;
        doc["version"] = kVersion;
        text << doc.dump(2) << '\n';
    } else {
        print_table(text, o.head, o.rows);
    }
    if (cfg.out_path.empty()) {
        out << text.str();
    } else {
        std::ofstream f(cfg.out_path, std::ios::binary);
        if (!f) {
            err << "error: cannot write " << cfg.out_path << '\n';
            return 1;
        }
        f << text.str();
    }
    return o.failed ? 1 : 0;
}

} // namespace ptspec
