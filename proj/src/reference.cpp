#include "ptspec/reference.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <mutex>

#include "json.hpp"

namespace ptspec {

double reference_extent(int n)
{
    // about 2000 radians of phase on each side
    const double k = 2.0 * n + 3.0;
    return std::min(40.0, std::pow(2000.0 * k, 1.0 / k));
}

ReferencePair build_reference_pair(const PotentialSpec& spec, double tol, double X_inf)
{
    if (!spec.is_limit_circle())
        throw BranchError("reference pair requires the limit-circle branch");
    if (X_inf <= 0)
        X_inf = reference_extent(spec.n);
    if (X_inf > 40)
        throw Error("reference extent is capped at 40");
    IntegrationOptions opts;
    opts.tol = tol;
    FundamentalPair fp = fundamental_pair(spec, 0.0, X_inf, opts);
    ReferencePair ref;
    ref.spec = spec;
    ref.X_inf = X_inf;
    ref.tol = tol;
    ref.w1 = fp.v;
    ref.w2 = fp.u;
    ref.w2.samples = fp.u.samples.scaled(-1.0);
    for (auto& t : ref.w2.tail_params)
        t.re.theta += std::acos(-1.0);
    return ref;
}

namespace {

std::mutex cache_mutex;
std::map<std::pair<int, double>, std::shared_ptr<const ReferencePair>> cache;

} // namespace

std::shared_ptr<const ReferencePair> cached_reference_pair(const PotentialSpec& spec, double tol)
{
    if (!spec.is_limit_circle())
        throw BranchError("reference pair requires the limit-circle branch");
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto& slot = cache[{spec.n, tol}];
    if (!slot)
        slot = std::make_shared<const ReferencePair>(build_reference_pair(spec, tol));
    return slot;
}

void clear_reference_cache()
{
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.clear();
}

std::pair<SamplePoint, SamplePoint> eval_reference(const ReferencePair& ref, double x)
{
    return {ref.w1.eval(x), ref.w2.eval(x)};
}

double l2_norm_tail(const SolutionTrace& trace, double a)
{
    if (!trace.spec.is_limit_circle())
        throw BranchError("square-integrable tails exist on the limit-circle branch only");
    const SampledFunction& f = trace.samples;
    if (f.empty() || !(a < f.back()))
        throw Error("lower limit outside the sampled range");
    const auto g = f.grid();
    std::vector<double> x{a};
    std::vector<cplx> y, dy, cy, cdy;
    const SamplePoint pa = f.find(a) != SampledFunction::npos ? f.at(a) : trace.eval(a);
    y.push_back(pa.y);
    dy.push_back(pa.dy);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i] > a) {
            x.push_back(g[i]);
            y.push_back(f.values()[i]);
            dy.push_back(f.derivatives()[i]);
        }
    for (std::size_t i = 0; i < y.size(); ++i) {
        cy.push_back(std::conj(y[i]));
        cdy.push_back(std::conj(dy[i]));
    }
    double sum = integrate_product(x, y, dy, cy, cdy).real();
    const std::size_t last = y.size() - 1;
    sum += lg_tail_product(y[last], dy[last], cy[last], cdy[last], x.back(), trace.spec.n,
                           trace.lambda)
               .real();
    return std::max(0.0, sum);
}

namespace {

nlohmann::json trace_json(const SolutionTrace& t)
{
    nlohmann::json j;
    std::vector<double> y, dy;
    for (const cplx& v : t.samples.values())
        y.push_back(v.real());
    for (const cplx& v : t.samples.derivatives())
        dy.push_back(v.real());
    j["y"] = y;
    j["dy"] = dy;
    j["x_switch"] = t.x_switch;
    nlohmann::json tp = nlohmann::json::array();
    for (const TailParams& p : t.tail_params)
        tp.push_back({{"x", p.x}, {"theta", p.re.theta}, {"log_rho", p.re.log_rho},
                      {"zero", p.re.zero}});
    j["tail_params"] = tp;
    return j;
}

SolutionTrace trace_from(const nlohmann::json& j, const std::vector<double>& grid,
                         const PotentialSpec& spec)
{
    const auto y = j.at("y").get<std::vector<double>>();
    const auto dy = j.at("dy").get<std::vector<double>>();
    SolutionTrace t;
    t.spec = spec;
    t.lambda = 0.0;
    t.samples = SampledFunction(grid, {y.begin(), y.end()}, {dy.begin(), dy.end()},
                                {TailKind::PhaseAmplitude, spec.n, 0.0});
    t.x_switch = j.at("x_switch").get<double>();
    for (const auto& p : j.at("tail_params")) {
        TailParams tp;
        tp.x = p.at("x").get<double>();
        tp.re = {p.at("theta").get<double>(), p.at("log_rho").get<double>(),
                 p.at("zero").get<bool>()};
        t.tail_params.push_back(tp);
    }
    return t;
}

} // namespace

void save_reference(const ReferencePair& ref, const std::string& path)
{
    nlohmann::json j;
    j["n"] = ref.spec.n;
    j["tol"] = ref.tol;
    j["X_inf"] = ref.X_inf;
    j["grid"] = std::vector<double>(ref.w1.samples.grid().begin(), ref.w1.samples.grid().end());
    j["w1"] = trace_json(ref.w1);
    j["w2"] = trace_json(ref.w2);
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path);
    out << j.dump();
}

ReferencePair load_reference(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot read " + path);
    nlohmann::json j;
    try {
        in >> j;
        ReferencePair ref;
        ref.spec = PotentialSpec::limit_circle(j.at("n").get<int>());
        ref.tol = j.at("tol").get<double>();
        ref.X_inf = j.at("X_inf").get<double>();
        const auto grid = j.at("grid").get<std::vector<double>>();
        ref.w1 = trace_from(j.at("w1"), grid, ref.spec);
        ref.w2 = trace_from(j.at("w2"), grid, ref.spec);
        return ref;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed reference file: ") + e.what());
    }
}

} // namespace ptspec
