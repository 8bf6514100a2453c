#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "bufstarv/bufstarv.hpp"

namespace bufstarv::cli {

namespace {

using json = nlohmann::ordered_json;
constexpr int schema_version = 1;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Bad flag combinations that CLI11 cannot express.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Column {
    std::string name;
    std::string unit;
};

struct Table {
    std::vector<Column> columns;
    std::vector<std::vector<double>> rows;
};

struct Result {
    Table table;
    json summary = json::object();
    bool verdict_failed = false;
};

struct Options {
    std::optional<double> lambda, mu, rho;
    std::optional<Count> x1, n, jmax;
    std::string mode;
    std::optional<double> alpha, beta, slot_d;
    std::string dist;
    std::optional<double> theta, nm, upsilon, varrho, sigma, gamma, delta;
    Count replications = 5000;
    std::uint64_t seed = 0;
    std::string out;
    std::string format;
    std::string sizes_csv;
    std::string n_sweep, x1_sweep, lambda_sweep, gamma_sweep;
    std::string scenario = "finite";
    bool parallel = false;
    std::optional<Count> resume;
    Count tolerate = 0;
    std::optional<double> x1_min, x1_max;
};

// ---- option registration -------------------------------------------------

void add_rates(CLI::App* s, Options& o)
{
    auto* lam = s->add_option("--lambda", o.lambda, "arrival rate (packets/s)");
    auto* mu = s->add_option("--mu", o.mu, "service rate (packets/s), default 1");
    auto* rho = s->add_option("--rho", o.rho, "traffic intensity lambda/mu, with mu = 1");
    auto* sweep = s->add_option("--lambda-sweep", o.lambda_sweep, "start:end:step over lambda");
    rho->excludes(lam)->excludes(mu)->excludes(sweep);
    sweep->excludes(lam);
}

void add_file(CLI::App* s, Options& o)
{
    auto* x1 = s->add_option("--x1", o.x1, "start-up threshold (packets)");
    auto* n = s->add_option("--n", o.n, "file size (packets)");
    s->add_option("--n-sweep", o.n_sweep, "start:end:step over N")->excludes(n);
    s->add_option("--x1-sweep", o.x1_sweep, "start:end:step over x1")->excludes(x1);
}

void add_jmax(CLI::App* s, Options& o)
{
    s->add_option("--jmax", o.jmax, "largest starvation count reported (default 3)");
}

void add_ipp(CLI::App* s, Options& o)
{
    s->add_option("--alpha", o.alpha, "IPP ON->OFF rate");
    s->add_option("--beta", o.beta, "IPP OFF->ON rate");
}

void add_mode(CLI::App* s, Options& o)
{
    s->add_option("--mode", o.mode, "binomial terms: exact or gaussian (default by N)")
        ->check(CLI::IsMember({"exact", "gaussian"}));
}

void add_sim(CLI::App* s, Options& o)
{
    s->add_option("--replications", o.replications, "Monte Carlo replications")->capture_default_str();
    s->add_option("--seed", o.seed, "master seed")->capture_default_str();
    s->add_flag("--parallel", o.parallel, "run replications on all cores (same results)");
    s->add_option("--resume", o.resume, "packets re-buffered after a starvation (default x1)");
}

void add_output(CLI::App* s, Options& o)
{
    s->add_option("--out", o.out, "output path; writes <out>.csv and/or <out>.json");
    s->add_option("--format", o.format, "csv, json or both (default: both with --out, csv on stdout)")
        ->check(CLI::IsMember({"csv", "json", "both"}));
}

// ---- parameter resolution ------------------------------------------------

std::vector<double> axis(const std::optional<double>& single, const std::string& sweep)
{
    if (!sweep.empty())
        return parse_sweep(sweep);
    if (single)
        return {*single};
    return {};
}

std::vector<Count> count_axis(const std::optional<Count>& single, const std::string& sweep, const char* name)
{
    std::vector<Count> out;
    if (!sweep.empty()) {
        for (double v : parse_sweep(sweep)) {
            if (v != std::floor(v))
                throw UsageError(std::string("--") + name + "-sweep must step through integers");
            out.push_back(static_cast<Count>(v));
        }
    } else if (single) {
        out.push_back(*single);
    }
    if (out.empty())
        throw UsageError(std::string("--") + name + " or --" + name + "-sweep is required");
    return out;
}

std::vector<double> lambda_axis(const Options& o)
{
    if (o.rho)
        return {*o.rho};
    auto v = axis(o.lambda, o.lambda_sweep);
    if (v.empty())
        throw UsageError("give --lambda (with optional --mu), --lambda-sweep or --rho");
    return v;
}

double service_rate(const Options& o)
{
    return o.mu.value_or(1.0);
}

std::optional<IppParams> ipp_of(const Options& o)
{
    if (o.alpha.has_value() != o.beta.has_value())
        throw UsageError("--alpha and --beta must be given together");
    if (!o.alpha)
        return std::nullopt;
    return IppParams(*o.alpha, *o.beta);
}

ArrivalModel arrivals_of(const Options& o)
{
    const auto ipp = ipp_of(o);
    if (ipp && o.slot_d)
        throw UsageError("--slot-d cannot be combined with --alpha/--beta");
    if (ipp)
        return *ipp;
    if (o.slot_d)
        return SlotParams(*o.slot_d);
    return PoissonArrivals{};
}

std::optional<ballot::PmfMode> mode_of(const Options& o)
{
    if (o.mode == "exact")
        return ballot::PmfMode::Exact;
    if (o.mode == "gaussian")
        return ballot::PmfMode::Gaussian;
    return std::nullopt;
}

struct Point {
    double lambda;
    Count x1;
    Count n;
};

std::vector<Point> file_points(const Options& o)
{
    const auto lambdas = lambda_axis(o);
    const auto x1s = count_axis(o.x1, o.x1_sweep, "x1");
    const auto ns = count_axis(o.n, o.n_sweep, "n");
    std::vector<Point> pts;
    for (double l : lambdas)
        for (Count x1 : x1s)
            for (Count n : ns)
                pts.push_back({l, x1, n});
    return pts;
}

Count jmax_of(const Options& o)
{
    const Count j = o.jmax.value_or(3);
    if (j < 0)
        throw ParameterError("--jmax must be non-negative");
    return j;
}

void add_pmf_columns(Table& t, Count jmax, const std::string& prefix = "pmf_")
{
    for (Count j = 0; j <= jmax; ++j)
        t.columns.push_back({prefix + std::to_string(j), "probability"});
}

// pmf entries 0..jmax, zero beyond the distribution's support.
void push_pmf(std::vector<double>& row, const Vector<double>& pmf, Count jmax)
{
    for (Count j = 0; j <= jmax; ++j)
        row.push_back(j < pmf.size() ? pmf(j) : 0.0);
}

std::vector<Column> point_columns()
{
    return {{"n", "packets"}, {"x1", "packets"}, {"lambda", "packets/s"}, {"mu", "packets/s"}, {"rho", "1"}};
}

std::vector<double> point_row(const Point& p, const QueueParams& qp)
{
    return {static_cast<double>(p.n), static_cast<double>(p.x1), qp.lambda(), qp.mu(), qp.rho()};
}

// ---- subcommands ---------------------------------------------------------

Result cmd_exact(const Options& o)
{
    const Count jmax = jmax_of(o);
    Result r;
    r.table.columns = point_columns();
    r.table.columns.push_back({"starvation_probability", "probability"});
    add_pmf_columns(r.table, jmax);
    for (const Point& p : file_points(o)) {
        const auto qp = QueueParams::from_rates(p.lambda, service_rate(o));
        const ScenarioSpec spec(p.n, p.x1);
        const auto mode = mode_of(o).value_or(ballot::default_mode(p.n));
        const auto d = ballot::starvation_pmf(qp, spec, std::min(jmax, spec.max_starvations()), mode);
        auto row = point_row(p, qp);
        row.push_back(ballot::starvation_probability(qp, spec, mode));
        push_pmf(row, d.pmf, jmax);
        r.table.rows.push_back(std::move(row));
    }
    return r;
}

StarvationDistribution recursive_pmf(const QueueParams& qp, const std::optional<IppParams>& ipp, const Point& p,
                                     Count jmax, std::optional<Count> resume)
{
    const auto kernel = ipp ? recursive::ipp_kernel(qp, *ipp, p.n) : recursive::mm1_kernel(qp, p.n);
    const Count bound = p.n / std::min(p.x1, resume.value_or(p.x1));
    return recursive::starvation_pmf_recursive(kernel, p.n, p.x1, std::min(jmax, bound),
                                               recursive::RecursionOptions{resume});
}

Result cmd_recursive(const Options& o)
{
    const Count jmax = jmax_of(o);
    const auto ipp = ipp_of(o);
    Result r;
    r.table.columns = point_columns();
    add_pmf_columns(r.table, jmax);
    for (const Point& p : file_points(o)) {
        const auto qp = QueueParams::from_rates(p.lambda, service_rate(o));
        (void)ScenarioSpec(p.n, p.x1);
        auto row = point_row(p, qp);
        push_pmf(row, recursive_pmf(qp, ipp, p, jmax, o.resume).pmf, jmax);
        r.table.rows.push_back(std::move(row));
    }
    return r;
}

Result cmd_takacs(const Options& o)
{
    const Count jmax = jmax_of(o);
    const double d = o.slot_d.value_or(1.0);
    Result r;
    r.table.columns = {{"n", "packets"},   {"x1", "packets"}, {"lambda", "packets/s"},
                       {"slot_d", "s"},     {"lambda_d", "packets/slot"},
                       {"starvation_probability", "probability"}};
    add_pmf_columns(r.table, jmax);
    for (const Point& p : file_points(o)) {
        // --rho is read as the per-slot load lambda d.
        const double lambda = o.rho ? p.lambda / d : p.lambda;
        const takacs::SlottedScenario scn(lambda, SlotParams(d), p.n, p.x1);
        std::vector<double> row{static_cast<double>(p.n), static_cast<double>(p.x1), lambda, d,
                                scn.per_slot_mean(), takacs::takacs_starvation_probability(scn)};
        push_pmf(row, takacs::takacs_pmf(scn, std::min(jmax, scn.max_starvations())).pmf, jmax);
        r.table.rows.push_back(std::move(row));
    }
    return r;
}

fluid::FileSizeDistribution fluid_distribution(const Options& o)
{
    auto need = [](const std::optional<double>& v, const char* what) {
        if (!v)
            throw UsageError(what);
        return *v;
    };
    if (o.dist == "exp")
        return fluid::ExponentialSizes{need(o.theta, "--dist exp needs --theta")};
    if (o.dist == "pareto") {
        const double nm = need(o.nm, "--dist pareto needs --nm");
        if (o.upsilon)
            return fluid::ParetoSizes{nm, *o.upsilon};
        return fluid::match_means(1.0 / need(o.theta, "--dist pareto needs --upsilon or --theta"),
                                  fluid::Family::Pareto, nm);
    }
    if (o.dist == "lognormal") {
        const double varrho = need(o.varrho, "--dist lognormal needs --varrho");
        if (o.sigma)
            return fluid::LogNormalSizes{varrho, *o.sigma};
        return fluid::match_means(1.0 / need(o.theta, "--dist lognormal needs --sigma or --theta"),
                                  fluid::Family::LogNormal, varrho);
    }
    throw UsageError("give --dist exp|pareto|lognormal or --sizes-csv");
}

Result cmd_fluid(const Options& o)
{
    if (!o.sizes_csv.empty() && !o.dist.empty())
        throw UsageError("--sizes-csv replaces --dist; give only one");
    std::vector<double> sizes;
    std::optional<fluid::FileSizeDistribution> dist;
    if (!o.sizes_csv.empty())
        sizes = read_sizes_csv(o.sizes_csv);
    else
        dist = fluid_distribution(o);

    std::vector<double> x1s = axis(o.x1 ? std::optional<double>(static_cast<double>(*o.x1)) : std::nullopt, o.x1_sweep);
    if (x1s.empty())
        throw UsageError("--x1 or --x1-sweep is required");

    Result r;
    r.table.columns = {{"x1", "packets"},
                       {"lambda", "packets/s"},
                       {"mu", "packets/s"},
                       {"no_starvation_horizon", "packets"},
                       {"starvation_probability", "probability"}};
    for (double lambda : lambda_axis(o)) {
        for (double x1 : x1s) {
            const fluid::FluidScenario scn(lambda, service_rate(o), x1);
            const double horizon = fluid::no_starvation_horizon(scn);
            const double prob = dist ? fluid::fluid_starvation_probability(scn, *dist)
                                     : fluid::empirical_starvation_probability(scn, sizes);
            r.table.rows.push_back({x1, lambda, service_rate(o), horizon, prob});
        }
    }
    if (dist) {
        json d;
        std::visit([&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, fluid::ExponentialSizes>)
                d = {{"family", "exp"}, {"theta", v.theta}};
            else if constexpr (std::is_same_v<T, fluid::ParetoSizes>)
                d = {{"family", "pareto"}, {"n_m", v.n_m}, {"upsilon", v.upsilon}};
            else
                d = {{"family", "lognormal"}, {"varrho", v.varrho}, {"sigma", v.sigma}};
        }, *dist);
        d["mean"] = fluid::mean(*dist);
        r.summary["distribution"] = d;
    } else {
        r.summary["samples"] = sizes.size();
    }
    return r;
}

Result cmd_qoe(const Options& o)
{
    const qoe::ThresholdBounds bounds{o.x1_min, o.x1_max};
    auto gammas = axis(o.gamma, o.gamma_sweep);
    if (gammas.empty())
        throw UsageError("--gamma or --gamma-sweep is required");
    const double mu = service_rate(o);

    Result r;
    r.table.columns = {{"lambda", "packets/s"}, {"mu", "packets/s"},       {"gamma", "1/s^2"},
                       {"x1_optimal", "packets"}, {"x1_real", "packets"},   {"cost", "1"},
                       {"starvation_term", "1"},  {"startup_delay", "s"}};
    if (o.scenario == "finite")
        r.table.columns.insert(r.table.columns.begin() + 3, Column{"n", "packets"});
    for (double lambda : lambda_axis(o)) {
        for (double gamma : gammas) {
            const qoe::QoeWeights w(gamma, o.delta.value_or(1.0));
            qoe::OptimizationResult res{};
            std::optional<Count> n;
            if (o.scenario == "finite") {
                if (!o.n)
                    throw UsageError("--scenario finite needs --n");
                n = *o.n;
                res = qoe::optimize_finite(QueueParams::from_rates(lambda, mu), *n, w, o.tolerate, bounds,
                                           mode_of(o).value_or(ballot::default_mode(*n)));
            } else if (o.scenario == "infinite") {
                const auto qp = QueueParams::from_rates(lambda, mu);
                if (qp.rho() == 1.0)
                    throw DomainError("infinite-file optimum is undefined at rho = 1");
                res = qp.rho() > 1.0 ? qoe::optimize_infinite_supercritical(qp, w, bounds)
                                     : qoe::optimize_infinite_subcritical(qp, w, bounds);
            } else {
                if (!o.theta)
                    throw UsageError("--scenario file-level needs --theta");
                res = qoe::optimize_file_level(lambda, mu, *o.theta, w, bounds);
            }
            const double delay = static_cast<double>(res.x1) / lambda;
            std::vector<double> row{lambda, mu, gamma};
            if (n)
                row.push_back(static_cast<double>(*n));
            for (double v : {static_cast<double>(res.x1), res.x1_real, res.cost_at_optimum,
                             res.cost_at_optimum - gamma * delay * delay, delay})
                row.push_back(v);
            r.table.rows.push_back(std::move(row));
        }
    }
    return r;
}

sim::SimConfig sim_config(const Options& o, const QueueParams& qp, const ScenarioSpec& spec)
{
    sim::SimConfig cfg{qp, spec};
    cfg.replications = o.replications;
    cfg.master_seed = o.seed;
    cfg.parallel = o.parallel;
    cfg.resume_threshold = o.resume;
    return cfg;
}

Result cmd_simulate(const Options& o)
{
    const Count jmax = jmax_of(o);
    const ArrivalModel arrivals = arrivals_of(o);
    Result r;
    r.table.columns = point_columns();
    r.table.columns.push_back({"replications", "count"});
    add_pmf_columns(r.table, jmax, "empirical_pmf_");
    add_pmf_columns(r.table, jmax, "standard_error_");
    r.table.columns.push_back({"max_starvations_observed", "count"});
    r.table.columns.push_back({"intervals_observed", "count"});
    r.table.columns.push_back({"mean_interval", "s"});
    r.table.columns.push_back({"mean_interval_se", "s"});
    for (const Point& p : file_points(o)) {
        const auto qp = QueueParams::from_rates(p.lambda, service_rate(o));
        const auto rep = sim::simulate(sim_config(o, qp, ScenarioSpec(p.n, p.x1, arrivals)));
        auto row = point_row(p, qp);
        row.push_back(static_cast<double>(rep.replications));
        push_pmf(row, rep.empirical_pmf, jmax);
        push_pmf(row, rep.standard_error, jmax);
        row.push_back(static_cast<double>(rep.max_starvations_observed));
        row.push_back(static_cast<double>(rep.intervals_observed));
        row.push_back(rep.mean_interval);
        row.push_back(rep.mean_interval_se);
        r.table.rows.push_back(std::move(row));
    }
    return r;
}

// Analytic solution(s) for one point. `second` is the independent recursion
// when one exists for the arrival model.
struct Analytic {
    Vector<double> first;
    std::optional<Vector<double>> second;
    std::string method;
};

Analytic analytic_for(const Options& o, const ArrivalModel& arrivals, const QueueParams& qp, const Point& p,
                      Count jmax)
{
    if (const auto* ipp = std::get_if<IppParams>(&arrivals))
        return {recursive_pmf(qp, *ipp, p, jmax, o.resume).pmf, std::nullopt, "recursive-ipp"};
    if (const auto* slot = std::get_if<SlotParams>(&arrivals)) {
        if (o.resume && *o.resume != p.x1)
            throw ParameterError("the slotted solver resumes after x1 packets; drop --resume");
        const takacs::SlottedScenario scn(qp.lambda(), *slot, p.n, p.x1);
        return {takacs::takacs_pmf(scn, std::min(jmax, scn.max_starvations())).pmf, std::nullopt, "takacs"};
    }
    auto second = recursive_pmf(qp, std::nullopt, p, jmax, o.resume).pmf;
    if (o.resume && *o.resume != p.x1)
        return {second, std::nullopt, "recursive"};
    const ScenarioSpec spec(p.n, p.x1);
    const auto mode = mode_of(o).value_or(ballot::default_mode(p.n));
    return {ballot::starvation_pmf(qp, spec, std::min(jmax, spec.max_starvations()), mode).pmf, second,
            mode == ballot::PmfMode::Exact ? "ballot-exact" : "ballot-gaussian"};
}

Result cmd_compare(const Options& o)
{
    constexpr double method_tolerance = 1e-8;
    constexpr double max_z = 3.0;
    const Count jmax = jmax_of(o);
    const ArrivalModel arrivals = arrivals_of(o);

    Result r;
    r.table.columns = point_columns();
    add_pmf_columns(r.table, jmax, "analytic_");
    add_pmf_columns(r.table, jmax, "recursive_");
    add_pmf_columns(r.table, jmax, "empirical_");
    for (Count j = 0; j <= jmax; ++j)
        r.table.columns.push_back({"z_" + std::to_string(j), "standard errors"});
    r.table.columns.push_back({"method_discrepancy", "probability"});
    r.table.columns.push_back({"pass", "1 = pass"});

    double worst_discrepancy = 0.0;
    double worst_z = 0.0;
    Count failures = 0;
    std::string method;
    for (const Point& p : file_points(o)) {
        const auto qp = QueueParams::from_rates(p.lambda, service_rate(o));
        const ScenarioSpec spec(p.n, p.x1, arrivals);
        const Analytic a = analytic_for(o, arrivals, qp, p, jmax);
        method = a.method;
        const auto rep = sim::simulate(sim_config(o, qp, spec));

        auto row = point_row(p, qp);
        push_pmf(row, a.first, jmax);
        if (a.second)
            push_pmf(row, *a.second, jmax);
        else
            row.insert(row.end(), static_cast<std::size_t>(jmax + 1), nan);
        push_pmf(row, rep.empirical_pmf, jmax);

        bool pass = true;
        double discrepancy = 0.0;
        for (Count j = 0; j <= jmax; ++j) {
            const double an = j < a.first.size() ? a.first(j) : 0.0;
            const double em = j < rep.empirical_pmf.size() ? rep.empirical_pmf(j) : 0.0;
            const auto v = sim::check_bin(an, em, rep.replications, max_z);
            row.push_back(v.z);
            pass = pass && v.pass;
            worst_z = std::max(worst_z, v.z);
            if (a.second) {
                const double rc = j < a.second->size() ? (*a.second)(j) : 0.0;
                discrepancy = std::max(discrepancy, std::abs(an - rc));
            }
        }
        pass = pass && discrepancy <= method_tolerance;
        worst_discrepancy = std::max(worst_discrepancy, discrepancy);
        row.push_back(discrepancy);
        row.push_back(pass ? 1.0 : 0.0);
        failures += pass ? 0 : 1;
        r.table.rows.push_back(std::move(row));
    }
    r.verdict_failed = failures > 0;
    r.summary = {{"analytic_method", method},
                 {"max_method_discrepancy", worst_discrepancy},
                 {"method_tolerance", method_tolerance},
                 {"max_z", worst_z},
                 {"z_limit", max_z},
                 {"failed_points", failures},
                 {"verdict", failures ? "FAIL" : "PASS"}};
    return r;
}

// ---- output --------------------------------------------------------------

std::string table_body(const Table& t)
{
    std::string s;
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        s += (i ? "," : "") + t.columns[i].name;
    s += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            s += (i ? "," : "") + format_number(row[i]);
        s += '\n';
    }
    return s;
}

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Every long option of the subcommand except output plumbing; unset options
// are recorded as null so the manifest lists the full parameter set.
json manifest_parameters(const CLI::App* sub)
{
    static const std::vector<std::string> skip{"help", "out", "format", "parallel"};
    json params = json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        std::string name = opt->get_name(false, true);
        if (name.rfind("--", 0) != 0)
            continue;
        name = name.substr(2);
        if (std::find(skip.begin(), skip.end(), name) != skip.end())
            continue;
        if (opt->count() > 0)
            params[name] = opt->results().back();
        else if (!opt->get_default_str().empty())
            params[name] = opt->get_default_str();
        else
            params[name] = nullptr;
    }
    return params;
}

json to_json_number(double v)
{
    if (std::isnan(v))
        return nullptr;
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return v;
}

} // namespace

std::vector<double> parse_sweep(std::string_view text)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 3)
        throw ParameterError("sweep must be start:end:step, got '" + std::string(text) + "'");
    double v[3];
    for (int i = 0; i < 3; ++i) {
        std::size_t used = 0;
        try {
            v[i] = std::stod(parts[static_cast<std::size_t>(i)], &used);
        } catch (const std::exception&) {
            used = std::string::npos;
        }
        if (used != parts[static_cast<std::size_t>(i)].size() || !std::isfinite(v[i]))
            throw ParameterError("sweep field '" + parts[static_cast<std::size_t>(i)] + "' is not a number");
    }
    const double start = v[0], end = v[1], step = v[2];
    if (!(step > 0.0))
        throw ParameterError("sweep step must be positive");
    if (end < start)
        throw ParameterError("sweep end must not be below its start");
    // Inclusive end, tolerant of the rounding in (end - start) / step.
    const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = start + static_cast<double>(i) * step;
    return out;
}

std::vector<double> read_sizes_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot read sizes file '" + path + "'");
    std::vector<double> sizes;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos)
            continue;
        line = line.substr(first);
        if (sizes.empty() && line == "file_size_packets")
            continue;
        const bool digits = std::all_of(line.begin(), line.end(), [](char c) { return c >= '0' && c <= '9'; });
        if (!digits || line.size() > 18 || std::stoll(line) <= 0)
            throw ParameterError(path + ":" + std::to_string(line_no) + ": expected a positive integer, got '"
                                 + line + "'");
        sizes.push_back(static_cast<double>(std::stoll(line)));
    }
    if (sizes.empty())
        throw ParameterError("sizes file '" + path + "' has no data");
    return sizes;
}

std::uint64_t fnv1a(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (x == std::floor(x) && std::abs(x) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", x);
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Starvation analysis of a prefetching playout buffer", "bufstarv"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);

    Options o;
    using Handler = std::function<Result(const Options&)>;
    std::map<const CLI::App*, Handler> handlers;

    auto* exact = app.add_subcommand("exact", "explicit M/M/1 starvation distribution");
    add_rates(exact, o);
    add_file(exact, o);
    add_jmax(exact, o);
    add_mode(exact, o);
    handlers[exact] = cmd_exact;

    auto* rec = app.add_subcommand("recursive", "recursive solver (M/M/1, or IPP with --alpha/--beta)");
    add_rates(rec, o);
    add_file(rec, o);
    add_jmax(rec, o);
    add_ipp(rec, o);
    rec->add_option("--resume", o.resume, "packets re-buffered after a starvation (default x1)");
    handlers[rec] = cmd_recursive;

    auto* tak = app.add_subcommand("takacs", "slotted M/D/1 playback");
    add_rates(tak, o);
    add_file(tak, o);
    add_jmax(tak, o);
    tak->add_option("--slot-d", o.slot_d, "slot length d (s), default 1");
    handlers[tak] = cmd_takacs;

    auto* flu = app.add_subcommand("fluid", "fluid approximation with random file sizes");
    add_rates(flu, o);
    flu->add_option("--x1", o.x1, "start-up threshold (packets)");
    flu->add_option("--x1-sweep", o.x1_sweep, "start:end:step over x1");
    flu->add_option("--dist", o.dist, "file-size family")->check(CLI::IsMember({"exp", "pareto", "lognormal"}));
    flu->add_option("--theta", o.theta, "exponential rate; for pareto/lognormal, 1/mean to match");
    flu->add_option("--nm", o.nm, "Pareto minimum size (packets)");
    flu->add_option("--upsilon", o.upsilon, "Pareto exponent");
    flu->add_option("--varrho", o.varrho, "log-normal location");
    flu->add_option("--sigma", o.sigma, "log-normal scale");
    flu->add_option("--sizes-csv", o.sizes_csv, "observed file sizes, one per line");
    handlers[flu] = cmd_fluid;

    auto* q = app.add_subcommand("qoe", "optimal start-up threshold");
    add_rates(q, o);
    q->add_option("--scenario", o.scenario, "finite, infinite or file-level")
        ->check(CLI::IsMember({"finite", "infinite", "file-level"}))
        ->capture_default_str();
    q->add_option("--n", o.n, "file size (packets), finite scenario");
    q->add_option("--gamma", o.gamma, "start-up delay weight");
    q->add_option("--gamma-sweep", o.gamma_sweep, "start:end:step over gamma");
    q->add_option("--delta", o.delta, "playback interval weight (infinite, rho < 1), default 1");
    q->add_option("--theta", o.theta, "exponential file-size rate (file-level)");
    q->add_option("--tolerate", o.tolerate, "starvations a user accepts (finite)")->capture_default_str();
    q->add_option("--x1-min", o.x1_min, "lower threshold bound (packets)");
    q->add_option("--x1-max", o.x1_max, "upper threshold bound (packets)");
    add_mode(q, o);
    handlers[q] = cmd_qoe;

    auto* simc = app.add_subcommand("simulate", "Monte Carlo starvation histogram");
    add_rates(simc, o);
    add_file(simc, o);
    add_jmax(simc, o);
    add_ipp(simc, o);
    simc->add_option("--slot-d", o.slot_d, "slotted playback with slot length d (s)");
    add_sim(simc, o);
    handlers[simc] = cmd_simulate;

    auto* cmp = app.add_subcommand("compare", "analytic vs recursive vs Monte Carlo with 3-sigma verdicts");
    add_rates(cmp, o);
    add_file(cmp, o);
    add_jmax(cmp, o);
    add_ipp(cmp, o);
    cmp->add_option("--slot-d", o.slot_d, "slotted playback with slot length d (s)");
    add_mode(cmp, o);
    add_sim(cmp, o);
    handlers[cmp] = cmd_compare;

    for (auto& [sub, _] : handlers)
        add_output(const_cast<CLI::App*>(sub), o);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        app.exit(e, out, err);
        return ok;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return usage_error;
    }

    const CLI::App* sub = app.get_subcommands().front();
    Result result;
    try {
        result = handlers.at(sub)(o);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return usage_error;
    } catch (const ParameterError& e) {
        err << "parameter error: " << e.what() << "\n";
        return domain_error;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return domain_error;
    }

    const std::string body = table_body(result.table);
    const bool sim_like = sub == simc || sub == cmp;
    json manifest = {{"tool", "bufstarv"},
                     {"version", version},
                     {"schema_version", schema_version},
                     {"subcommand", sub->get_name()},
                     {"parameters", manifest_parameters(sub)},
                     {"seed", sim_like ? json(o.seed) : json(nullptr)},
                     {"checksum", "fnv1a64:" + hex64(fnv1a(body))}};

    std::string csv = "# manifest: " + manifest.dump() + "\n# columns:";
    for (const auto& c : result.table.columns)
        csv += " " + c.name + " [" + c.unit + "];";
    csv.back() = '\n';
    if (!result.summary.empty())
        csv += "# summary: " + result.summary.dump() + "\n";
    csv += body;

    json doc = {{"manifest", manifest}, {"columns", json::array()}, {"rows", json::array()},
                {"summary", result.summary}};
    for (const auto& c : result.table.columns)
        doc["columns"].push_back({{"name", c.name}, {"unit", c.unit}});
    for (const auto& row : result.table.rows) {
        json jr = json::array();
        for (double v : row)
            jr.push_back(to_json_number(v));
        doc["rows"].push_back(jr);
    }
    const std::string json_text = doc.dump(2) + "\n";

    std::string format = o.format.empty() ? (o.out.empty() ? "csv" : "both") : o.format;
    if (o.out.empty()) {
        if (format == "csv" || format == "both")
            out << csv;
        if (format == "json" || format == "both")
            out << json_text;
    } else {
        std::string base = o.out;
        for (const char* ext : {".csv", ".json"}) {
            const std::string e(ext);
            if (base.size() > e.size() && base.compare(base.size() - e.size(), e.size(), e) == 0)
                base.resize(base.size() - e.size());
        }
        auto write = [&](const std::string& path, const std::string& text) {
            std::ofstream f(path, std::ios::binary);
            f << text;
            if (!f) {
                err << "cannot write '" << path << "'\n";
                return false;
            }
            return true;
        };
        if ((format == "csv" || format == "both") && !write(base + ".csv", csv))
            return domain_error;
        if ((format == "json" || format == "both") && !write(base + ".json", json_text))
            return domain_error;
    }

    if (sub == cmp)
        err << "compare: " << result.summary["verdict"].get<std::string>() << " (max |analytic - recursive| = "
            << format_number(result.summary["max_method_discrepancy"].get<double>())
            << ", max z = " << format_number(result.summary["max_z"].get<double>()) << ")\n";
    return result.verdict_failed ? verdict_failure : ok;
}

} // namespace bufstarv::cli
