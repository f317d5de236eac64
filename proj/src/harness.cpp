#include "lrperc/harness.hpp"

#include "lrperc/contact.hpp"
#include "lrperc/oriented.hpp"
#include "lrperc/renorm.hpp"
#include "lrperc/replicas.hpp"
#include "lrperc/sequences.hpp"
#include "lrperc/starlat.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <thread>

namespace lrperc {

unsigned default_threads()
{
    const auto n = std::thread::hardware_concurrency();
    return n == 0 ? 1u : n;
}

namespace {

const std::vector<std::string> kGlobalKeys = {"seed", "reps", "threads", "out", "z", "timing"};

// experiment -> (key, default)
using Defaults = std::vector<std::pair<std::string, std::string>>;

const std::map<std::string, Defaults>& defaults_table()
{
    static const std::map<std::string, Defaults> table = {
        {"gamma", {{"pseq", "harmonic"}, {"qseq", "harmonic"}, {"beta", "1"}, {"kmax", "20"}, {"reps", "0"}}},
        {"survival",
         {{"model", "g"},
          {"dim", "2"},
          {"k", "10"},
          {"pseq", "harmonic"},
          {"qseq", "harmonic"},
          {"horizon", "50"},
          {"window", "50"}}},
        {"redcluster",
         {{"k", "5"}, {"beta", "1"}, {"pseq", "harmonic"}, {"qseq", "harmonic"}, {"steps", "100000"}, {"reps", "100"}}},
        {"siteperc", {{"gamma", "0.60:0.80:0.01"}, {"horizon", "64,128,256"}, {"origin", "open"}}},
        {"contact",
         {{"rates", "harmonic"},
          {"k", "5"},
          {"delta", "1"},
          {"b", "1"},
          {"dim", "2"},
          {"horizon", "10"},
          {"window", "10"},
          {"ftrials", "0"}}},
        {"star",
         {{"eps", "0.5"},
          {"pseq", "harmonic"},
          {"k", "5"},
          {"window", "10"},
          {"delta", "0.5"},
          {"horizon", "20"},
          {"N", "auto"}}},
        {"hprob", {{"pseq", "harmonic"}, {"k", "5"}, {"window", "10"}}},
    };
    return table;
}

const Defaults& defaults_for(const std::string& experiment)
{
    const auto& table = defaults_table();
    auto it = table.find(experiment);
    if (it == table.end()) throw std::invalid_argument("unknown experiment '" + experiment + "'");
    return it->second;
}

[[noreturn]] void bad(const std::string& field, const std::string& why)
{
    throw std::invalid_argument("config field '" + field + "': " + why);
}

SequenceSpec sequence(const Config& cfg, const std::string& key, Domain domain)
{
    try {
        return SequenceSpec::parse(cfg.get(key), domain);
    } catch (const std::invalid_argument& e) {
        bad(key, e.what());
    }
}

std::uint64_t positive(const Config& cfg, const std::string& key)
{
    auto v = cfg.get_uint(key);
    if (v == 0) bad(key, "must be >= 1");
    return v;
}

std::vector<std::uint64_t> positive_list(const Config& cfg, const std::string& key)
{
    auto v = cfg.get_uint_list(key);
    for (auto x : v)
        if (x == 0) bad(key, "entries must be >= 1");
    return v;
}

std::string num(double v) { return format_number(v); }

std::string hex16(std::uint64_t h)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct Common {
    std::uint64_t seed;
    std::uint64_t reps;
    unsigned threads;
    double z;
    bool timing;
};

Common common(const Config& cfg, bool reps_may_be_zero)
{
    Common c{};
    c.seed = cfg.get_uint("seed");
    c.reps = reps_may_be_zero ? cfg.get_uint("reps") : positive(cfg, "reps");
    const auto t = positive(cfg, "threads");
    c.threads = static_cast<unsigned>(std::min<std::uint64_t>(t, 1024));
    c.z = cfg.get_double("z");
    if (!(c.z > 0.0)) bad("z", "must be > 0");
    c.timing = cfg.get_bool("timing");
    return c;
}

class Stopwatch {
public:
    explicit Stopwatch(bool on) : on_(on), start_(std::chrono::steady_clock::now()) {}
    std::optional<double> lap()
    {
        if (!on_) return std::nullopt;
        auto now = std::chrono::steady_clock::now();
        double s = std::chrono::duration<double>(now - start_).count();
        start_ = now;
        return s;
    }

private:
    bool on_;
    std::chrono::steady_clock::time_point start_;
};

ResultRow base_row(const std::string& experiment, const std::string& model, const Common& c)
{
    ResultRow row;
    row.experiment = experiment;
    row.model = model;
    row.seed = c.seed;
    row.reps = c.reps;
    return row;
}

void set_estimate(ResultRow& row, const EstimateWithCI& e)
{
    row.estimate = e.estimate;
    row.ci_lo = e.lo;
    row.ci_hi = e.hi;
    row.params.emplace_back("successes", std::to_string(e.successes));
}

void run_gamma(const Config& cfg, ResultTable& out)
{
    const auto c = common(cfg, true);
    BifurcationParams bp;
    bp.p = sequence(cfg, "pseq", Domain::probability);
    bp.q = sequence(cfg, "qseq", Domain::probability);
    bp.beta = cfg.get_int("beta");
    const auto kmax = positive(cfg, "kmax");
    try {
        validate(bp);
    } catch (const std::invalid_argument& e) {
        bad("beta", e.what());
    }
    Stopwatch sw(c.timing);
    for (std::uint64_t k = 1; k <= kmax; ++k) {
        bp.k = k;
        auto row = base_row("gamma", "G", c);
        row.k = std::to_string(k);
        const double g = gamma_k(bp);
        row.params = {{"pseq", bp.p.to_string()}, {"qseq", bp.q.to_string()}, {"beta", std::to_string(bp.beta)}};
        if (c.reps > 0) {
            auto e = estimate_bifurcation_frequency(bp, c.seed, c.reps, c.threads, c.z);
            set_estimate(row, e);
            row.params.emplace_back("gamma_exact", num(g));
        } else {
            row.estimate = row.ci_lo = row.ci_hi = g;
        }
        row.wall_seconds = sw.lap();
        out.rows.push_back(std::move(row));
    }
}

void run_survival(const Config& cfg, ResultTable& out)
{
    const auto c = common(cfg, false);
    if (cfg.get("model") != "g") bad("model", "only 'g' is supported, got '" + cfg.get("model") + "'");
    const auto p = sequence(cfg, "pseq", Domain::probability);
    const auto q = sequence(cfg, "qseq", Domain::probability);
    ExplorationParams ep;
    const auto dim = cfg.get_int("dim");
    if (dim < 1 || dim > kMaxDim) bad("dim", "must lie in 1.." + std::to_string(kMaxDim));
    ep.dim = static_cast<int>(dim);
    ep.horizon = static_cast<std::int64_t>(positive(cfg, "horizon"));
    ep.window = static_cast<std::int64_t>(positive(cfg, "window"));
    Stopwatch sw(c.timing);
    for (auto k : positive_list(cfg, "k")) {
        ep.k = k;
        auto row = base_row("survival", "g", c);
        row.k = std::to_string(k);
        row.horizon = std::to_string(ep.horizon);
        row.window = std::to_string(ep.window);
        row.params = {{"pseq", p.to_string()}, {"qseq", q.to_string()}, {"dim", std::to_string(ep.dim)}};
        set_estimate(row, estimate_survival(p, q, ep, c.seed, c.reps, c.threads, c.z));
        row.wall_seconds = sw.lap();
        out.rows.push_back(std::move(row));
    }
}

void run_redcluster(const Config& cfg, ResultTable& out)
{
    const auto c = common(cfg, false);
    BifurcationParams bp;
    bp.p = sequence(cfg, "pseq", Domain::probability);
    bp.q = sequence(cfg, "qseq", Domain::probability);
    bp.beta = cfg.get_int("beta");
    try {
        validate(bp);
    } catch (const std::invalid_argument& e) {
        bad("beta", e.what());
    }
    const auto steps = positive(cfg, "steps");
    Stopwatch sw(c.timing);
    for (auto k : positive_list(cfg, "k")) {
        bp.k = k;
        const auto field = BondField::oriented(c.seed, bp.p, bp.q, k);
        auto rep = domination_check(field, bp, c.reps, steps, c.threads);
        auto row = base_row("redcluster", "red", c);
        row.k = std::to_string(k);
        row.params = {{"pseq", bp.p.to_string()},
                      {"qseq", bp.q.to_string()},
                      {"beta", std::to_string(bp.beta)},
                      {"steps", std::to_string(steps)},
                      {"gamma", num(rep.gamma)},
                      {"examined", std::to_string(rep.red_frequency.trials)},
                      {"violation", rep.violation ? "1" : "0"},
                      {"mean_cluster", num(rep.mean_cluster_size)},
                      {"truncated_runs", std::to_string(rep.truncated_runs)},
                      {"ci_z", num(rep.red_frequency.z)}};
        set_estimate(row, rep.red_frequency);
        row.wall_seconds = sw.lap();
        out.rows.push_back(std::move(row));
    }
}

void run_siteperc(const Config& cfg, ResultTable& out)
{
    const auto c = common(cfg, false);
    const auto gammas = cfg.get_double_list("gamma");
    for (auto g : gammas)
        if (!(g >= 0.0 && g <= 1.0)) bad("gamma", "entries must lie in [0,1]");
    std::vector<std::int64_t> horizons;
    for (auto h : positive_list(cfg, "horizon")) horizons.push_back(static_cast<std::int64_t>(h));
    if (!std::is_sorted(horizons.begin(), horizons.end()) ||
        std::adjacent_find(horizons.begin(), horizons.end()) != horizons.end())
        bad("horizon", "must be strictly increasing");
    if (cfg.get("origin") != "open") bad("origin", "only 'open' is supported");

    std::vector<std::vector<double>> curves(horizons.size());
    Stopwatch sw(c.timing);
    for (auto g : gammas) {
        auto ests = site_perc_survival(g, horizons, c.seed, c.reps, c.threads, c.z);
        auto wall = sw.lap();
        for (std::size_t i = 0; i < horizons.size(); ++i) {
            auto row = base_row("siteperc", "cone", c);
            row.horizon = std::to_string(horizons[i]);
            row.params = {{"gamma", num(g)}};
            set_estimate(row, ests[i]);
            row.wall_seconds = wall;
            curves[i].push_back(ests[i].estimate);
            out.rows.push_back(std::move(row));
        }
    }

    const bool doubling = horizons.size() == 3 && horizons[1] == 2 * horizons[0] && horizons[2] == 2 * horizons[1];
    if (doubling && gammas.size() >= 2) {
        auto cross = ratio_crossing(gammas, curves[0], curves[1], curves[2]);
        auto row = base_row("siteperc", "crossing", c);
        row.horizon = std::to_string(horizons[0]);
        row.params = {{"found", cross ? "1" : "0"}};
        const double v = cross ? *cross : std::nan("");
        row.estimate = row.ci_lo = row.ci_hi = v;
        out.rows.push_back(std::move(row));
    }
}

void run_contact(const Config& cfg, ResultTable& out)
{
    const auto c = common(cfg, false);
    const auto rates = sequence(cfg, "rates", Domain::rate);
    SkeletonParams sp;
    sp.delta = cfg.get_double("delta");
    if (!(sp.delta > 0.0)) bad("delta", "must be > 0");
    sp.b = cfg.get_int("b");
    if (sp.b == 0) bad("b", "must be nonzero");
    ContactParams cp;
    const auto dim = cfg.get_int("dim");
    if (dim < 2 || dim > kMaxDim) bad("dim", "must lie in 2.." + std::to_string(kMaxDim));
    cp.dim = static_cast<int>(dim);
    cp.horizon = cfg.get_double("horizon");
    if (!(cp.horizon > 0.0)) bad("horizon", "must be > 0");
    cp.window = static_cast<std::int64_t>(positive(cfg, "window"));
    const auto ftrials = cfg.get_uint("ftrials");
    Stopwatch sw(c.timing);
    for (auto k : positive_list(cfg, "k")) {
        cp.k = k;
        sp.k = k;
        auto res = estimate_contact_survival(rates, cp, c.seed, c.reps, c.threads, c.z);
        auto row = base_row("contact", "contact", c);
        row.k = std::to_string(k);
        row.horizon = num(cp.horizon);
        row.window = std::to_string(cp.window);
        row.params = {{"rates", rates.to_string()},
                      {"dim", std::to_string(cp.dim)},
                      {"delta", num(sp.delta)},
                      {"b", std::to_string(sp.b)},
                      {"f_prob", num(f_probability(sp, rates))},
                      {"resampled", std::to_string(res.resampled)}};
        if (ftrials > 0) {
            auto f = estimate_f_frequency(sp, rates, c.seed, ftrials, c.threads, c.z);
            row.params.emplace_back("f_mc", num(f.estimate));
            row.params.emplace_back("f_lo", num(f.lo));
            row.params.emplace_back("f_hi", num(f.hi));
        }
        set_estimate(row, res.estimate);
        row.wall_seconds = sw.lap();
        out.rows.push_back(std::move(row));
    }
}

void run_star(const Config& cfg, ResultTable& out)
{
    const auto c = common(cfg, false);
    StarParams sp;
    sp.eps = cfg.get_double("eps");
    if (!(sp.eps > 0.0 && sp.eps <= 1.0)) bad("eps", "must lie in (0,1]");
    sp.p = sequence(cfg, "pseq", Domain::probability);
    const double delta = cfg.get_double("delta");
    if (!(delta > 0.0 && delta <= 1.0)) bad("delta", "must lie in (0,1]");
    BlockParams block{0, delta};
    if (cfg.get("N") == "auto")
        block.width = choose_N(sp.eps, delta);
    else
        block.width = static_cast<std::int64_t>(positive(cfg, "N"));
    const auto window = static_cast<std::int64_t>(positive(cfg, "window"));
    const auto horizon = static_cast<std::int64_t>(positive(cfg, "horizon"));
    Stopwatch sw(c.timing);
    for (auto k : positive_list(cfg, "k")) {
        sp.k = k;
        auto row = base_row("star", "star", c);
        row.k = std::to_string(k);
        row.horizon = std::to_string(horizon);
        row.window = std::to_string(window);
        row.params = {{"pseq", sp.p.to_string()},
                      {"eps", num(sp.eps)},
                      {"delta", num(delta)},
                      {"N", std::to_string(block.width)}};
        set_estimate(row, block_path_survival(sp, block, window, horizon, c.seed, c.reps, c.threads, c.z));
        row.wall_seconds = sw.lap();
        out.rows.push_back(std::move(row));
    }
}

void run_hprob(const Config& cfg, ResultTable& out)
{
    const auto c = common(cfg, false);
    StarParams sp;
    sp.p = sequence(cfg, "pseq", Domain::probability);
    const auto windows = positive_list(cfg, "window");
    Stopwatch sw(c.timing);
    for (auto k : positive_list(cfg, "k")) {
        sp.k = k;
        for (auto w : windows) {
            auto row = base_row("hprob", "H", c);
            row.k = std::to_string(k);
            row.window = std::to_string(w);
            row.params = {{"pseq", sp.p.to_string()}};
            set_estimate(row, estimate_h_prob(sp, static_cast<std::int64_t>(w), c.seed, c.reps, c.threads, c.z));
            row.wall_seconds = sw.lap();
            out.rows.push_back(std::move(row));
        }
    }
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

} // namespace

const std::string* ResultRow::param(const std::string& key) const
{
    for (const auto& [k, v] : params)
        if (k == key) return &v;
    return nullptr;
}

const std::vector<std::string>& experiment_names()
{
    static const std::vector<std::string> names = {"gamma",   "survival", "redcluster", "siteperc",
                                                   "contact", "star",     "hprob"};
    return names;
}

const std::vector<std::string>& experiment_keys(const std::string& experiment)
{
    static std::map<std::string, std::vector<std::string>> cache = [] {
        std::map<std::string, std::vector<std::string>> m;
        for (const auto& [name, defs] : defaults_table()) {
            auto keys = kGlobalKeys;
            for (const auto& d : defs) keys.push_back(d.first);
            std::sort(keys.begin(), keys.end());
            keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
            m[name] = keys;
        }
        return m;
    }();
    auto it = cache.find(experiment);
    if (it == cache.end()) throw std::invalid_argument("unknown experiment '" + experiment + "'");
    return it->second;
}

Config resolve_config(const std::string& experiment, Config cfg)
{
    const auto& keys = experiment_keys(experiment);
    cfg.erase("config");
    for (const auto& [k, v] : cfg.entries())
        if (!std::binary_search(keys.begin(), keys.end(), k))
            bad(k, "not a recognised setting for '" + experiment + "'");
    for (const auto& [k, v] : defaults_for(experiment)) cfg.set_default(k, v);
    cfg.set_default("seed", "1");
    cfg.set_default("reps", "1000");
    cfg.set_default("threads", std::to_string(default_threads()));
    cfg.set_default("out", "-");
    cfg.set_default("z", "1.96");
    cfg.set_default("timing", "false");
    return cfg;
}

std::string config_hash(const Config& resolved)
{
    Config c = resolved;
    for (const char* k : {"threads", "out", "timing", "config"}) c.erase(k);
    return hex16(fnv1a64(c.canonical()));
}

ResultTable run_experiment(const std::string& experiment, const Config& cfg, std::ostream* log)
{
    const auto resolved = resolve_config(experiment, cfg);
    ResultTable table;
    table.experiment = experiment;
    table.config_hash = config_hash(resolved);
    if (log) {
        *log << "# experiment = " << experiment << "\n# config_hash = " << table.config_hash << "\n"
             << resolved.canonical() << std::flush;
    }

    if (experiment == "gamma") run_gamma(resolved, table);
    else if (experiment == "survival") run_survival(resolved, table);
    else if (experiment == "redcluster") run_redcluster(resolved, table);
    else if (experiment == "siteperc") run_siteperc(resolved, table);
    else if (experiment == "contact") run_contact(resolved, table);
    else if (experiment == "star") run_star(resolved, table);
    else run_hprob(resolved, table);

    for (auto& row : table.rows) row.params.emplace_back("config", table.config_hash);
    return table;
}

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string csv_header()
{
    return "experiment,model,k,seed,reps,horizon,window,params,estimate,ci_lo,ci_hi,wall_seconds";
}

std::string render_csv(const ResultTable& table)
{
    std::string out = csv_header() + "\n";
    for (const auto& r : table.rows) {
        std::string params;
        for (const auto& [k, v] : r.params) {
            if (!params.empty()) params += ';';
            params += k + "=" + v;
        }
        std::string wall;
        if (r.wall_seconds) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", *r.wall_seconds);
            wall = buf;
        }
        out += csv_field(r.experiment) + "," + csv_field(r.model) + "," + csv_field(r.k) + "," +
               std::to_string(r.seed) + "," + std::to_string(r.reps) + "," + csv_field(r.horizon) + "," +
               csv_field(r.window) + "," + csv_field(params) + "," + format_number(r.estimate) + "," +
               format_number(r.ci_lo) + "," + format_number(r.ci_hi) + "," + wall + "\n";
    }
    return out;
}

void emit_csv(const ResultTable& table, const std::string& path)
{
    const auto text = render_csv(table);
    if (path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open output file '" + path + "' for writing");
    f << text;
    f.flush();
    if (!f) throw std::runtime_error("failed writing output file '" + path + "'");
}

} // namespace lrperc
