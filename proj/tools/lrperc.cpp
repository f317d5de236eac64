#include "lrperc/harness.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <memory>

namespace {

struct SubcommandOptions {
    CLI::App* app = nullptr;
    std::string config_path;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    bool timing = false;
    CLI::Option* timing_flag = nullptr;
};

const char* describe(const std::string& name)
{
    if (name == "gamma") return "exact bifurcation probabilities gamma_k (optionally sampled)";
    if (name == "survival") return "survival of the oriented long-range cluster";
    if (name == "redcluster") return "dynamic red cluster and its domination check";
    if (name == "siteperc") return "oriented site percolation on the cone";
    if (name == "contact") return "truncated long-range contact process";
    if (name == "star") return "block process on the mixed star lattice";
    return "probability of the horizontal crossing event H";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo lab for truncated long-range oriented percolation"};
    app.require_subcommand(1);

    std::vector<std::unique_ptr<SubcommandOptions>> subs;
    for (const auto& name : lrperc::experiment_names()) {
        auto s = std::make_unique<SubcommandOptions>();
        s->app = app.add_subcommand(name, describe(name));
        s->app->add_option("--config", s->config_path, "key = value file; flags override it");
        const auto defaults = lrperc::resolve_config(name, lrperc::Config{});
        for (const auto& key : lrperc::experiment_keys(name)) {
            if (key == "timing") {
                s->timing_flag = s->app->add_flag("--timing", s->timing, "fill the wall_seconds column");
                continue;
            }
            s->options[key] = s->app->add_option("--" + key, s->values[key], "default: " + defaults.get(key));
        }
        subs.push_back(std::move(s));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    for (const auto& s : subs) {
        if (!s->app->parsed()) continue;
        const std::string name = s->app->get_name();
        try {
            lrperc::Config cfg;
            if (!s->config_path.empty()) cfg = lrperc::Config::load(s->config_path);
            for (const auto& [key, opt] : s->options)
                if (opt->count() > 0) cfg.set(key, s->values[key]);
            if (s->timing_flag && s->timing_flag->count() > 0) cfg.set("timing", "true");

            const auto resolved = lrperc::resolve_config(name, cfg);
            const auto& out = resolved.get("out");
            // fail before a long run rather than after it
            if (out != "-" && !std::ofstream(out, std::ios::app))
                throw std::runtime_error("cannot open output file '" + out + "' for writing");
            auto table = lrperc::run_experiment(name, cfg, &std::cerr);
            lrperc::emit_csv(table, out);
        } catch (const std::exception& e) {
            std::cerr << "lrperc " << name << ": error: " << e.what() << "\n";
            return 2;
        }
    }
    return 0;
}
