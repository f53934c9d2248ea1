// Command-line driver: prep (attribute + nomination files -> dyad table),
// bma (dyad table -> averaged posterior), wals (comparator fit), simulate
// (synthetic recovery study), report (format previously computed results).
// Estimation subcommands write files; report only re-formats them.

#include <CLI11.hpp>

#include "dyadbma/attributes.hpp"
#include "dyadbma/bma.hpp"
#include "dyadbma/csv.hpp"
#include "dyadbma/dyads.hpp"
#include "dyadbma/errors.hpp"
#include "dyadbma/nominations.hpp"
#include "dyadbma/report.hpp"
#include "dyadbma/result_io.hpp"
#include "dyadbma/sufficient_stats.hpp"
#include "dyadbma/synth.hpp"
#include "dyadbma/variable_spec.hpp"
#include "dyadbma/wals.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace dyadbma;

ModelPriorKind parse_model_prior(const std::string& token) {
    if (token == "uniform") return ModelPriorKind::uniform;
    if (token == "fixed") return ModelPriorKind::fixed_theta;
    if (token == "random") return ModelPriorKind::binomial_beta;
    throw ConfigError("unknown --model-prior '" + token + "' (uniform|fixed|random)");
}

void parse_g_rule(const std::string& token, PriorSpec& prior) {
    if (token == "bric") {
        prior.g_rule = GRule::bric;
    } else if (token == "uip") {
        prior.g_rule = GRule::uip;
    } else if (token.rfind("fixed:", 0) == 0) {
        prior.g_rule = GRule::fixed_g;
        prior.fixed_g = parse_double(token.substr(6), "--g fixed value");
        if (prior.fixed_g <= 0.0) throw ConfigError("--g fixed:<v> requires v > 0");
    } else {
        throw ConfigError("unknown --g '" + token + "' (bric|uip|fixed:<v>)");
    }
}

// mbar defaults to K/2 when a size-dependent prior is requested without it.
void fill_mbar(PriorSpec& prior, bool mbar_given, std::size_t K) {
    if (prior.model_prior != ModelPriorKind::uniform && !mbar_given)
        prior.mbar = static_cast<double>(K) / 2.0;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + path);
    out << text;
    if (!out) throw ParseError("write failed: " + path);
}

struct PrepOptions {
    std::string nodes, nominations, specs, out, summary;
    std::vector<std::string> filters;
};

void run_prep(const PrepOptions& opt) {
    std::vector<VariableSpec> specs = load_specs(opt.specs);

    std::vector<DyadFilter> filters;
    std::vector<std::string> filter_columns;
    for (const auto& token : opt.filters) {
        filters.push_back(parse_filter(token));
        if (filters.back().kind == FilterKind::ego_gender)
            filter_columns.push_back(filters.back().gender_column);
    }

    AttributeTable attrs = load_attributes(opt.nodes, schema_from_specs(specs, filter_columns));
    auto [p1, p2] = load_nominations(opt.nominations);
    DyadTable table = build_dyads(attrs, specs, reciprocal_links(p2), reciprocal_links(p1), filters);

    write_dyads(table, opt.out);
    if (!opt.summary.empty()) write_summary(opt.summary, summarize(attrs));

    for (const auto& line : table.deletion_log) std::cout << line << '\n';
    std::cout << "wrote " << table.n() << " dyads, " << table.k() << " regressors to " << opt.out
              << '\n';
}

struct BmaOptions {
    std::string dyads, out;
    std::string engine = "enumerate";
    std::string model_prior = "uniform";
    std::string g = "bric";
    double mbar = 0.0;
    bool mbar_given = false;
    int workers = 1;
    std::size_t top_models = 10;
    std::size_t exhaustive_cap = 25;
    std::uint64_t chain = 1000000;
    std::uint64_t burn_in = 100000;
    std::uint64_t seed = 1;
    bool timing = false;
};

void run_bma(const BmaOptions& opt) {
    DyadTable table = read_dyads(opt.dyads);
    SufficientStats stats = compute_sufficient_stats(table);

    PriorSpec prior;
    prior.model_prior = parse_model_prior(opt.model_prior);
    parse_g_rule(opt.g, prior);
    prior.mbar = opt.mbar;
    fill_mbar(prior, opt.mbar_given, stats.K);

    auto t0 = std::chrono::steady_clock::now();
    BmaResult result;
    if (opt.engine == "enumerate") {
        EnumerateConfig config;
        config.workers = opt.workers;
        config.top_models = opt.top_models;
        config.exhaustive_cap = opt.exhaustive_cap;
        result = enumerate_bma(stats, prior, config);
    } else if (opt.engine == "mc3") {
        Mc3Config config;
        config.chain_length = opt.chain;
        config.burn_in = opt.burn_in;
        config.seed = opt.seed;
        config.top_models = opt.top_models;
        result = mc3_bma(stats, prior, config);
    } else {
        throw ConfigError("unknown --engine '" + opt.engine + "' (enumerate|mc3)");
    }
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_bma_results(opt.out + ".results.csv", result);
    write_top_models(opt.out + ".topmodels.csv", result);
    write_bma_meta(opt.out + ".meta.json", result, opt.workers, opt.timing ? wall : -1.0);

    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << result.engine << ": N=" << result.N << " K=" << result.K
              << " mass=" << format_sig(result.prob_mass_check) << '\n';
}

struct WalsOptions {
    std::string dyads, out;
    std::vector<std::string> focus;
    double laplace_c = kLaplaceCDefault;
    double t_robust = 2.0;
};

void run_wals(const WalsOptions& opt) {
    DyadTable table = read_dyads(opt.dyads);
    WalsConfig config;
    config.focus = opt.focus;
    config.laplace_c = opt.laplace_c;
    WalsResult result = wals_fit(table, config);
    write_wals_results(opt.out, result, opt.t_robust);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "wals: N=" << result.N << " K=" << result.K
              << " s=" << format_sig(result.residual_scale) << '\n';
}

struct SimulateOptions {
    std::string spec, emit_spec, out, dump;
    std::string model_prior = "uniform";
    std::string g = "bric";
    double mbar = 0.0;
    bool mbar_given = false;
    std::size_t replications = 20;
    std::uint64_t seed = 0;
    bool seed_given = false;
    double threshold = 0.8;
    int workers = 1;
};

void run_simulate(const SimulateOptions& opt) {
    DgpSpec spec = opt.spec.empty() ? default_recovery_spec() : load_dgp_spec(opt.spec);
    if (opt.seed_given) spec.seed = opt.seed;

    if (!opt.emit_spec.empty()) save_dgp_spec(spec, opt.emit_spec);
    if (opt.out.empty()) {
        if (opt.emit_spec.empty())
            throw ConfigError("simulate needs --out and/or --emit-spec");
        return;
    }

    PriorSpec prior;
    prior.model_prior = parse_model_prior(opt.model_prior);
    parse_g_rule(opt.g, prior);
    prior.mbar = opt.mbar;
    fill_mbar(prior, opt.mbar_given, spec.variables.size());

    RecoveryReport report =
        run_recovery(spec, opt.replications, prior, opt.threshold, opt.workers, opt.dump);
    write_recovery_report(opt.out + ".recovery.csv", report);
    write_recovery_meta(opt.out + ".recovery.meta.json", report, prior);

    std::cout << "recovery: " << report.replications << " replications, pooled noise median PIP "
              << format_sig(report.pooled_noise_median) << '\n';
}

struct ReportOptions {
    std::vector<std::string> results;
    std::vector<std::string> labels;
    std::string out;
    double pip_bold = 0.8;
};

void run_report(const ReportOptions& opt) {
    if (opt.results.empty()) throw ConfigError("report needs at least one --results prefix");
    if (!opt.labels.empty() && opt.labels.size() != opt.results.size())
        throw ConfigError("--label count must match --results count");

    std::vector<std::pair<std::string, BmaResult>> loaded;
    for (std::size_t i = 0; i < opt.results.size(); ++i) {
        BmaResult result = read_bma_results(opt.results[i] + ".results.csv");
        BmaMeta meta = read_bma_meta(opt.results[i] + ".meta.json");
        result.N = static_cast<std::size_t>(meta.N);
        std::string label = opt.labels.empty() ? opt.results[i] : opt.labels[i];
        loaded.emplace_back(label, std::move(result));
    }

    if (loaded.size() == 1) {
        write_text_file(opt.out, render_ranked_table(loaded.front().second, opt.pip_bold));
    } else {
        write_text_file(opt.out, prior_comparison_csv(render_prior_comparison(loaded, opt.pip_bold)));
    }
    std::cout << "wrote " << opt.out << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dyadic link-formation toolkit: dyad construction, exhaustive Bayesian model "
                 "averaging, WALS comparator, synthetic recovery, report rendering"};
    app.require_subcommand(1);

    PrepOptions prep;
    CLI::App* prep_cmd = app.add_subcommand("prep", "Build a dyad regression table");
    prep_cmd->add_option("--nodes", prep.nodes, "Node attribute file")->required();
    prep_cmd->add_option("--nominations", prep.nominations, "Nomination file")->required();
    prep_cmd->add_option("--specs", prep.specs, "Regressor specification file")->required();
    prep_cmd->add_option("--out", prep.out, "Output dyad file")->required();
    prep_cmd->add_option("--filter", prep.filters,
                         "Row filter, applied left to right: all, ego-gender:<column>:<female|male>,"
                         " exclude-p1-nodes, exclude-p1-pairs");
    prep_cmd->add_option("--summary", prep.summary, "Also write per-column attribute summaries");
    prep_cmd->callback([&] { run_prep(prep); });

    BmaOptions bma;
    CLI::App* bma_cmd = app.add_subcommand("bma", "Average over all regressor subsets");
    bma_cmd->add_option("--dyads", bma.dyads, "Dyad file from prep")->required();
    bma_cmd->add_option("--out", bma.out,
                        "Output prefix (.results.csv, .topmodels.csv, .meta.json)")
        ->required();
    bma_cmd->add_option("--engine", bma.engine, "enumerate|mc3 (default enumerate)");
    bma_cmd->add_option("--model-prior", bma.model_prior, "uniform|fixed|random");
    auto* mbar_opt = bma_cmd->add_option("--mbar", bma.mbar, "Prior mean model size (default K/2)");
    bma_cmd->add_option("--g", bma.g, "bric|uip|fixed:<v> (default bric)");
    bma_cmd->add_option("--workers", bma.workers, "Worker threads for enumeration")
        ->check(CLI::Range(1, 1024));
    bma_cmd->add_option("--top-models", bma.top_models, "Top models to record (default 10)");
    bma_cmd->add_option("--exhaustive-cap", bma.exhaustive_cap,
                        "Refuse enumeration above this K (default 25)");
    bma_cmd->add_option("--chain", bma.chain, "mc3: total chain length");
    bma_cmd->add_option("--burn-in", bma.burn_in, "mc3: burn-in steps");
    bma_cmd->add_option("--seed", bma.seed, "mc3: chain seed");
    bma_cmd->add_flag("--timing", bma.timing, "Record wall time in the meta file");
    bma_cmd->callback([&] {
        bma.mbar_given = mbar_opt->count() > 0;
        run_bma(bma);
    });

    WalsOptions wals;
    CLI::App* wals_cmd = app.add_subcommand("wals", "Weighted-average least squares fit");
    wals_cmd->add_option("--dyads", wals.dyads, "Dyad file from prep")->required();
    wals_cmd->add_option("--out", wals.out, "Output coefficient table")->required();
    wals_cmd->add_option("--focus", wals.focus, "Focus regressor kept unshrunk (repeatable)");
    wals_cmd->add_option("--laplace-c", wals.laplace_c, "Laplace prior scale (default ln 2)");
    wals_cmd->add_option("--t-robust", wals.t_robust, "|t| threshold for the robust marker");
    wals_cmd->callback([&] { run_wals(wals); });

    SimulateOptions sim;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Synthetic-recovery study");
    sim_cmd->add_option("--spec", sim.spec, "Generating-process file (default: built-in study)");
    sim_cmd->add_option("--emit-spec", sim.emit_spec, "Write the generating process used");
    sim_cmd->add_option("--out", sim.out, "Output prefix (.recovery.csv, .recovery.meta.json)");
    sim_cmd->add_option("--replications", sim.replications, "Replication count (default 20)");
    auto* seed_opt = sim_cmd->add_option("--seed", sim.seed, "Override the master seed");
    sim_cmd->add_option("--threshold", sim.threshold, "PIP threshold for recovery rates");
    sim_cmd->add_option("--model-prior", sim.model_prior, "uniform|fixed|random");
    auto* sim_mbar_opt =
        sim_cmd->add_option("--mbar", sim.mbar, "Prior mean model size (default K/2)");
    sim_cmd->add_option("--g", sim.g, "bric|uip|fixed:<v> (default bric)");
    sim_cmd->add_option("--workers", sim.workers, "Worker threads per enumeration")
        ->check(CLI::Range(1, 1024));
    sim_cmd->add_option("--dump", sim.dump, "Dump each generated dataset under this prefix");
    sim_cmd->callback([&] {
        sim.seed_given = seed_opt->count() > 0;
        sim.mbar_given = sim_mbar_opt->count() > 0;
        run_simulate(sim);
    });

    ReportOptions rep;
    CLI::App* rep_cmd = app.add_subcommand("report", "Format previously computed results");
    rep_cmd->add_option("--results", rep.results, "Result prefix from bma (repeatable)");
    rep_cmd->add_option("--label", rep.labels, "Label per --results (comparison output)");
    rep_cmd->add_option("--out", rep.out, "Output table")->required();
    rep_cmd->add_option("--pip-bold", rep.pip_bold, "Robustness threshold (default 0.8)");
    rep_cmd->callback([&] { run_report(rep); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
