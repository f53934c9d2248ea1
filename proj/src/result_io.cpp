#include "dyadbma/result_io.hpp"
#include "dyadbma/csv.hpp"
#include "dyadbma/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>

namespace dyadbma {
namespace {

using nlohmann::json;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + path);
    out << text;
    if (!out) throw ParseError("write failed: " + path);
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

const char* prior_kind_label(ModelPriorKind kind) {
    switch (kind) {
    case ModelPriorKind::uniform: return "uniform";
    case ModelPriorKind::fixed_theta: return "fixed";
    case ModelPriorKind::binomial_beta: return "random";
    }
    return "uniform";
}

const char* g_rule_label(GRule rule) {
    switch (rule) {
    case GRule::bric: return "bric";
    case GRule::uip: return "uip";
    case GRule::fixed_g: return "fixed";
    }
    return "bric";
}

json finite_or_null(double v) {
    if (std::isfinite(v)) return json(v);
    return json(nullptr);
}

json prior_json(const PriorSpec& prior) {
    json j;
    j["model_prior"] = prior_kind_label(prior.model_prior);
    j["mbar"] = prior.mbar;
    j["g_rule"] = g_rule_label(prior.g_rule);
    if (prior.g_rule == GRule::fixed_g) j["fixed_g"] = prior.fixed_g;
    return j;
}

} // namespace

void write_bma_results(const std::string& path, const BmaResult& result) {
    std::string text = "name,pip,post_mean,post_sd\n";
    for (std::size_t h = 0; h < result.names.size(); ++h) {
        text += result.names[h];
        text += ',' + format_sig(result.pip[h]);
        text += ',' + format_sig(result.post_mean[h]);
        text += ',' + format_sig(result.post_sd[h]);
        text += '\n';
    }
    write_text(path, text);
}

BmaResult read_bma_results(const std::string& path) {
    DelimFile file = read_delim_file(path);
    const std::vector<std::string> expected = {"name", "pip", "post_mean", "post_sd"};
    if (file.header != expected)
        throw SchemaError(path + ": expected header name,pip,post_mean,post_sd");
    BmaResult result;
    for (const auto& row : file.rows) {
        result.names.push_back(row[0]);
        result.pip.push_back(parse_double(row[1], "pip"));
        result.post_mean.push_back(parse_double(row[2], "post_mean"));
        result.post_sd.push_back(parse_double(row[3], "post_sd"));
    }
    result.K = result.names.size();
    return result;
}

void write_top_models(const std::string& path, const BmaResult& result) {
    std::string text = "model,size,posterior_prob\n";
    for (const auto& model : result.top_models) {
        text += mask_to_string(model.mask, result.K);
        text += ',' + std::to_string(std::popcount(model.mask));
        text += ',' + format_sig(model.posterior_prob);
        text += '\n';
    }
    write_text(path, text);
}

void write_bma_meta(const std::string& path, const BmaResult& result, int workers,
                    double wall_seconds) {
    json j;
    j["N"] = result.N;
    j["K"] = result.K;
    j["G"] = result.G;
    j["engine"] = result.engine;
    j["model_prior"] = prior_kind_label(result.prior.model_prior);
    j["mbar"] = result.prior.mbar;
    j["g_rule"] = g_rule_label(result.prior.g_rule);
    if (result.prior.g_rule == GRule::fixed_g) j["fixed_g"] = result.prior.fixed_g;
    j["log_evidence"] = finite_or_null(result.log_evidence);
    j["prob_mass_check"] = result.prob_mass_check;
    j["workers"] = workers;
    j["warnings"] = result.warnings;
    if (result.engine == "mc3") j["mc3_acceptance"] = finite_or_null(result.mc3_acceptance);
    if (wall_seconds >= 0.0) j["wall_seconds"] = wall_seconds;
    write_text(path, j.dump(2) + "\n");
}

BmaMeta read_bma_meta(const std::string& path) {
    json j = read_json(path);
    BmaMeta meta;
    try {
        meta.N = j.at("N").get<long long>();
        meta.K = j.at("K").get<int>();
        meta.G = j.value("G", 0.0);
        meta.engine = j.value("engine", std::string());
        if (j.contains("log_evidence") && j["log_evidence"].is_number())
            meta.log_evidence = j["log_evidence"].get<double>();
        else
            meta.log_evidence = std::numeric_limits<double>::quiet_NaN();
        meta.prob_mass_check = j.value("prob_mass_check", 0.0);
    } catch (const json::exception& e) {
        throw SchemaError(path + ": " + e.what());
    }
    return meta;
}

void write_wals_results(const std::string& path, const WalsResult& result, double t_robust) {
    std::vector<WalsRow> rows = result.rows;
    std::sort(rows.begin(), rows.end(), [](const WalsRow& a, const WalsRow& b) {
        double at = std::abs(a.t), bt = std::abs(b.t);
        if (at != bt) return at > bt;
        return a.name < b.name;
    });
    std::string text = "name,coef,se,t,robust\n";
    for (const auto& row : rows) {
        text += row.name;
        text += ',' + format_sig(row.coef);
        text += ',' + format_sig(row.se);
        text += ',' + format_sig(row.t);
        text += ',';
        if (std::abs(row.t) > t_robust) text += '*';
        text += '\n';
    }
    text += "Observations," + std::to_string(result.N) + ",,,\n";
    write_text(path, text);
}

void write_recovery_report(const std::string& path, const RecoveryReport& report) {
    std::string text = "name,planted,true_beta,pip_mean,pip_q10,pip_median,pip_q90,"
                       "rate_ge_threshold\n";
    for (const auto& reg : report.regressors) {
        text += reg.name;
        text += reg.planted ? ",1" : ",0";
        text += ',' + format_sig(reg.true_beta);
        text += ',' + format_sig(reg.mean);
        text += ',' + format_sig(reg.q10);
        text += ',' + format_sig(reg.median);
        text += ',' + format_sig(reg.q90);
        text += ',' + format_sig(reg.rate_ge_threshold);
        text += '\n';
    }
    write_text(path, text);
}

void write_recovery_meta(const std::string& path, const RecoveryReport& report,
                         const PriorSpec& prior) {
    json j;
    j["replications"] = report.replications;
    j["master_seed"] = report.master_seed;
    j["threshold"] = report.threshold;
    j["rep_seeds"] = report.rep_seeds;
    j["pooled_noise_median"] = report.pooled_noise_median;
    j["prior"] = prior_json(prior);
    write_text(path, j.dump(2) + "\n");
}

void write_summary(const std::string& path, const std::vector<ColumnSummary>& summaries) {
    std::string text = "column,kind,n,mean,sd,min,max\n";
    auto cell = [](const std::optional<double>& v) {
        return v ? format_sig(*v) : std::string();
    };
    for (const auto& s : summaries) {
        text += s.name;
        text += s.kind == ColumnKind::binary ? ",binary" : ",numeric";
        text += ',' + std::to_string(s.n);
        text += ',' + cell(s.mean);
        text += ',' + cell(s.sd);
        text += ',' + cell(s.min);
        text += ',' + cell(s.max);
        text += '\n';
    }
    write_text(path, text);
}

} // namespace dyadbma
