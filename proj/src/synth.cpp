#include "dyadbma/synth.hpp"
#include "dyadbma/csv.hpp"
#include "dyadbma/dyads.hpp"
#include "dyadbma/errors.hpp"
#include "dyadbma/rng.hpp"
#include "dyadbma/sufficient_stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace dyadbma {

using nlohmann::json;

void validate_dgp_spec(const DgpSpec& spec) {
    if (spec.n_nodes < 2) throw ConfigError("a population needs at least 2 nodes");
    if (!(spec.p1 >= 0.0 && spec.p1 <= 1.0)) throw ConfigError("p1 must lie in [0,1]");
    std::set<std::string> columns;
    for (const auto& g : spec.generators) {
        if (g.column.empty()) throw ConfigError("generator with empty column name");
        if (!columns.insert(g.column).second)
            throw ConfigError("duplicate generator column: " + g.column);
        switch (g.family) {
            case AttributeGen::Family::binary:
                if (!(g.p >= 0.0 && g.p <= 1.0))
                    throw ConfigError("binary generator '" + g.column + "' needs p in [0,1]");
                break;
            case AttributeGen::Family::gaussian:
                if (!(g.sd >= 0.0) || !std::isfinite(g.mean) || !std::isfinite(g.sd))
                    throw ConfigError("gaussian generator '" + g.column + "' needs finite mean, sd >= 0");
                break;
            case AttributeGen::Family::uniform_int:
                if (g.hi < g.lo)
                    throw ConfigError("uniform_int generator '" + g.column + "' needs hi >= lo");
                break;
        }
    }
    std::set<std::string> names;
    for (const auto& v : spec.variables) {
        if (!names.insert(v.name).second) throw ConfigError("duplicate variable name: " + v.name);
        if (v.transform != Transform::lag && !columns.count(v.source_column))
            throw ConfigError("variable '" + v.name + "' references ungenerated column '" +
                              v.source_column + "'");
    }
    for (const auto& [name, beta] : spec.true_model) {
        if (!names.count(name))
            throw ConfigError("true_model names unknown regressor '" + name + "'");
        if (!std::isfinite(beta)) throw ConfigError("non-finite coefficient for '" + name + "'");
    }
    if (!std::isfinite(spec.beta0)) throw ConfigError("beta0 must be finite");
}

namespace {

std::string node_id_of(std::size_t index, std::size_t n) {
    std::size_t width = std::to_string(n).size();
    std::string digits = std::to_string(index + 1);
    return "n" + std::string(width - digits.size(), '0') + digits;
}

double draw(const AttributeGen& g, Rng& rng) {
    switch (g.family) {
        case AttributeGen::Family::binary: return rng.bernoulli(g.p) ? 1.0 : 0.0;
        case AttributeGen::Family::gaussian: return rng.gaussian(g.mean, g.sd);
        case AttributeGen::Family::uniform_int: {
            std::uint64_t range = static_cast<std::uint64_t>(g.hi - g.lo) + 1;
            return static_cast<double>(g.lo) + static_cast<double>(rng.uniform_int(range));
        }
    }
    throw ConfigError("unknown generator family");
}

} // namespace

GeneratedData generate_population(const DgpSpec& spec) {
    validate_dgp_spec(spec);
    GeneratedData data;
    AttributeTable& attrs = data.attrs;

    const std::size_t n = spec.n_nodes;
    for (std::size_t i = 0; i < n; ++i) attrs.node_ids.push_back(node_id_of(i, n));
    for (const auto& g : spec.generators) {
        attrs.column_names.push_back(g.column);
        attrs.column_kinds.push_back(g.kind());
        std::vector<Cell> cells;
        cells.reserve(n);
        Rng rng(mix_seed(spec.seed, "attr:" + g.column));
        for (std::size_t i = 0; i < n; ++i) cells.emplace_back(draw(g, rng));
        attrs.columns.push_back(std::move(cells));
    }
    attrs.rebuild_indexes();

    // Node ids are already sorted; pair iteration order is lexicographic.
    Rng rng1(mix_seed(spec.seed, "links:1"));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (rng1.bernoulli(spec.p1))
                data.period1.insert({attrs.node_ids[a], attrs.node_ids[b]});

    // Planted effects: coefficient times the transformed pair regressor.
    struct Effect {
        std::size_t column = 0;
        Transform transform = Transform::abs_diff;
        double beta = 0.0;
    };
    std::vector<Effect> effects;
    double beta_lag = 0.0;
    for (const auto& v : spec.variables) {
        auto it = spec.true_model.find(v.name);
        if (it == spec.true_model.end() || it->second == 0.0) continue;
        if (v.transform == Transform::lag) {
            beta_lag = it->second;
            continue;
        }
        effects.push_back({attrs.column(v.source_column), v.transform, it->second});
    }

    Rng rng2(mix_seed(spec.seed, "links:2"));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            double index = spec.beta0;
            for (const auto& e : effects)
                index += e.beta * transform_value(e.transform, *attrs.cell(a, e.column),
                                                  *attrs.cell(b, e.column));
            if (beta_lag != 0.0 &&
                data.period1.count({attrs.node_ids[a], attrs.node_ids[b]}))
                index += beta_lag;
            double prob = std::clamp(index, 0.0, 1.0);
            if (rng2.bernoulli(prob))
                data.period2.insert({attrs.node_ids[a], attrs.node_ids[b]});
        }
    }
    return data;
}

void write_generated(const GeneratedData& data, const std::string& prefix) {
    {
        std::ofstream out(prefix + ".nodes.csv");
        if (!out) throw ParseError("cannot write file: " + prefix + ".nodes.csv");
        out << "node_id";
        for (const auto& name : data.attrs.column_names) out << ',' << name;
        out << '\n';
        for (std::size_t r = 0; r < data.attrs.n_nodes(); ++r) {
            out << data.attrs.node_ids[r];
            for (std::size_t c = 0; c < data.attrs.n_columns(); ++c) {
                const Cell& cell = data.attrs.cell(r, c);
                out << ',' << (cell ? format_roundtrip(*cell) : "");
            }
            out << '\n';
        }
    }
    std::ofstream out(prefix + ".nominations.csv");
    if (!out) throw ParseError("cannot write file: " + prefix + ".nominations.csv");
    out << "period,nominator,nominee\n";
    for (int period = 1; period <= 2; ++period) {
        const PairSet& pairs = period == 1 ? data.period1 : data.period2;
        for (const auto& p : pairs) {
            out << period << ',' << p.first << ',' << p.second << '\n';
            out << period << ',' << p.second << ',' << p.first << '\n';
        }
    }
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    if (sorted.size() == 1) return sorted[0];
    double pos = q * static_cast<double>(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

} // namespace

RecoveryReport run_recovery(const DgpSpec& spec, std::size_t replications, const PriorSpec& prior,
                            double threshold, int workers, const std::string& dump_prefix) {
    validate_dgp_spec(spec);
    if (replications < 1) throw ConfigError("replications must be >= 1");

    RecoveryReport report;
    report.replications = replications;
    report.master_seed = spec.seed;
    report.threshold = threshold;

    std::vector<std::string> names;
    for (std::size_t rep = 0; rep < replications; ++rep) {
        DgpSpec rep_spec = spec;
        rep_spec.seed = mix_seed(spec.seed, "rep:" + std::to_string(rep));
        report.rep_seeds.push_back(rep_spec.seed);

        try {
            GeneratedData data = generate_population(rep_spec);
            if (!dump_prefix.empty())
                write_generated(data, dump_prefix + ".rep" + std::to_string(rep));
            DyadTable dyads = build_dyads(data.attrs, rep_spec.variables, data.period2,
                                          data.period1, {});
            SufficientStats stats = compute_sufficient_stats(dyads);
            EnumerateConfig config;
            config.workers = workers;
            BmaResult result = enumerate_bma(stats, prior, config);
            if (rep == 0) {
                names = result.names;
                report.regressors.resize(names.size());
                for (std::size_t h = 0; h < names.size(); ++h) {
                    report.regressors[h].name = names[h];
                    auto it = spec.true_model.find(names[h]);
                    report.regressors[h].planted = it != spec.true_model.end() && it->second != 0.0;
                    report.regressors[h].true_beta =
                        it != spec.true_model.end() ? it->second : 0.0;
                }
            }
            for (std::size_t h = 0; h < names.size(); ++h)
                report.regressors[h].pips.push_back(result.pip[h]);
        } catch (const Error& e) {
            throw Error(e.code(), "replication " + std::to_string(rep) + ": " + e.what());
        }
    }

    std::vector<double> noise_pips;
    for (auto& reg : report.regressors) {
        std::vector<double> sorted = reg.pips;
        std::sort(sorted.begin(), sorted.end());
        double sum = 0.0;
        std::size_t hits = 0;
        for (double p : reg.pips) {
            sum += p;
            if (p >= threshold) ++hits;
        }
        reg.mean = sum / static_cast<double>(reg.pips.size());
        reg.q10 = quantile_sorted(sorted, 0.10);
        reg.median = quantile_sorted(sorted, 0.50);
        reg.q90 = quantile_sorted(sorted, 0.90);
        reg.rate_ge_threshold = static_cast<double>(hits) / static_cast<double>(reg.pips.size());
        if (!reg.planted) noise_pips.insert(noise_pips.end(), reg.pips.begin(), reg.pips.end());
    }
    std::sort(noise_pips.begin(), noise_pips.end());
    report.pooled_noise_median = quantile_sorted(noise_pips, 0.50);
    return report;
}

namespace {

const char* family_token(AttributeGen::Family family) {
    switch (family) {
        case AttributeGen::Family::binary: return "binary";
        case AttributeGen::Family::gaussian: return "gaussian";
        case AttributeGen::Family::uniform_int: return "uniform_int";
    }
    return "?";
}

AttributeGen::Family parse_family(const std::string& token) {
    if (token == "binary") return AttributeGen::Family::binary;
    if (token == "gaussian") return AttributeGen::Family::gaussian;
    if (token == "uniform_int") return AttributeGen::Family::uniform_int;
    throw SchemaError("unknown generator family '" + token + "'");
}

const char* transform_token(Transform t) {
    switch (t) {
        case Transform::abs_diff: return "absdiff";
        case Transform::shared_dummy: return "shared";
        case Transform::lag: return "lag";
    }
    return "?";
}

Transform parse_transform_token(const std::string& token) {
    if (token == "absdiff") return Transform::abs_diff;
    if (token == "shared") return Transform::shared_dummy;
    if (token == "lag") return Transform::lag;
    throw SchemaError("unknown transform '" + token + "'");
}

} // namespace

DgpSpec load_dgp_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    DgpSpec spec;
    try {
        spec.n_nodes = j.at("n_nodes").get<std::size_t>();
        spec.seed = j.value("seed", std::uint64_t{0});
        spec.beta0 = j.at("beta0").get<double>();
        spec.p1 = j.at("p1").get<double>();
        for (const auto& gj : j.at("generators")) {
            AttributeGen g;
            g.column = gj.at("column").get<std::string>();
            g.family = parse_family(gj.at("family").get<std::string>());
            switch (g.family) {
                case AttributeGen::Family::binary: g.p = gj.at("p").get<double>(); break;
                case AttributeGen::Family::gaussian:
                    g.mean = gj.at("mean").get<double>();
                    g.sd = gj.at("sd").get<double>();
                    break;
                case AttributeGen::Family::uniform_int:
                    g.lo = gj.at("lo").get<long long>();
                    g.hi = gj.at("hi").get<long long>();
                    break;
            }
            spec.generators.push_back(std::move(g));
        }
        for (const auto& vj : j.at("variables")) {
            VariableSpec v;
            v.name = vj.at("name").get<std::string>();
            v.transform = parse_transform_token(vj.at("transform").get<std::string>());
            v.source_column = vj.value("source_column", std::string{});
            v.role = vj.value("role", std::string{"candidate"}) == "always"
                         ? Role::always_included
                         : Role::candidate;
            spec.variables.push_back(std::move(v));
        }
        for (const auto& [name, beta] : j.at("true_model").items())
            spec.true_model[name] = beta.get<double>();
    } catch (const json::exception& e) {
        throw SchemaError(path + ": " + e.what());
    }
    validate_dgp_spec(spec);
    return spec;
}

void save_dgp_spec(const DgpSpec& spec, const std::string& path) {
    json j;
    j["n_nodes"] = spec.n_nodes;
    j["seed"] = spec.seed;
    j["beta0"] = spec.beta0;
    j["p1"] = spec.p1;
    j["generators"] = json::array();
    for (const auto& g : spec.generators) {
        json gj;
        gj["column"] = g.column;
        gj["family"] = family_token(g.family);
        switch (g.family) {
            case AttributeGen::Family::binary: gj["p"] = g.p; break;
            case AttributeGen::Family::gaussian:
                gj["mean"] = g.mean;
                gj["sd"] = g.sd;
                break;
            case AttributeGen::Family::uniform_int:
                gj["lo"] = g.lo;
                gj["hi"] = g.hi;
                break;
        }
        j["generators"].push_back(std::move(gj));
    }
    j["variables"] = json::array();
    for (const auto& v : spec.variables) {
        json vj;
        vj["name"] = v.name;
        vj["transform"] = transform_token(v.transform);
        if (v.transform != Transform::lag) vj["source_column"] = v.source_column;
        vj["role"] = v.role == Role::always_included ? "always" : "candidate";
        j["variables"].push_back(std::move(vj));
    }
    j["true_model"] = json::object();
    for (const auto& [name, beta] : spec.true_model) j["true_model"][name] = beta;

    std::ofstream out(path);
    if (!out) throw ParseError("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

DgpSpec default_recovery_spec() {
    DgpSpec spec;
    spec.n_nodes = 150;
    spec.seed = 20211;
    spec.beta0 = 0.02;
    spec.p1 = 0.013;

    auto binary = [](const std::string& column, double p) {
        AttributeGen g;
        g.column = column;
        g.family = AttributeGen::Family::binary;
        g.p = p;
        return g;
    };
    auto gaussian = [](const std::string& column, double mean, double sd) {
        AttributeGen g;
        g.column = column;
        g.family = AttributeGen::Family::gaussian;
        g.mean = mean;
        g.sd = sd;
        return g;
    };
    auto uniform_int = [](const std::string& column, long long lo, long long hi) {
        AttributeGen g;
        g.column = column;
        g.family = AttributeGen::Family::uniform_int;
        g.lo = lo;
        g.hi = hi;
        return g;
    };
    spec.generators = {
        binary("female", 0.44),
        binary("section_block", 0.5),
        binary("smoker", 0.22),
        uniform_int("inconsistency", 0, 2),
        uniform_int("altruism", 0, 5),
        uniform_int("crt", 0, 3),
        binary("reflective", 0.54),
        uniform_int("time_pref", 0, 11),
        uniform_int("income", 0, 5),
        uniform_int("risk", 0, 10),
        uniform_int("reciprocity", 1, 7),
        uniform_int("self_confidence", 1, 7),
        gaussian("bmi", 22.5, 3.2),
        uniform_int("parent_educ", 0, 5),
        binary("volunteer", 0.17),
        binary("stem_best", 0.28),
        binary("stem_pref", 0.30),
        binary("altruism_learner", 0.38),
        binary("political_right", 0.44),
    };

    auto var = [](const std::string& name, const std::string& column, Transform t) {
        VariableSpec v;
        v.name = name;
        v.source_column = column;
        v.transform = t;
        v.role = Role::candidate;
        return v;
    };
    spec.variables = {
        var("Common Gender", "female", Transform::shared_dummy),
        var("Common Section", "section_block", Transform::shared_dummy),
        var(kLagRegressorName, "", Transform::lag),
        var("Both Smokers", "smoker", Transform::shared_dummy),
        var("Inconsistent diff.", "inconsistency", Transform::abs_diff),
        var("Altruism diff.", "altruism", Transform::abs_diff),
        var("CRT diff.", "crt", Transform::abs_diff),
        var("Both Reflective", "reflective", Transform::shared_dummy),
        var("Time pref. diff.", "time_pref", Transform::abs_diff),
        var("Income diff.", "income", Transform::abs_diff),
        var("Risk diff.", "risk", Transform::abs_diff),
        var("Reciprocity diff.", "reciprocity", Transform::abs_diff),
        var("Self-confidence diff.", "self_confidence", Transform::abs_diff),
        var("BMI diff.", "bmi", Transform::abs_diff),
        var("Parent educ. diff.", "parent_educ", Transform::abs_diff),
        var("Both volunteers", "volunteer", Transform::shared_dummy),
        var("Both STEM best grade", "stem_best", Transform::shared_dummy),
        var("Both STEM pref.", "stem_pref", Transform::shared_dummy),
        var("Both altruism learner", "altruism_learner", Transform::shared_dummy),
        var("Both right", "political_right", Transform::shared_dummy),
    };
    spec.true_model = {
        {"Common Gender", 0.017},
        {"Common Section", 0.064},
        {kLagRegressorName, 0.435},
        {"Both Smokers", 0.034},
    };
    return spec;
}

} // namespace dyadbma
