#include "dyadbma/bma.hpp"
#include "dyadbma/errors.hpp"
#include "dyadbma/rng.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <thread>
#include <unordered_map>

namespace dyadbma {

std::string mask_to_string(std::uint64_t mask, std::size_t K) {
    std::string out(K, '0');
    for (std::size_t h = 0; h < K; ++h)
        if (mask >> h & 1u) out[h] = '1';
    return out;
}

std::uint64_t mask_from_string(const std::string& bits) {
    if (bits.size() > 63) throw ConfigError("model bitstring longer than 63");
    std::uint64_t mask = 0;
    for (std::size_t h = 0; h < bits.size(); ++h) {
        if (bits[h] == '1') mask |= 1ull << h;
        else if (bits[h] != '0') throw ParseError("model bitstring must contain only 0/1");
    }
    return mask;
}

namespace {

constexpr std::uint64_t gray(std::uint64_t t) { return t ^ (t >> 1); }

/// Candidate for the top-models list; ordered by (log weight desc, mask asc).
struct TopCandidate {
    double logw;
    std::uint64_t mask;
};

bool top_less(const TopCandidate& a, const TopCandidate& b) {
    if (a.logw != b.logw) return a.logw > b.logw;
    return a.mask < b.mask;
}

void top_insert(std::vector<TopCandidate>& top, std::size_t limit, const TopCandidate& c) {
    if (limit == 0) return;
    if (top.size() == limit && !top_less(c, top.back())) return;
    auto pos = std::lower_bound(top.begin(), top.end(), c, top_less);
    top.insert(pos, c);
    if (top.size() > limit) top.pop_back();
}

/// Sequential online log-sum-exp; order-fixed for determinism.
struct OnlineLse {
    double max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    void add(double lw) {
        if (lw <= max) {
            sum += std::exp(lw - max);
        } else {
            sum = sum * std::exp(max - lw) + 1.0;
            max = lw;
        }
    }
    double value() const {
        if (sum == 0.0) return -std::numeric_limits<double>::infinity();
        return max + std::log(sum);
    }
};

double lse2(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

/// Fixed-shape pairwise reduction; identical result for any worker count.
template <typename T, typename Combine>
T reduce_pairwise(std::vector<T> values, Combine combine) {
    while (values.size() > 1) {
        std::vector<T> next;
        next.reserve(values.size() / 2 + 1);
        for (std::size_t i = 0; i + 1 < values.size(); i += 2)
            next.push_back(combine(values[i], values[i + 1]));
        if (values.size() % 2 == 1) next.push_back(values.back());
        values = std::move(next);
    }
    return values.front();
}

struct SegmentAccum {
    double log_z = -std::numeric_limits<double>::infinity();
    double mass = 0.0;
    std::vector<double> incl, m1, m2; // sum p, sum p*m_h, sum p*(v_h + m_h^2)
    std::vector<TopCandidate> top;
    std::uint64_t rank_reduced_models = 0;
};

struct EnumPlan {
    std::size_t K = 0;
    int segment_bits = 0;              // 2^segment_bits fixed segments
    std::uint64_t models_per_segment = 0;
    std::uint64_t n_segments = 0;
};

EnumPlan make_plan(std::size_t K) {
    EnumPlan plan;
    plan.K = K;
    plan.segment_bits = K >= 12 ? 6 : 0;
    plan.n_segments = 1ull << plan.segment_bits;
    plan.models_per_segment = 1ull << (K - static_cast<std::size_t>(plan.segment_bits));
    return plan;
}

/// One Gray-code walk over a segment. pass1 collects the segment's log-sum;
/// pass2 (log_z_global given) accumulates normalized posterior quantities.
void walk_segment(const CenteredDesign& design, const std::vector<double>& prior_table,
                  std::size_t N, double G, const EnumPlan& plan, std::uint64_t seg,
                  bool pass2, double log_z_global, std::size_t top_limit, SegmentAccum& acc) {
    const std::uint64_t t0 = seg * plan.models_per_segment;
    const std::uint64_t t1 = t0 + plan.models_per_segment;
    SweepState state(design);
    state.set_mask(gray(t0));

    OnlineLse lse;
    if (pass2) {
        acc.incl.assign(plan.K, 0.0);
        acc.m1.assign(plan.K, 0.0);
        acc.m2.assign(plan.K, 0.0);
    }
    for (std::uint64_t t = t0;; ++t) {
        const std::uint64_t mask = state.mask();
        const std::size_t k_req = static_cast<std::size_t>(std::popcount(mask));
        const double logw = log_bf_from_state(state, N, G) + prior_table[k_req];
        if (state.rank_deficient()) ++acc.rank_reduced_models;
        if (!pass2) {
            lse.add(logw);
        } else {
            const double p = std::exp(logw - log_z_global);
            acc.mass += p;
            if (mask != 0) {
                const MomentScale ms = moment_scale(state, N, G);
                for (std::uint64_t bits = mask; bits != 0; bits &= bits - 1) {
                    const std::size_t h = static_cast<std::size_t>(std::countr_zero(bits));
                    acc.incl[h] += p;
                    if (!state.is_swept(h)) continue;
                    const double m = conditional_mean(state, h, ms);
                    const double v = conditional_var(state, h, ms);
                    acc.m1[h] += p * m;
                    acc.m2[h] += p * (v + m * m);
                }
            }
            top_insert(acc.top, top_limit, {logw, mask});
        }
        if (t + 1 == t1) break;
        state.toggle(static_cast<std::size_t>(std::countr_zero(t + 1)));
    }
    if (!pass2) acc.log_z = lse.value();
}

void run_segments(const CenteredDesign& design, const std::vector<double>& prior_table,
                  std::size_t N, double G, const EnumPlan& plan, bool pass2,
                  double log_z_global, std::size_t top_limit, int workers,
                  std::vector<SegmentAccum>& accums) {
    const std::uint64_t n_seg = plan.n_segments;
    int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(n_seg)));
    if (n_threads == 1) {
        for (std::uint64_t seg = 0; seg < n_seg; ++seg)
            walk_segment(design, prior_table, N, G, plan, seg, pass2, log_z_global, top_limit,
                         accums[seg]);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    auto body = [&]() {
        while (true) {
            std::uint64_t seg = next.fetch_add(1);
            if (seg >= n_seg) return;
            walk_segment(design, prior_table, N, G, plan, seg, pass2, log_z_global, top_limit,
                         accums[seg]);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads) - 1);
    for (int i = 1; i < n_threads; ++i) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
}

} // namespace

BmaResult enumerate_bma(const SufficientStats& stats, const PriorSpec& prior,
                        const EnumerateConfig& config) {
    const std::size_t K = stats.K;
    if (K > config.exhaustive_cap || K > 62)
        throw ConfigError("K=" + std::to_string(K) + " exceeds the exhaustive cap of " +
                          std::to_string(std::min<std::size_t>(config.exhaustive_cap, 62)) +
                          "; use mc3_bma (--engine mc3) for larger model spaces");

    const double G = g_value(prior, stats.N, K);
    const std::vector<double> prior_table = model_prior_table(prior, K);
    const CenteredDesign design = make_centered_design(stats);
    const EnumPlan plan = make_plan(K);

    std::vector<SegmentAccum> accums(plan.n_segments);
    run_segments(design, prior_table, stats.N, G, plan, false, 0.0, config.top_models,
                 config.workers, accums);
    std::vector<double> seg_logz(plan.n_segments);
    for (std::uint64_t s = 0; s < plan.n_segments; ++s) seg_logz[s] = accums[s].log_z;
    const double log_z = reduce_pairwise(seg_logz, lse2);

    for (auto& acc : accums) acc.rank_reduced_models = 0; // counted once, in pass 2
    run_segments(design, prior_table, stats.N, G, plan, true, log_z, config.top_models,
                 config.workers, accums);

    BmaResult result;
    result.names = stats.names;
    result.N = stats.N;
    result.K = K;
    result.G = G;
    result.prior = prior;
    result.engine = "enumerate";
    result.pip.assign(K, 0.0);
    result.post_mean.assign(K, 0.0);
    result.post_sd.assign(K, 0.0);

    // Elementwise fixed-shape reductions over the segment accumulators.
    auto reduce_field = [&](auto getter) {
        std::vector<double> values(plan.n_segments);
        for (std::size_t s = 0; s < plan.n_segments; ++s) values[s] = getter(accums[s]);
        return reduce_pairwise(values, [](double a, double b) { return a + b; });
    };
    result.prob_mass_check = reduce_field([](const SegmentAccum& a) { return a.mass; });
    for (std::size_t h = 0; h < K; ++h) {
        result.pip[h] = reduce_field([h](const SegmentAccum& a) { return a.incl[h]; });
        double m1 = reduce_field([h](const SegmentAccum& a) { return a.m1[h]; });
        double m2 = reduce_field([h](const SegmentAccum& a) { return a.m2[h]; });
        result.post_mean[h] = m1;
        double var = m2 - m1 * m1;
        result.post_sd[h] = var > 0.0 ? std::sqrt(var) : 0.0;
    }

    std::vector<TopCandidate> merged;
    for (const auto& acc : accums)
        for (const auto& c : acc.top) merged.push_back(c);
    std::sort(merged.begin(), merged.end(), top_less);
    if (merged.size() > config.top_models) merged.resize(config.top_models);
    for (const auto& c : merged)
        result.top_models.push_back({c.mask, std::exp(c.logw - log_z)});

    result.log_evidence = log_z - log_model_prior_total(prior, K);

    std::uint64_t rank_reduced = 0;
    for (const auto& acc : accums) rank_reduced += acc.rank_reduced_models;
    for (std::size_t h = 0; h < K; ++h)
        if (design.degenerate[h])
            result.warnings.push_back("column '" + stats.names[h] +
                                      "' has zero variance and contributes no fit");
    if (rank_reduced > 0)
        result.warnings.push_back("rank reduction applied in " + std::to_string(rank_reduced) +
                                  " of " + std::to_string(1ull << K) + " models");
    return result;
}

BmaResult mc3_bma(const SufficientStats& stats, const PriorSpec& prior, const Mc3Config& config) {
    const std::size_t K = stats.K;
    if (K == 0) throw ConfigError("mc3_bma requires at least one candidate regressor");
    if (config.chain_length <= config.burn_in)
        throw ConfigError("chain length must exceed burn-in");

    const double G = g_value(prior, stats.N, K);
    const std::vector<double> prior_table = model_prior_table(prior, K);
    const CenteredDesign design = make_centered_design(stats);

    SweepState state(design);
    Rng rng(config.seed);
    auto logw_of = [&](const SweepState& st) {
        return log_bf_from_state(st, stats.N, G) +
               prior_table[static_cast<std::size_t>(std::popcount(st.mask()))];
    };
    double cur_lw = logw_of(state);

    const std::uint64_t kept = config.chain_length - config.burn_in;
    std::vector<double> incl(K, 0.0), m1(K, 0.0), m2(K, 0.0);
    std::unordered_map<std::uint64_t, std::uint64_t> visits;
    std::uint64_t accepted = 0;

    for (std::uint64_t step = 0; step < config.chain_length; ++step) {
        const std::size_t h = static_cast<std::size_t>(rng.uniform_int(K));
        state.toggle(h);
        const double prop_lw = logw_of(state);
        const double u = rng.uniform();
        if (std::log(u > 0.0 ? u : std::numeric_limits<double>::min()) < prop_lw - cur_lw) {
            cur_lw = prop_lw;
            ++accepted;
        } else {
            state.toggle(h);
        }
        if (config.refresh_interval > 0 && (step + 1) % config.refresh_interval == 0) {
            state.set_mask(state.mask());
            cur_lw = logw_of(state);
        }
        if (step < config.burn_in) continue;

        const std::uint64_t mask = state.mask();
        ++visits[mask];
        if (mask != 0) {
            const MomentScale ms = moment_scale(state, stats.N, G);
            for (std::uint64_t bits = mask; bits != 0; bits &= bits - 1) {
                const std::size_t b = static_cast<std::size_t>(std::countr_zero(bits));
                incl[b] += 1.0;
                if (!state.is_swept(b)) continue;
                const double m = conditional_mean(state, b, ms);
                const double v = conditional_var(state, b, ms);
                m1[b] += m;
                m2[b] += v + m * m;
            }
        }
    }

    BmaResult result;
    result.names = stats.names;
    result.N = stats.N;
    result.K = K;
    result.G = G;
    result.prior = prior;
    result.engine = "mc3";
    result.pip.assign(K, 0.0);
    result.post_mean.assign(K, 0.0);
    result.post_sd.assign(K, 0.0);
    const double denom = static_cast<double>(kept);
    for (std::size_t h = 0; h < K; ++h) {
        result.pip[h] = incl[h] / denom;
        result.post_mean[h] = m1[h] / denom;
        double var = m2[h] / denom - result.post_mean[h] * result.post_mean[h];
        result.post_sd[h] = var > 0.0 ? std::sqrt(var) : 0.0;
    }
    result.prob_mass_check = 1.0; // visit frequencies normalize by construction
    result.mc3_acceptance = static_cast<double>(accepted) / static_cast<double>(config.chain_length);

    std::vector<std::pair<std::uint64_t, std::uint64_t>> ranked(visits.begin(), visits.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > config.top_models) ranked.resize(config.top_models);
    for (const auto& [mask, count] : ranked)
        result.top_models.push_back({mask, static_cast<double>(count) / denom});

    for (std::size_t h = 0; h < K; ++h)
        if (design.degenerate[h])
            result.warnings.push_back("column '" + stats.names[h] +
                                      "' has zero variance and contributes no fit");
    return result;
}

} // namespace dyadbma
