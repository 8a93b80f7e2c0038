#include "tokennet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <utility>

#include "tokennet/econ.hpp"
#include "tokennet/error.hpp"
#include "tokennet/features.hpp"
#include "tokennet/graph_stats.hpp"
#include "tokennet/rng.hpp"

namespace tokennet {

std::string to_string(Archetype a) {
    switch (a) {
        case Archetype::centralized: return "centralized";
        case Archetype::decentralized: return "decentralized";
        default: return "distributed";
    }
}

Archetype archetype_from_string(const std::string& name) {
    if (name == "centralized") return Archetype::centralized;
    if (name == "decentralized") return Archetype::decentralized;
    if (name == "distributed") return Archetype::distributed;
    throw InvalidParams("unknown archetype: " + name);
}

std::string slot_address(int slot) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "0x%040x", static_cast<unsigned>(slot));
    return buf;
}

namespace {

double edge_value(Rng& rng) {
    // lognormal-ish token amounts so csv round-trips exercise real doubles
    return std::exp(rng.normal() * 1.2 + 2.0);
}

DailyGraph from_slot_edges(Day date, const std::vector<std::pair<int, int>>& slot_edges,
                           Rng& rng) {
    std::vector<WeightedEdge> edges;
    edges.reserve(slot_edges.size());
    for (const auto& [a, b] : slot_edges)
        edges.push_back({slot_address(a), slot_address(b), edge_value(rng)});
    return graph_from_edges(date, edges);
}

std::vector<std::pair<int, int>> pairing_model_regular(int n, int degree, Rng& rng) {
    constexpr int kMaxAttempts = 200;
    std::vector<int> stubs;
    stubs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(degree));
    for (int v = 0; v < n; ++v)
        for (int d = 0; d < degree; ++d) stubs.push_back(v);

    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        rng.shuffle(stubs);
        std::set<std::pair<int, int>> seen;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            int a = stubs[i], b = stubs[i + 1];
            if (a == b) {
                ok = false;
                break;
            }
            if (a > b) std::swap(a, b);
            if (!seen.emplace(a, b).second) {
                ok = false;
                break;
            }
        }
        if (ok) return {seen.begin(), seen.end()};
    }
    throw RewireFailure("stub pairing produced no simple graph in 200 attempts");
}

}  // namespace

DailyGraph gen_archetype(const GeneratorSpec& spec) {
    Rng rng(spec.seed);
    std::vector<std::pair<int, int>> slot_edges;

    switch (spec.archetype) {
        case Archetype::centralized: {
            if (spec.n_nodes < 2) throw InvalidParams("star needs at least 2 nodes");
            for (int i = 1; i < spec.n_nodes; ++i) slot_edges.emplace_back(0, i);
            break;
        }
        case Archetype::decentralized: {
            const int hubs = spec.n_hubs;
            if (hubs < 2) throw InvalidParams("decentralized needs at least 2 hubs");
            int leaves;
            if (spec.per_hub > 0) {
                leaves = hubs * spec.per_hub;
            } else {
                if (spec.n_nodes <= hubs)
                    throw InvalidParams("n_nodes must exceed n_hubs");
                leaves = spec.n_nodes - hubs;
            }
            for (int i = 0; i < hubs; ++i)
                for (int j = i + 1; j < hubs; ++j) slot_edges.emplace_back(i, j);
            for (int l = 0; l < leaves; ++l)
                slot_edges.emplace_back(l % hubs, hubs + l);
            break;
        }
        case Archetype::distributed: {
            const int n = spec.n_nodes;
            const int d = spec.regular_degree;
            if (d < 1 || d >= n) throw InvalidParams("regular degree out of range");
            if ((static_cast<long long>(n) * d) % 2 != 0)
                throw InvalidParams("n * degree must be even");
            slot_edges = pairing_model_regular(n, d, rng);
            break;
        }
    }
    return from_slot_edges(spec.date, slot_edges, rng);
}

DailyGraph gen_planted_cp(int n_core, int n_periph, double p_cc, double p_cp, double p_pp,
                          std::uint64_t seed, Day date) {
    if (n_core < 1 || n_periph < 0 || n_core + n_periph < 2)
        throw InvalidParams("block sizes must allow at least 2 nodes");
    for (double p : {p_cc, p_cp, p_pp})
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidParams("probabilities must lie in [0,1]");
    if (p_cc < p_cp || p_cp < p_pp)
        throw InvalidParams("require p_cc >= p_cp >= p_pp");

    Rng rng(seed);
    const int n = n_core + n_periph;
    std::vector<std::pair<int, int>> slot_edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double p = j < n_core ? p_cc : (i < n_core ? p_cp : p_pp);
            if (rng.next_double() < p) slot_edges.emplace_back(i, j);
        }
    }
    return from_slot_edges(date, slot_edges, rng);
}

std::vector<TransferRecord> transfers_from_graph(const DailyGraph& g) {
    std::vector<TransferRecord> out;
    out.reserve(g.edges.size());
    const UnixTime day_start = static_cast<UnixTime>(g.date) * seconds_per_day;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        TransferRecord rec;
        rec.from_address = g.nodes[static_cast<std::size_t>(g.edges[i].first)];
        rec.to_address = g.nodes[static_cast<std::size_t>(g.edges[i].second)];
        rec.value = g.edge_weights[i];
        rec.timestamp = day_start + static_cast<UnixTime>(i);
        out.push_back(std::move(rec));
    }
    return out;
}

namespace {

double lerp(double a, double b, double t) { return a + (b - a) * t; }

}  // namespace

TrajectoryResult gen_trajectory(int days, const TrajectorySchedule& schedule,
                                std::uint64_t seed) {
    if (days < 60) throw InvalidParams("trajectory needs at least 60 days");
    const int n = schedule.n_nodes;
    if (n < 60) throw InvalidParams("trajectory needs at least 60 node slots");
    const int peak = schedule.peak_day < 0 ? days / 2 : schedule.peak_day;
    if (peak < 1 || peak > days - 1) throw InvalidParams("peak day outside the run");
    if (!(schedule.noise_sigma >= 0.0)) throw InvalidParams("noise sigma must be >= 0");
    if (!std::isfinite(schedule.coupling)) throw InvalidParams("coupling must be finite");

    TrajectoryResult out;
    out.graphs.reserve(static_cast<std::size_t>(days));
    out.hub_addresses = {slot_address(0), slot_address(1)};

    for (int slot = 0; slot < std::min(n, 50); ++slot) {
        LabelMap::Entry entry;
        entry.kind = slot % 2 == 0 ? AccountKind::eoa : AccountKind::ca;
        if (slot < 2) entry.tag = "persistent-hub";
        out.labels.entries.emplace(slot_address(slot), entry);
    }

    for (int t = 0; t < days; ++t) {
        const double tau = t <= peak
                               ? static_cast<double>(t) / peak
                               : static_cast<double>(days - 1 - t) / (days - 1 - peak);
        const int n_blocks = static_cast<int>(std::lround(lerp(3.0, 20.0, tau)));
        const double alpha = lerp(1.2, 0.0, tau);  // block-size skew

        // block sizes proportional to exp(-alpha * i), floored at 3, with the
        // remainder folded into block 0 so it stays the largest
        std::vector<int> sizes(static_cast<std::size_t>(n_blocks));
        double wsum = 0.0;
        for (int b = 0; b < n_blocks; ++b) wsum += std::exp(-alpha * b);
        int assigned = 0;
        for (int b = 0; b < n_blocks; ++b) {
            const int s = std::max(
                3, static_cast<int>(std::lround(n * std::exp(-alpha * b) / wsum)));
            sizes[static_cast<std::size_t>(b)] = s;
            assigned += s;
        }
        sizes[0] += n - assigned;
        if (sizes[0] < 3) {
            // skew plus flooring can overdraw the budget on tiny n; rebalance
            const int deficit = 3 - sizes[0];
            sizes[0] = 3;
            sizes.back() = std::max(3, sizes.back() - deficit);
        }

        Rng rng(derive_seed(seed, 0x74720000ULL + static_cast<std::uint64_t>(t)));
        std::vector<int> rotating;
        rotating.reserve(static_cast<std::size_t>(n) - 2);
        for (int s = 2; s < n; ++s) rotating.push_back(s);
        rng.shuffle(rotating);

        std::vector<std::pair<int, int>> slot_edges;
        std::vector<double> weights;
        std::size_t next_rotating = 0;
        for (int b = 0; b < n_blocks; ++b) {
            const int s = sizes[static_cast<std::size_t>(b)];
            std::vector<int> members;
            members.reserve(static_cast<std::size_t>(s));
            if (b == 0) {
                members.push_back(0);
                members.push_back(1);
            }
            while (static_cast<int>(members.size()) < s &&
                   next_rotating < rotating.size())
                members.push_back(rotating[next_rotating++]);

            const int m_cnt = static_cast<int>(members.size());
            if (m_cnt < 2) continue;
            const int core = std::max(b == 0 ? 2 : 1,
                                      static_cast<int>(std::lround(0.1 * m_cnt)));
            const double uniform_p = std::min(1.0, 3.0 / m_cnt);
            const double p_cc = 0.9;
            const double p_cp = lerp(0.9, uniform_p, tau);
            const double p_pp = lerp(0.0, uniform_p, tau);

            const std::size_t edges_before = slot_edges.size();
            for (int i = 0; i < m_cnt; ++i) {
                for (int j = i + 1; j < m_cnt; ++j) {
                    double p = j < core ? p_cc : (i < core ? p_cp : p_pp);
                    // the persistent hubs keep their spokes at full strength so
                    // they stay detectable cores across the whole trajectory
                    if (b == 0 && i < 2) p = p_cc;
                    if (rng.next_double() < p) {
                        slot_edges.emplace_back(members[static_cast<std::size_t>(i)],
                                                members[static_cast<std::size_t>(j)]);
                        weights.push_back(edge_value(rng));
                    }
                }
            }
            if (slot_edges.size() == edges_before) {
                // keep every block represented even if sampling came up empty
                slot_edges.emplace_back(members[0], members[1]);
                weights.push_back(1.0);
            }
        }

        std::vector<WeightedEdge> edges;
        edges.reserve(slot_edges.size());
        for (std::size_t i = 0; i < slot_edges.size(); ++i)
            edges.push_back({slot_address(slot_edges[i].first),
                             slot_address(slot_edges[i].second), weights[i]});
        DailyGraph g = graph_from_edges(schedule.start_day + t, edges);
        auto day_rows = transfers_from_graph(g);
        out.transfers.insert(out.transfers.end(), day_rows.begin(), day_rows.end());
        out.graphs.push_back(std::move(g));
    }

    // the coupled regressor is the component count pushed through the same
    // pipeline the regression suite applies: daily change, min-max scale,
    // trailing 7-day mean
    std::vector<double> comp(static_cast<std::size_t>(days));
    for (int t = 0; t < days; ++t)
        comp[static_cast<std::size_t>(t)] =
            static_cast<double>(connected_components(out.graphs[static_cast<std::size_t>(t)]).count());
    out.coupled_regressor =
        moving_average(min_max_scale(apply_transform(comp, Transform::diff)), 7);

    Rng price_rng(derive_seed(seed, 0xec0ULL));
    std::vector<double> log_price(static_cast<std::size_t>(days));
    std::vector<double> rets(static_cast<std::size_t>(days - 1));
    log_price[0] = std::log(100.0);
    for (int t = 0; t + 1 < days; ++t) {
        const double r = out.coupled_regressor[static_cast<std::size_t>(t)];
        const double ret = (is_null(r) ? 0.0 : schedule.coupling * r) +
                           schedule.noise_sigma * price_rng.normal();
        rets[static_cast<std::size_t>(t)] = ret;
        log_price[static_cast<std::size_t>(t + 1)] = log_price[static_cast<std::size_t>(t)] + ret;
    }

    Rng tvl_rng(derive_seed(seed, 0xec1ULL));
    double log_tvl = std::log(1e9);
    out.econ.has_tvl = schedule.with_tvl;
    for (int t = 0; t < days; ++t) {
        EconPoint pt;
        pt.date = schedule.start_day + t;
        pt.price_usd = std::exp(log_price[static_cast<std::size_t>(t)]);
        if (t == 0) {
            pt.vty_day_ret_30d = 0.0;
        } else {
            const int lo = std::max(0, t - 30);
            std::vector<double> window(rets.begin() + lo, rets.begin() + t);
            pt.vty_day_ret_30d = population_std(window);
        }
        if (schedule.with_tvl) {
            pt.tvl_usd = std::exp(log_tvl);
            log_tvl += 0.01 * tvl_rng.normal();
        }
        out.econ.points.push_back(pt);
    }
    return out;
}

}  // namespace tokennet
