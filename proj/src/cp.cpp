#include "tokennet/cp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "tokennet/error.hpp"

namespace tokennet {

std::string to_string(CPLabel label) {
    return label == CPLabel::core ? "core" : "periphery";
}

int CPAssignment::core_count() const {
    return static_cast<int>(std::count(labels.begin(), labels.end(), CPLabel::core));
}

double pattern_pearson(std::int64_t n_dyads, std::int64_t n_edges, std::int64_t pattern_ones,
                       std::int64_t edges_on_ones) {
    // Correlation of two 0/1 vectors of length n_dyads from their joint
    // counts. Either vector constant means the correlation is undefined; the
    // assignment quality is 0 by convention in that case.
    if (n_edges == 0 || n_edges == n_dyads) return 0.0;
    if (pattern_ones == 0 || pattern_ones == n_dyads) return 0.0;
    const double num = static_cast<double>(n_dyads) * static_cast<double>(edges_on_ones) -
                       static_cast<double>(n_edges) * static_cast<double>(pattern_ones);
    const double var_a = static_cast<double>(n_edges) *
                         static_cast<double>(n_dyads - n_edges);
    const double var_p = static_cast<double>(pattern_ones) *
                         static_cast<double>(n_dyads - pattern_ones);
    return num / (std::sqrt(var_a) * std::sqrt(var_p));
}

namespace {

// Sufficient counts of an assignment: same-pair dyads that are not
// periphery-periphery (pattern ones) and edges landing on them.
struct PatternCounts {
    std::int64_t pattern_ones = 0;
    std::int64_t edges_on_ones = 0;
};

PatternCounts count_pattern(const DailyGraph& g, const CPAssignment& a) {
    PatternCounts pc;
    std::map<int, std::pair<std::int64_t, std::int64_t>> per_pair;  // pair -> (size, periphery)
    for (std::size_t v = 0; v < a.pair_id.size(); ++v) {
        auto& [size, peri] = per_pair[a.pair_id[v]];
        ++size;
        if (a.labels[v] == CPLabel::periphery) ++peri;
    }
    for (const auto& [pair, counts] : per_pair) {
        const auto [size, peri] = counts;
        pc.pattern_ones += size * (size - 1) / 2 - peri * (peri - 1) / 2;
    }
    for (const auto& [u, v] : g.edges) {
        if (a.pair_id[static_cast<std::size_t>(u)] != a.pair_id[static_cast<std::size_t>(v)])
            continue;
        if (a.labels[static_cast<std::size_t>(u)] == CPLabel::periphery &&
            a.labels[static_cast<std::size_t>(v)] == CPLabel::periphery)
            continue;
        ++pc.edges_on_ones;
    }
    return pc;
}

}  // namespace

double assignment_quality(const DailyGraph& g, const CPAssignment& a) {
    const std::int64_t n = g.num_nodes();
    const auto pc = count_pattern(g, a);
    return pattern_pearson(n * (n - 1) / 2, g.num_edges(), pc.pattern_ones, pc.edges_on_ones);
}

double km_quality(const DailyGraph& g, const CPAssignment& a) {
    const double two_m = 2.0 * g.num_edges();
    const auto pc = count_pattern(g, a);

    // Expected edges on pattern ones under the configuration model:
    // sum over same-pair dyads (i,j) with pattern 1 of d_i*d_j / (2m).
    std::map<int, std::pair<double, double>> deg_sums;  // pair -> (sum d, sum d^2) all
    std::map<int, std::pair<double, double>> peri_sums; // pair -> same over periphery
    for (std::size_t v = 0; v < a.pair_id.size(); ++v) {
        const double d = static_cast<double>(g.degree(static_cast<int>(v)));
        auto& [s1, s2] = deg_sums[a.pair_id[v]];
        s1 += d;
        s2 += d * d;
        if (a.labels[v] == CPLabel::periphery) {
            auto& [p1, p2] = peri_sums[a.pair_id[v]];
            p1 += d;
            p2 += d * d;
        }
    }
    double expected = 0.0;
    for (const auto& [pair, sums] : deg_sums) {
        const auto [s1, s2] = sums;
        double pair_term = (s1 * s1 - s2) / 2.0;
        if (auto it = peri_sums.find(pair); it != peri_sums.end()) {
            const auto [p1, p2] = it->second;
            pair_term -= (p1 * p1 - p2) / 2.0;
        }
        expected += pair_term;
    }
    return static_cast<double>(pc.edges_on_ones) - expected / two_m;
}

namespace {

// Closed-form quality of a single-pair assignment given only the core count
// and the number of periphery-periphery edges.
class BEQuality {
public:
    BEQuality(std::int64_t n, std::int64_t m) : n_(n), n_dyads_(n * (n - 1) / 2), m_(m) {}

    double operator()(std::int64_t core_cnt, std::int64_t peri_peri_edges) const {
        const std::int64_t peri = n_ - core_cnt;
        const std::int64_t ones = n_dyads_ - peri * (peri - 1) / 2;
        return pattern_pearson(n_dyads_, m_, ones, m_ - peri_peri_edges);
    }

private:
    std::int64_t n_;
    std::int64_t n_dyads_;
    std::int64_t m_;
};

struct BEState {
    std::vector<CPLabel> labels;
    std::vector<std::int64_t> peri_neighbors;  // per node, neighbors labeled periphery
    std::int64_t core_cnt = 0;
    std::int64_t peri_peri_edges = 0;
};

BEState init_be_state(const DailyGraph& g, Rng& rng) {
    const int n = g.num_nodes();
    BEState st;
    st.labels.resize(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        st.labels[static_cast<std::size_t>(v)] =
            rng.bernoulli(0.5) ? CPLabel::core : CPLabel::periphery;
        if (st.labels[static_cast<std::size_t>(v)] == CPLabel::core) ++st.core_cnt;
    }
    if (st.core_cnt == 0) {
        // promote the highest-degree node, ties to the lowest index
        int best = 0;
        for (int v = 1; v < n; ++v)
            if (g.degree(v) > g.degree(best)) best = v;
        st.labels[static_cast<std::size_t>(best)] = CPLabel::core;
        st.core_cnt = 1;
    } else if (st.core_cnt == n) {
        int best = 0;
        for (int v = 1; v < n; ++v)
            if (g.degree(v) < g.degree(best)) best = v;
        st.labels[static_cast<std::size_t>(best)] = CPLabel::periphery;
        --st.core_cnt;
    }
    st.peri_neighbors.assign(static_cast<std::size_t>(n), 0);
    for (const auto& [u, v] : g.edges) {
        const bool up = st.labels[static_cast<std::size_t>(u)] == CPLabel::periphery;
        const bool vp = st.labels[static_cast<std::size_t>(v)] == CPLabel::periphery;
        if (vp) ++st.peri_neighbors[static_cast<std::size_t>(u)];
        if (up) ++st.peri_neighbors[static_cast<std::size_t>(v)];
        if (up && vp) ++st.peri_peri_edges;
    }
    return st;
}

// Greedy single-label switching: apply the flip with the largest strict
// quality increase until none improves. Ties go to the lowest node index.
double be_greedy(const DailyGraph& g, BEState& st, const BEQuality& quality) {
    const int n = g.num_nodes();
    double cur = quality(st.core_cnt, st.peri_peri_edges);
    for (;;) {
        double best = cur;
        int best_v = -1;
        for (int v = 0; v < n; ++v) {
            const bool is_core = st.labels[static_cast<std::size_t>(v)] == CPLabel::core;
            double cand;
            if (is_core) {
                if (st.core_cnt == 1) continue;
                cand = quality(st.core_cnt - 1,
                               st.peri_peri_edges + st.peri_neighbors[static_cast<std::size_t>(v)]);
            } else {
                if (st.core_cnt == n - 1) continue;
                cand = quality(st.core_cnt + 1,
                               st.peri_peri_edges - st.peri_neighbors[static_cast<std::size_t>(v)]);
            }
            if (cand > best) {
                best = cand;
                best_v = v;
            }
        }
        if (best_v < 0) return cur;
        const bool was_core = st.labels[static_cast<std::size_t>(best_v)] == CPLabel::core;
        if (was_core) {
            st.labels[static_cast<std::size_t>(best_v)] = CPLabel::periphery;
            --st.core_cnt;
            st.peri_peri_edges += st.peri_neighbors[static_cast<std::size_t>(best_v)];
            for (int u : g.adj[static_cast<std::size_t>(best_v)])
                ++st.peri_neighbors[static_cast<std::size_t>(u)];
        } else {
            st.labels[static_cast<std::size_t>(best_v)] = CPLabel::core;
            ++st.core_cnt;
            st.peri_peri_edges -= st.peri_neighbors[static_cast<std::size_t>(best_v)];
            for (int u : g.adj[static_cast<std::size_t>(best_v)])
                --st.peri_neighbors[static_cast<std::size_t>(u)];
        }
        cur = best;
    }
}

}  // namespace

CPAssignment be_detect(const DailyGraph& g, std::uint64_t seed, int restarts) {
    const int n = g.num_nodes();
    if (n < 3) throw DegenerateGraph("single-pair detection needs at least 3 nodes");
    if (restarts < 1) throw InvalidParams("restarts must be positive");

    BEQuality quality(n, g.num_edges());

    CPAssignment best;
    best.quality = -2.0;  // below any correlation
    for (int r = 0; r < restarts; ++r) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        BEState st = init_be_state(g, rng);
        const double rho = be_greedy(g, st, quality);
        if (rho > best.quality) {
            best.quality = rho;
            best.labels = st.labels;
        }
    }
    best.pair_id.assign(static_cast<std::size_t>(n), 0);
    return best;
}

namespace {

// Mutable state for multi-pair label switching. Pair ids grow as singleton
// extractions allocate fresh pairs; relabeling happens once at the end.
struct KMState {
    std::vector<int> pair_of;
    std::vector<CPLabel> label;
    std::vector<double> d_all;   // summed degree per pair
    std::vector<double> d_core;  // summed degree of core members per pair
    std::vector<int> pop;
};

constexpr double kKMTol = 1e-12;

int km_sweep(const DailyGraph& g, KMState& st) {
    const int n = g.num_nodes();
    const double two_m = 2.0 * g.num_edges();
    int moves = 0;
    std::map<int, std::pair<double, double>> agg;  // pair -> (neighbors, core neighbors)
    for (int v = 0; v < n; ++v) {
        const double dv = static_cast<double>(g.degree(v));
        const int old_pair = st.pair_of[static_cast<std::size_t>(v)];
        const CPLabel old_label = st.label[static_cast<std::size_t>(v)];

        // remove v so every candidate, including staying put, is scored
        // against the same remainder
        st.d_all[static_cast<std::size_t>(old_pair)] -= dv;
        if (old_label == CPLabel::core) st.d_core[static_cast<std::size_t>(old_pair)] -= dv;
        --st.pop[static_cast<std::size_t>(old_pair)];

        agg.clear();
        for (int u : g.adj[static_cast<std::size_t>(v)]) {
            auto& [all, core] = agg[st.pair_of[static_cast<std::size_t>(u)]];
            all += 1.0;
            if (st.label[static_cast<std::size_t>(u)] == CPLabel::core) core += 1.0;
        }
        agg.emplace(old_pair, std::pair<double, double>{0.0, 0.0});  // no-op if present

        const auto contribution = [&](int pair, CPLabel lab, double k_all, double k_core) {
            if (lab == CPLabel::core)
                return k_all - dv * st.d_all[static_cast<std::size_t>(pair)] / two_m;
            return k_core - dv * st.d_core[static_cast<std::size_t>(pair)] / two_m;
        };

        double baseline;
        {
            const auto it = agg.find(old_pair);
            baseline = contribution(old_pair, old_label, it->second.first, it->second.second);
        }
        double best_gain = baseline + kKMTol;
        int best_pair = old_pair;
        CPLabel best_label = old_label;
        bool improved = false;
        for (const auto& [pair, counts] : agg) {
            for (CPLabel lab : {CPLabel::core, CPLabel::periphery}) {
                const double gain = contribution(pair, lab, counts.first, counts.second);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_pair = pair;
                    best_label = lab;
                    improved = true;
                }
            }
        }
        // extraction into a fresh singleton pair scores exactly 0
        if (0.0 > best_gain && st.pop[static_cast<std::size_t>(old_pair)] > 0) {
            best_pair = static_cast<int>(st.d_all.size());
            best_label = CPLabel::core;
            improved = true;
            st.d_all.push_back(0.0);
            st.d_core.push_back(0.0);
            st.pop.push_back(0);
        }

        st.pair_of[static_cast<std::size_t>(v)] = best_pair;
        st.label[static_cast<std::size_t>(v)] = best_label;
        st.d_all[static_cast<std::size_t>(best_pair)] += dv;
        if (best_label == CPLabel::core) st.d_core[static_cast<std::size_t>(best_pair)] += dv;
        ++st.pop[static_cast<std::size_t>(best_pair)];
        if (improved) ++moves;
    }
    return moves;
}

CPAssignment km_run(const DailyGraph& g, KMState st) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        if (km_sweep(g, st) == 0) break;
    }
    CPAssignment a;
    a.pair_id = st.pair_of;
    a.labels = st.label;
    return a;
}

// Relabel pairs to consecutive ids ordered by descending size, ties broken
// by the smallest member node.
void canonicalize_pairs(CPAssignment& a) {
    std::map<int, std::pair<int, int>> info;  // old id -> (size, smallest node)
    for (std::size_t v = 0; v < a.pair_id.size(); ++v) {
        auto [it, inserted] =
            info.emplace(a.pair_id[v], std::pair<int, int>{0, static_cast<int>(v)});
        ++it->second.first;
    }
    std::vector<std::tuple<int, int, int>> order;  // (-size, smallest node, old id)
    order.reserve(info.size());
    for (const auto& [id, meta] : info) order.emplace_back(-meta.first, meta.second, id);
    std::sort(order.begin(), order.end());
    std::map<int, int> remap;
    for (std::size_t i = 0; i < order.size(); ++i)
        remap[std::get<2>(order[i])] = static_cast<int>(i);
    for (int& p : a.pair_id) p = remap[p];
}

// Guarantee at least one core and one periphery node overall, choosing the
// flip that costs the least multi-pair quality (ties to the lowest index).
void enforce_mixed_labels(const DailyGraph& g, CPAssignment& a) {
    const int n = g.num_nodes();
    const bool any_core = std::any_of(a.labels.begin(), a.labels.end(),
                                      [](CPLabel l) { return l == CPLabel::core; });
    const bool any_peri = std::any_of(a.labels.begin(), a.labels.end(),
                                      [](CPLabel l) { return l == CPLabel::periphery; });
    if (any_core && any_peri) return;
    const CPLabel target = any_core ? CPLabel::periphery : CPLabel::core;
    int best_v = 0;
    double best_q = -1e300;
    for (int v = 0; v < n; ++v) {
        CPAssignment probe = a;
        probe.labels[static_cast<std::size_t>(v)] = target;
        const double q = km_quality(g, probe);
        if (q > best_q) {
            best_q = q;
            best_v = v;
        }
    }
    a.labels[static_cast<std::size_t>(best_v)] = target;
}

}  // namespace

CPAssignment km_multi_detect(const DailyGraph& g, std::uint64_t seed) {
    const int n = g.num_nodes();
    if (n < 3) throw DegenerateGraph("multi-pair detection needs at least 3 nodes");

    // start 1: every node its own all-core pair
    KMState singleton;
    singleton.pair_of.resize(static_cast<std::size_t>(n));
    singleton.label.assign(static_cast<std::size_t>(n), CPLabel::core);
    singleton.d_all.resize(static_cast<std::size_t>(n));
    singleton.d_core.resize(static_cast<std::size_t>(n));
    singleton.pop.assign(static_cast<std::size_t>(n), 1);
    for (int v = 0; v < n; ++v) {
        singleton.pair_of[static_cast<std::size_t>(v)] = v;
        singleton.d_all[static_cast<std::size_t>(v)] = static_cast<double>(g.degree(v));
        singleton.d_core[static_cast<std::size_t>(v)] = static_cast<double>(g.degree(v));
    }
    CPAssignment from_singleton = km_run(g, std::move(singleton));

    // start 2: the single-pair assignment embedded as pair 0, so the result
    // never scores below it
    const CPAssignment be = be_detect(g, derive_seed(seed, 0xbe), 10);
    KMState seeded;
    seeded.pair_of.assign(static_cast<std::size_t>(n), 0);
    seeded.label = be.labels;
    seeded.d_all.assign(1, 0.0);
    seeded.d_core.assign(1, 0.0);
    seeded.pop.assign(1, n);
    for (int v = 0; v < n; ++v) {
        const double d = static_cast<double>(g.degree(v));
        seeded.d_all[0] += d;
        if (be.labels[static_cast<std::size_t>(v)] == CPLabel::core) seeded.d_core[0] += d;
    }
    CPAssignment from_be = km_run(g, std::move(seeded));

    // the untouched single-pair assignment is kept as a candidate so the
    // reported quality never drops below it: label switching maximizes the
    // pair-wise objective, which is not monotone in the pattern correlation
    CPAssignment be_embedded;
    be_embedded.labels = be.labels;
    be_embedded.pair_id.assign(static_cast<std::size_t>(n), 0);

    CPAssignment best;
    best.quality = -2.0;
    for (CPAssignment* cand : {&from_singleton, &from_be, &be_embedded}) {
        enforce_mixed_labels(g, *cand);
        canonicalize_pairs(*cand);
        cand->quality = assignment_quality(g, *cand);
        if (cand->quality > best.quality) best = std::move(*cand);
    }
    return best;
}

DailyGraph rewire_degree_preserving(const DailyGraph& g, Rng& rng) {
    const std::int64_t e = g.num_edges();
    if (e < 2) throw RewireFailure("need at least 2 edges to swap");
    const std::int64_t n = g.num_nodes();

    auto key = [n](int u, int v) {
        const auto [lo, hi] = std::minmax(u, v);
        return static_cast<std::int64_t>(lo) * n + hi;
    };
    std::vector<std::pair<int, int>> edges = g.edges;
    std::unordered_set<std::int64_t> present;
    present.reserve(static_cast<std::size_t>(e) * 2);
    for (const auto& [u, v] : edges) present.insert(key(u, v));

    const std::int64_t attempts = 10 * e;
    for (std::int64_t t = 0; t < attempts; ++t) {
        const auto i = static_cast<std::size_t>(rng.uniform(static_cast<std::uint64_t>(e)));
        const auto j = static_cast<std::size_t>(rng.uniform(static_cast<std::uint64_t>(e)));
        if (i == j) continue;
        auto [a, b] = edges[i];
        auto [c, d] = edges[j];
        if (rng.bernoulli(0.5)) std::swap(c, d);
        // proposed swap: (a,b),(c,d) -> (a,d),(c,b)
        if (a == d || c == b) continue;
        const std::int64_t k1 = key(a, d);
        const std::int64_t k2 = key(c, b);
        if (k1 == k2 || present.count(k1) || present.count(k2)) continue;
        present.erase(key(a, b));
        present.erase(key(c, d));
        present.insert(k1);
        present.insert(k2);
        edges[i] = std::minmax(a, d);
        edges[j] = std::minmax(c, b);
    }

    DailyGraph out;
    out.date = g.date;
    out.nodes = g.nodes;
    std::sort(edges.begin(), edges.end());
    out.edges = std::move(edges);
    out.edge_weights = g.edge_weights;  // weight multiset kept, order positional
    out.adj.assign(g.nodes.size(), {});
    for (const auto& [u, v] : out.edges) {
        out.adj[static_cast<std::size_t>(u)].push_back(v);
        out.adj[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& nbrs : out.adj) std::sort(nbrs.begin(), nbrs.end());
    return out;
}

CPTestResult qs_significance(const DailyGraph& g, CPAlgorithm algorithm, int n_rand,
                             std::uint64_t seed, int restarts) {
    if (n_rand < 19) throw InvalidParams("n_rand must be at least 19");
    if (g.num_edges() < 2) throw RewireFailure("need at least 2 edges to swap");

    const auto detect = [&](const DailyGraph& target, std::uint64_t s) {
        return algorithm == CPAlgorithm::borgatti_everett ? be_detect(target, s, restarts)
                                                          : km_multi_detect(target, s);
    };

    CPTestResult res;
    res.n_randomizations = n_rand;
    res.observed = detect(g, seed);
    res.observed_quality = res.observed.quality;

    res.null_qualities.assign(static_cast<std::size_t>(n_rand), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n_rand; ++i) {
        const std::uint64_t rep_seed = seed + static_cast<std::uint64_t>(i);
        Rng rng(rep_seed);
        const DailyGraph null_g = rewire_degree_preserving(g, rng);
        res.null_qualities[static_cast<std::size_t>(i)] = detect(null_g, rep_seed).quality;
    }

    int at_least = 0;
    for (double q : res.null_qualities)
        if (q >= res.observed_quality) ++at_least;
    res.p_value = (1.0 + at_least) / (1.0 + n_rand);
    res.significant = res.p_value < 0.05;
    return res;
}

CoreStats core_stats(const DailyGraph& g, const CPAssignment& a) {
    CoreStats s;
    std::int64_t degree_sum = 0;
    for (int v = 0; v < g.num_nodes(); ++v) {
        if (a.labels[static_cast<std::size_t>(v)] == CPLabel::core) {
            ++s.core_cnt;
            degree_sum += g.degree(v);
        }
    }
    if (s.core_cnt > 0)
        s.avg_core_neighbor = static_cast<double>(degree_sum) / s.core_cnt;
    return s;
}

DailyGraph remove_cores(const DailyGraph& g, const CPAssignment& a) {
    std::vector<WeightedEdge> kept;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto [u, v] = g.edges[e];
        if (a.labels[static_cast<std::size_t>(u)] == CPLabel::periphery &&
            a.labels[static_cast<std::size_t>(v)] == CPLabel::periphery) {
            kept.push_back({g.nodes[static_cast<std::size_t>(u)],
                            g.nodes[static_cast<std::size_t>(v)], g.edge_weights[e]});
        }
    }
    if (kept.empty()) throw EmptyCounterfactual();
    return graph_from_edges(g.date, kept);
}

}  // namespace tokennet
