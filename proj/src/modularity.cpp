#include "tokennet/modularity.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <queue>

#include "tokennet/error.hpp"
#include "tokennet/rng.hpp"

namespace tokennet {

namespace {

// Internal weighted multigraph used between aggregation levels. Edge weights
// count original edges, so all bookkeeping stays in integers and the score is
// reproducible regardless of visit order.
struct LevelGraph {
    int n = 0;
    std::vector<std::map<int, std::int64_t>> w;  // off-diagonal weights
    std::vector<std::int64_t> internal;          // original edges inside the super-node
    std::vector<std::int64_t> strength;          // sum of incident weight + 2*internal
};

LevelGraph level_from_daily(const DailyGraph& g) {
    LevelGraph lg;
    lg.n = g.num_nodes();
    lg.w.resize(static_cast<std::size_t>(lg.n));
    lg.internal.assign(static_cast<std::size_t>(lg.n), 0);
    lg.strength.assign(static_cast<std::size_t>(lg.n), 0);
    for (const auto& [u, v] : g.edges) {
        lg.w[static_cast<std::size_t>(u)][v] = 1;
        lg.w[static_cast<std::size_t>(v)][u] = 1;
        ++lg.strength[static_cast<std::size_t>(u)];
        ++lg.strength[static_cast<std::size_t>(v)];
    }
    return lg;
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<int>& comm, int n_comm) {
    LevelGraph next;
    next.n = n_comm;
    next.w.resize(static_cast<std::size_t>(n_comm));
    next.internal.assign(static_cast<std::size_t>(n_comm), 0);
    next.strength.assign(static_cast<std::size_t>(n_comm), 0);
    for (int u = 0; u < lg.n; ++u) {
        const int cu = comm[static_cast<std::size_t>(u)];
        next.internal[static_cast<std::size_t>(cu)] += lg.internal[static_cast<std::size_t>(u)];
        for (const auto& [v, weight] : lg.w[static_cast<std::size_t>(u)]) {
            const int cv = comm[static_cast<std::size_t>(v)];
            if (cu == cv) {
                if (u < v) next.internal[static_cast<std::size_t>(cu)] += weight;
            } else {
                next.w[static_cast<std::size_t>(cu)][cv] += weight;
            }
        }
    }
    for (int c = 0; c < n_comm; ++c) {
        std::int64_t s = 2 * next.internal[static_cast<std::size_t>(c)];
        for (const auto& [v, weight] : next.w[static_cast<std::size_t>(c)]) s += weight;
        next.strength[static_cast<std::size_t>(c)] = s;
    }
    return next;
}

// Relabels communities to consecutive ids in order of first appearance.
int canonicalize(std::vector<int>& comm) {
    std::map<int, int> remap;
    int next_id = 0;
    for (int& c : comm) {
        auto [it, inserted] = remap.emplace(c, next_id);
        if (inserted) ++next_id;
        c = it->second;
    }
    return next_id;
}

constexpr double kMoveTol = 1e-12;

// One full sweep of single-node moves over `order`; returns number of moves.
// dsum[c] tracks the summed strength of community c and is kept current.
int move_sweep(const LevelGraph& lg, const std::vector<int>& order, std::vector<int>& comm,
               std::vector<std::int64_t>& dsum, std::vector<std::int64_t>& comm_pop,
               int& next_free, double m) {
    int moves = 0;
    std::map<int, std::int64_t> k;  // community -> weight from the moving node
    for (int u : order) {
        const int a = comm[static_cast<std::size_t>(u)];
        const double su = static_cast<double>(lg.strength[static_cast<std::size_t>(u)]);
        if (su == 0.0) continue;
        k.clear();
        for (const auto& [v, weight] : lg.w[static_cast<std::size_t>(u)])
            k[comm[static_cast<std::size_t>(v)]] += weight;
        const double k_a = static_cast<double>(k.count(a) ? k[a] : 0);
        const double d_a = static_cast<double>(dsum[static_cast<std::size_t>(a)]);

        double best_dq = kMoveTol;
        int best_c = -1;
        for (const auto& [c, kw] : k) {
            if (c == a) continue;
            const double d_b = static_cast<double>(dsum[static_cast<std::size_t>(c)]);
            const double dq = (static_cast<double>(kw) - k_a) / m -
                              su * (d_b - d_a + su) / (2.0 * m * m);
            if (dq > best_dq) {
                best_dq = dq;
                best_c = c;
            }
        }
        // extraction into a fresh singleton, considered last on ties
        if (comm_pop[static_cast<std::size_t>(a)] > 1) {
            const double dq = -k_a / m - su * (su - d_a) / (2.0 * m * m);
            if (dq > best_dq) {
                best_dq = dq;
                best_c = next_free;
            }
        }
        if (best_c < 0) continue;
        if (best_c == next_free) {
            dsum.push_back(0);
            comm_pop.push_back(0);
            ++next_free;
        }
        comm[static_cast<std::size_t>(u)] = best_c;
        dsum[static_cast<std::size_t>(a)] -= lg.strength[static_cast<std::size_t>(u)];
        dsum[static_cast<std::size_t>(best_c)] += lg.strength[static_cast<std::size_t>(u)];
        --comm_pop[static_cast<std::size_t>(a)];
        ++comm_pop[static_cast<std::size_t>(best_c)];
        ++moves;
    }
    return moves;
}

int refine(const LevelGraph& lg, std::vector<int>& comm, double m,
           const std::vector<int>& order) {
    const int n_comm = canonicalize(comm);
    std::vector<std::int64_t> dsum(static_cast<std::size_t>(n_comm), 0);
    std::vector<std::int64_t> comm_pop(static_cast<std::size_t>(n_comm), 0);
    for (int u = 0; u < lg.n; ++u) {
        dsum[static_cast<std::size_t>(comm[static_cast<std::size_t>(u)])] +=
            lg.strength[static_cast<std::size_t>(u)];
        ++comm_pop[static_cast<std::size_t>(comm[static_cast<std::size_t>(u)])];
    }
    int next_free = n_comm;
    int total_moves = 0;
    for (int sweep = 0; sweep < 200; ++sweep) {
        const int moves = move_sweep(lg, order, comm, dsum, comm_pop, next_free, m);
        total_moves += moves;
        if (moves == 0) break;
    }
    canonicalize(comm);
    return total_moves;
}

struct MergeCand {
    double dq;
    int a, b;
    std::uint64_t va, vb;
};

struct MergeCandWorse {
    bool operator()(const MergeCand& x, const MergeCand& y) const {
        if (x.dq != y.dq) return x.dq < y.dq;
        if (x.a != y.a) return x.a > y.a;
        return x.b > y.b;
    }
};

// Agglomerative pass: repeatedly merge the community pair with the highest
// positive modularity gain. Returns the number of merges performed.
int merge_pass(const LevelGraph& lg, std::vector<int>& comm, double m) {
    const int n_comm = canonicalize(comm);
    std::vector<std::map<int, std::int64_t>> links(static_cast<std::size_t>(n_comm));
    std::vector<std::int64_t> dsum(static_cast<std::size_t>(n_comm), 0);
    for (int u = 0; u < lg.n; ++u) {
        const int cu = comm[static_cast<std::size_t>(u)];
        dsum[static_cast<std::size_t>(cu)] += lg.strength[static_cast<std::size_t>(u)];
        for (const auto& [v, weight] : lg.w[static_cast<std::size_t>(u)]) {
            const int cv = comm[static_cast<std::size_t>(v)];
            if (cu != cv) links[static_cast<std::size_t>(cu)][cv] += weight;
        }
    }
    std::vector<bool> alive(static_cast<std::size_t>(n_comm), true);
    std::vector<std::uint64_t> version(static_cast<std::size_t>(n_comm), 0);
    std::vector<int> parent(static_cast<std::size_t>(n_comm));
    for (int c = 0; c < n_comm; ++c) parent[static_cast<std::size_t>(c)] = c;

    const auto gain = [&](int a, int b, std::int64_t e_ab) {
        return static_cast<double>(e_ab) / m -
               static_cast<double>(dsum[static_cast<std::size_t>(a)]) *
                   static_cast<double>(dsum[static_cast<std::size_t>(b)]) / (2.0 * m * m);
    };

    std::priority_queue<MergeCand, std::vector<MergeCand>, MergeCandWorse> heap;
    for (int a = 0; a < n_comm; ++a) {
        for (const auto& [b, e_ab] : links[static_cast<std::size_t>(a)]) {
            if (a < b)
                heap.push({gain(a, b, e_ab), a, b, version[static_cast<std::size_t>(a)],
                           version[static_cast<std::size_t>(b)]});
        }
    }

    int merges = 0;
    while (!heap.empty()) {
        const MergeCand top = heap.top();
        heap.pop();
        if (!alive[static_cast<std::size_t>(top.a)] || !alive[static_cast<std::size_t>(top.b)])
            continue;
        if (version[static_cast<std::size_t>(top.a)] != top.va ||
            version[static_cast<std::size_t>(top.b)] != top.vb)
            continue;
        if (top.dq <= 0.0) break;

        const int a = top.a;  // survivor (a < b by construction)
        const int b = top.b;
        alive[static_cast<std::size_t>(b)] = false;
        parent[static_cast<std::size_t>(b)] = a;
        ++version[static_cast<std::size_t>(a)];
        dsum[static_cast<std::size_t>(a)] += dsum[static_cast<std::size_t>(b)];
        links[static_cast<std::size_t>(a)].erase(b);
        for (const auto& [x, weight] : links[static_cast<std::size_t>(b)]) {
            if (x == a) continue;
            links[static_cast<std::size_t>(a)][x] += weight;
            auto& lx = links[static_cast<std::size_t>(x)];
            lx.erase(b);
            lx[a] = links[static_cast<std::size_t>(a)][x];
        }
        links[static_cast<std::size_t>(b)].clear();
        for (const auto& [x, weight] : links[static_cast<std::size_t>(a)]) {
            const auto [lo, hi] = std::minmax(a, x);
            heap.push({gain(lo, hi, weight), lo, hi, version[static_cast<std::size_t>(lo)],
                       version[static_cast<std::size_t>(hi)]});
        }
        ++merges;
    }

    const auto root = [&](int c) {
        while (parent[static_cast<std::size_t>(c)] != c) c = parent[static_cast<std::size_t>(c)];
        return c;
    };
    for (int& c : comm) c = root(c);
    canonicalize(comm);
    return merges;
}

// Exhaustive search over all partitions in restricted-growth order, keeping
// the first one attaining the maximum Q. Bell(10) is ~116k, so this stays
// well under the cost of a single heuristic run on a real daily graph.
constexpr int kExactLimit = 10;

CommunityPartition exact_partition(const DailyGraph& g) {
    const int n = g.num_nodes();
    const double m = static_cast<double>(g.num_edges());

    std::vector<int> comm(static_cast<std::size_t>(n), 0);
    std::vector<std::int64_t> inside;   // original edges within each community
    std::vector<std::int64_t> dsum;     // summed degree per community

    CommunityPartition best;
    best.q = -2.0;

    const auto score = [&] {
        double q = 0.0;
        for (std::size_t c = 0; c < dsum.size(); ++c) {
            const double frac = static_cast<double>(dsum[c]) / (2.0 * m);
            q += static_cast<double>(inside[c]) / m - frac * frac;
        }
        return q;
    };

    std::function<void(int, int)> walk = [&](int v, int used) {
        if (v == n) {
            const double q = score();
            if (q > best.q) {
                best.q = q;
                best.assignments = comm;
                best.community_count = used;
            }
            return;
        }
        for (int c = 0; c <= used; ++c) {
            if (c == used) {
                inside.push_back(0);
                dsum.push_back(0);
            }
            std::int64_t gained = 0;
            for (int u : g.adj[static_cast<std::size_t>(v)])
                if (u < v && comm[static_cast<std::size_t>(u)] == c) ++gained;
            comm[static_cast<std::size_t>(v)] = c;
            inside[static_cast<std::size_t>(c)] += gained;
            dsum[static_cast<std::size_t>(c)] += g.degree(v);
            walk(v + 1, std::max(used, c + 1));
            inside[static_cast<std::size_t>(c)] -= gained;
            dsum[static_cast<std::size_t>(c)] -= g.degree(v);
            if (c == used) {
                inside.pop_back();
                dsum.pop_back();
            }
        }
    };
    walk(0, 0);
    return best;
}

}  // namespace

double modularity_score(const DailyGraph& g, const std::vector<int>& assignments) {
    if (assignments.size() != static_cast<std::size_t>(g.num_nodes()))
        throw InvalidParams("assignment length does not match node count");
    const double m = static_cast<double>(g.num_edges());
    int n_comm = 0;
    for (int c : assignments) n_comm = std::max(n_comm, c + 1);
    std::vector<std::int64_t> inside(static_cast<std::size_t>(n_comm), 0);
    std::vector<std::int64_t> dsum(static_cast<std::size_t>(n_comm), 0);
    for (const auto& [u, v] : g.edges) {
        const int cu = assignments[static_cast<std::size_t>(u)];
        const int cv = assignments[static_cast<std::size_t>(v)];
        if (cu == cv) ++inside[static_cast<std::size_t>(cu)];
        ++dsum[static_cast<std::size_t>(cu)];
        ++dsum[static_cast<std::size_t>(cv)];
    }
    double q = 0.0;
    for (int c = 0; c < n_comm; ++c) {
        const double frac = static_cast<double>(dsum[static_cast<std::size_t>(c)]) / (2.0 * m);
        q += static_cast<double>(inside[static_cast<std::size_t>(c)]) / m - frac * frac;
    }
    return q;
}

CommunityPartition detect_communities(const DailyGraph& g, std::uint64_t seed,
                                      ModularityMethod method) {
    const int n = g.num_nodes();
    if (n == 0 || g.num_edges() == 0) throw DegenerateGraph("community detection needs edges");
    const double m = static_cast<double>(g.num_edges());

    CommunityPartition out;
    out.assignments.resize(static_cast<std::size_t>(n));

    if (n <= kExactLimit) {
        out.assignments = exact_partition(g).assignments;
    } else if (method == ModularityMethod::greedy) {
        LevelGraph lg = level_from_daily(g);
        std::vector<int> comm(static_cast<std::size_t>(n));
        for (int u = 0; u < n; ++u) comm[static_cast<std::size_t>(u)] = u;
        std::vector<int> order(static_cast<std::size_t>(n));
        for (int u = 0; u < n; ++u) order[static_cast<std::size_t>(u)] = u;
        for (int round = 0; round < 50; ++round) {
            const int merges = merge_pass(lg, comm, m);
            const int moves = refine(lg, comm, m, order);
            if (merges == 0 && moves == 0) break;
        }
        out.assignments = comm;
    } else {
        // multilevel: local moves, then aggregate and repeat on the community graph
        LevelGraph lg = level_from_daily(g);
        std::vector<int> flat(static_cast<std::size_t>(n));
        for (int u = 0; u < n; ++u) flat[static_cast<std::size_t>(u)] = u;
        for (int level = 0; level < 64; ++level) {
            std::vector<int> comm(static_cast<std::size_t>(lg.n));
            for (int u = 0; u < lg.n; ++u) comm[static_cast<std::size_t>(u)] = u;
            std::vector<int> order(static_cast<std::size_t>(lg.n));
            for (int u = 0; u < lg.n; ++u) order[static_cast<std::size_t>(u)] = u;
            Rng rng(derive_seed(seed, 0x6d6c0000u + static_cast<std::uint64_t>(level)));
            rng.shuffle(order);
            const int moves = refine(lg, comm, m, order);
            const int n_comm = canonicalize(comm);
            if (moves == 0 || n_comm == lg.n) break;
            for (int u = 0; u < n; ++u)
                flat[static_cast<std::size_t>(u)] =
                    comm[static_cast<std::size_t>(flat[static_cast<std::size_t>(u)])];
            lg = aggregate(lg, comm, n_comm);
        }
        out.assignments = flat;
    }

    out.community_count = canonicalize(out.assignments);
    out.q = modularity_score(g, out.assignments);
    return out;
}

double modularity(const DailyGraph& g, std::uint64_t seed, ModularityMethod method) {
    return detect_communities(g, seed, method).q;
}

}  // namespace tokennet
