#include "sirup/random_gen.hpp"

#include <string>

namespace sirup {

namespace {

const char* kRoleNames[] = {"R", "S", "P", "Q2", "U", "V"};

std::string role_name(int i) { return kRoleNames[i % 6]; }

int uniform(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace

Query random_path_query(std::mt19937_64& rng, int max_edges, int role_count,
                        bool allow_twins) {
    for (;;) {
        Query q;
        int edges = uniform(rng, 0, max_edges);
        int prev = q.var("x1");
        bool labelled = false;
        for (int i = 0; i <= edges; ++i) {
            int node = i == 0 ? prev : q.var("x" + std::to_string(i + 1));
            int pick = uniform(rng, 0, allow_twins ? 9 : 7);
            LabelSet l = 0;
            if (pick >= 2 && pick < 5) l = kF;
            if (pick >= 5 && pick < 8) l = kT;
            if (pick >= 8) l = kF | kT;
            if (l) {
                q.add_label(node, l);
                labelled = true;
            }
            if (i < edges) {
                int next = q.var("x" + std::to_string(i + 2));
                q.add_edge(node, q.role(role_name(uniform(rng, 0, role_count - 1))),
                           next);
            }
            prev = node;
        }
        if (!labelled) continue;
        q.finalize();
        return q;
    }
}

Query random_one_cq(std::mt19937_64& rng, int max_edges, int role_count) {
    int edges = uniform(rng, 1, max_edges);
    Query q;
    for (int i = 0; i <= edges; ++i) q.var("x" + std::to_string(i + 1));
    for (int i = 0; i < edges; ++i)
        q.add_edge(i, q.role(role_name(uniform(rng, 0, role_count - 1))), i + 1);
    int f = uniform(rng, 0, edges);
    q.add_label(f, kF);
    int ts = 0;
    for (int i = 0; i <= edges; ++i) {
        if (i == f) continue;
        if (uniform(rng, 0, 1)) {
            q.add_label(i, kT);
            ++ts;
        }
    }
    if (ts == 0) {
        int i = uniform(rng, 0, edges - 1);
        q.add_label(i >= f ? i + 1 : i, kT);
    }
    q.finalize();
    return q;
}

ABox random_abox(std::mt19937_64& rng, int max_inds, int role_count) {
    ABox a;
    int inds = uniform(rng, 0, max_inds);
    for (int i = 0; i < inds; ++i) {
        int id = a.ind("a" + std::to_string(i + 1));
        LabelSet l = 0;
        if (uniform(rng, 0, 1)) l |= kA;
        if (uniform(rng, 0, 4) == 0) l |= kF;
        if (uniform(rng, 0, 4) == 0) l |= kT;
        if (l) a.set_label(id, l);
    }
    if (inds > 0) {
        int edges = uniform(rng, 0, 2 * inds);
        for (int i = 0; i < edges; ++i)
            a.add_edge(uniform(rng, 0, inds - 1),
                       a.role(role_name(uniform(rng, 0, role_count - 1))),
                       uniform(rng, 0, inds - 1));
    }
    a.finalize();
    return a;
}

}  // namespace sirup
