#pragma once

#include <random>

#include "sirup/abox.hpp"
#include "sirup/query.hpp"

namespace sirup {

// Seeded instance generators for the randomized suites. Everything draws
// from the caller's engine, so a fixed seed reproduces a whole suite.

// Path CQ with 1..max_edges edges over role names R, S, ... (role_count of
// them). Node labels are drawn from {none, F, T} and, when allow_twins is
// set, occasionally FT. The result always has at least one labelled node.
Query random_path_query(std::mt19937_64& rng, int max_edges, int role_count,
                        bool allow_twins);

// Twinless path CQ with exactly one solitary F node and at least one
// solitary T node (already oriented the way the rewriting builders expect).
Query random_one_cq(std::mt19937_64& rng, int max_edges, int role_count);

// ABox with 0..max_inds individuals, random unary labels over {F, T, A}
// and random edges (self-loops permitted).
ABox random_abox(std::mt19937_64& rng, int max_inds, int role_count);

}  // namespace sirup
