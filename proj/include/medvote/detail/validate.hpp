#pragma once

// Internal: generic finite-structure validator shared by the preorder
// lattice, the powerset sanity model, and the agenda-sum structure.

#include <functional>
#include <optional>

#include "medvote/lattice.hpp"

namespace medvote::detail {

// A finite ordered structure under test. `leq` must be definition-level
// (independent of any cached tables) so the validator can audit production
// operations against scans derived from the raw order.
struct FiniteModel {
    std::string name;
    int n = 0;
    std::function<std::string(int)> render;
    std::function<bool(int, int)> leq;

    // Production operations under audit; null members fall back to scans.
    std::function<int(int, int)> prod_join;                   // -1 = undefined
    std::function<int(int, int)> prod_meet;                   // -1 = undefined
    std::function<int(const std::vector<int>&)> prod_meet_set; // -1 = undefined

    // Median, element-level (preorder lattice / powerset). Undefined -> nullopt.
    std::function<std::optional<int>(int, int, int)> median_elem;
    // Median as raw pair-set algebra (agenda sum). Requires key().
    std::function<Mask(Mask, Mask, Mask)> median_mask;
    std::function<Mask(int)> key;

    // Rank-formula distance under audit (null -> derive from graph + lub).
    std::function<int(int, int)> prod_distance; // -1 = undefined

    // Elements claimed to be the meet-irreducibles (empty -> skip the check).
    std::vector<int> claimed_irreducibles;
};

struct ModelGraph {
    std::vector<std::vector<int>> up, down;
    std::vector<int> rank;
    std::vector<int> maximal, minimal;
    int top = -1; // unique maximum or -1
    std::vector<std::int16_t> dist; // n*n, -1 = unreachable
    int dist_at(int a, int b, int n) const { return dist[static_cast<size_t>(a) * n + b]; }
};

ModelGraph build_graph(const FiniteModel& model);

// Scan-based least upper bound / greatest lower bound; nullopt when absent.
std::optional<int> scan_lub(const FiniteModel& model, int a, int b);
std::optional<int> scan_glb(const FiniteModel& model, const std::vector<int>& xs);

ValidationReport run_model_validation(const FiniteModel& model, const ModelGraph& graph,
                                      const ValidationOptions& opt, bool exhaustive);

} // namespace medvote::detail
