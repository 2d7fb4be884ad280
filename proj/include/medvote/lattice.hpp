#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "medvote/profile.hpp"
#include "medvote/relation.hpp"

namespace medvote {

// Two-indifference-class total preorder: everything in `top` strictly above
// everything in `bottom`, ties inside each part. These are exactly the
// meet-irreducible elements (and the co-atoms) of the inclusion order on
// total preorders.
struct OrderedBipartition {
    std::vector<std::string> top;
    std::vector<std::string> bottom;

    TotalPreorder as_preorder(const GroundPtr& ground) const;
};

// Cached structure of (total preorders on A, pair-set inclusion): a median
// join-semilattice. Join is the transitive closure of the union; meet is
// partial (defined when a greatest common lower bound exists). Elements are
// indexed by their position in canonical enumeration order.
class Lattice {
  public:
    // Built once per ground set and cached; thread-safe.
    static const Lattice& of(const GroundPtr& ground);

    const GroundPtr& ground() const { return ground_; }
    int count() const { return static_cast<int>(elems_.size()); }
    const TotalPreorder& element(int id) const { return elems_[static_cast<size_t>(id)]; }
    const std::vector<TotalPreorder>& elements() const { return elems_; }
    int id_of(const TotalPreorder& r) const;
    int id_of_mask(Mask rel) const; // -1 when not a total preorder on this ground

    bool leq(int a, int b) const; // pair-set containment
    int top() const { return top_; }

    int join(int a, int b) const;
    int join_all(const std::vector<int>& ids) const; // empty input not allowed

    // Greatest common lower bound, or nullopt when none exists.
    std::optional<int> meet(int a, int b) const;
    // Meet of a set; the empty set meets to the top element.
    std::optional<int> meet_all(const std::vector<int>& ids) const;

    // Meet-irreducibles in canonical order: ascending size of the top part,
    // then lexicographically by its member indices.
    const std::vector<int>& irreducible_ids() const { return irr_ids_; }
    const std::vector<OrderedBipartition>& irreducibles() const { return irreducibles_; }

    const std::vector<std::vector<int>>& upper_covers() const { return up_; }
    const std::vector<std::vector<int>>& lower_covers() const { return down_; }
    const std::vector<int>& coatoms() const { return coatoms_; } // lower covers of top
    const std::vector<int>& minimal_ids() const { return minimal_; }

    // Rank: length of the longest chain up from a minimal element.
    int rank(int id) const { return rank_[static_cast<size_t>(id)]; }
    // Metric from the rank formula: 2*rank(join) - rank(a) - rank(b).
    int distance(int a, int b) const;
    // Shortest-path length on the (undirected) covering graph.
    int bfs_distance(int a, int b) const;

    // Median of three elements via the join/meet formula. On this structure
    // it is always defined; an undefined meet inside signals a bug.
    int median(int a, int b, int c) const;
    // z lies between a and b in the median sense (z == median(a,b,z)).
    bool between(int a, int z, int b) const;
    // z lies on some geodesic from a to b.
    bool metric_between(int a, int z, int b) const;

  private:
    explicit Lattice(GroundPtr ground);

    GroundPtr ground_;
    std::vector<TotalPreorder> elems_;
    std::map<Mask, int> id_by_mask_;
    int top_ = -1;
    std::vector<int> join_tab_;          // count x count
    std::vector<int> meet_tab_;          // -1 = undefined
    std::vector<std::vector<int>> up_, down_;
    std::vector<int> coatoms_, minimal_, rank_, irr_ids_;
    std::vector<OrderedBipartition> irreducibles_;
    std::vector<std::int16_t> bfs_;      // count x count
};

// Value-level operations (conveniences over the cache).
TotalPreorder join(const TotalPreorder& x, const TotalPreorder& y);
std::optional<TotalPreorder> meet(const std::vector<TotalPreorder>& xs, const GroundPtr& ground);
std::vector<OrderedBipartition> meet_irreducibles(const GroundPtr& ground);
int rank(const TotalPreorder& r);
int distance(const TotalPreorder& x, const TotalPreorder& y);
TotalPreorder median(const TotalPreorder& x, const TotalPreorder& y, const TotalPreorder& z);
bool between(const TotalPreorder& x, const TotalPreorder& z, const TotalPreorder& y);

// Hasse diagram of the preorder semilattice in DOT format, deterministic
// vertex and edge order.
std::string lattice_dot(const GroundPtr& ground);

// ---------------------------------------------------------------------------
// Structure validation

struct ValidationIssue {
    std::string check;
    std::string detail;
};

struct ValidationOptions {
    std::uint64_t seed = 42;
    int samples = 20000;   // per sampled check
};

struct ValidationReport {
    std::string structure;
    std::string mode; // "exhaustive" or "sampled(...)"
    bool order_sane = true;        // leq is a partial order, unique top
    bool joins_are_lubs = true;    // every pair has a least upper bound = join
    bool meets_are_glbs = true;    // meet agrees with the scanned greatest lower bound
    bool mu1 = true;               // median(x,x,y) == x
    bool mu2 = true;               // the median exchange identity
    bool helly = true;             // pairwise meets exist => triple meet exists
    bool betweenness = true;       // median betweenness == metric betweenness
    bool rank_distance = true;     // rank-formula distance == BFS distance
    bool coatomistic = true;       // irreducibles == co-atoms and x == meet of irreducibles above x
    bool coatomistic_checked = false;
    std::vector<ValidationIssue> issues;
    std::map<std::string, std::string> notes;

    bool all_pass() const;
};

ValidationReport validate_preorder_lattice(const GroundPtr& ground, const ValidationOptions& opt = {});
ValidationReport validate_powerset_lattice(const GroundPtr& ground, const ValidationOptions& opt = {});

} // namespace medvote
