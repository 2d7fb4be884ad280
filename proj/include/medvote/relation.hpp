#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "medvote/ground.hpp"

namespace medvote {

using Mask = std::uint64_t;

namespace bits {

// Relations are stored as m*m incidence matrices packed into a Mask:
// bit (i*m + j) set  <=>  alternative i is weakly at-least-as-good-as j.
// All helpers below are pure functions over that packing.

constexpr Mask pair_bit(int i, int j, int m) {
    return Mask{1} << (i * m + j);
}

constexpr Mask row(Mask rel, int i, int m) {
    return (rel >> (i * m)) & ((Mask{1} << m) - 1);
}

Mask full_relation(int m);           // all pairs related
Mask diagonal(int m);                // reflexive pairs only
bool is_reflexive(Mask rel, int m);
bool is_total(Mask rel, int m);      // every pair related at least one way
bool is_transitive(Mask rel, int m);
bool is_total_preorder(Mask rel, int m);

// Transitive closure (reachability), keeps reflexive pairs.
Mask closure(Mask rel, int m);

// Converse relation: bit (i,j) becomes bit (j,i).
Mask converse(Mask rel, int m);

// Keep only the pairs with both endpoints inside `keep` (index mask over m).
Mask restrict_pairs(Mask rel, unsigned keep, int m);

// Re-pack a relation restricted to `keep` into the coordinates of the
// smaller ground set (indices compressed in ascending order).
Mask compress(Mask rel, unsigned keep, int m);

} // namespace bits

// Indifference-class view of a total preorder: blocks of mutually indifferent
// alternatives, best block first; within a block, ground-set order.
struct OrderedPartition {
    std::vector<std::vector<int>> blocks;

    int block_of(int element) const; // throws ParameterError when absent
};

class TotalPreorder {
  public:
    // Validates that `rel` is a total preorder on `ground`; InternalError
    // otherwise (construction sites are expected to hand in valid masks).
    TotalPreorder(GroundPtr ground, Mask rel);

    const GroundPtr& ground() const { return ground_; }
    int size() const { return ground_->size(); }
    Mask mask() const { return rel_; }

    bool geq(int i, int j) const;                       // i weakly above j
    bool geq(const std::string& x, const std::string& y) const;
    bool strictly(int i, int j) const;                  // geq(i,j) and not geq(j,i)
    bool strictly(const std::string& x, const std::string& y) const;
    bool indifferent(int i, int j) const;
    bool indifferent(const std::string& x, const std::string& y) const;

    // Pair-set containment; both relations must share a ground set.
    bool contained_in(const TotalPreorder& other) const;

    OrderedPartition blocks() const;
    int block_count() const;
    bool is_linear() const;          // antisymmetric, i.e. all blocks singletons

    TotalPreorder converse() const;

    bool operator==(const TotalPreorder& other) const;
    bool operator!=(const TotalPreorder& other) const { return !(*this == other); }

  private:
    GroundPtr ground_;
    Mask rel_;
};

// Build from an ordered partition (validates block structure).
TotalPreorder from_partition(const GroundPtr& ground, const OrderedPartition& part);

// Text encoding: blocks separated by '|', labels inside a block separated by
// spaces, best block first. "a b|c" reads "a and b tie, both above c".
std::string render_preorder(const TotalPreorder& r);
TotalPreorder parse_preorder(const GroundPtr& ground, const std::string& text);

// All total preorders on `ground` in canonical order (lexicographic on the
// rendered encoding). Hard cap: ground sets of size <= 5.
const std::vector<TotalPreorder>& enumerate_preorders(const GroundPtr& ground);

// Restriction to a nonempty sub-agenda given by labels (order within the
// original ground set is kept). Result lives on a fresh sub-ground.
TotalPreorder restrict(const TotalPreorder& r, const std::vector<std::string>& agenda);
TotalPreorder restrict_indexed(const TotalPreorder& r, const std::vector<int>& keep);

} // namespace medvote
