#pragma once

// The sum structure: all total preorders on all nonempty agendas B inside a
// parent ground set, ordered by pair-set inclusion. Restrictions of a larger
// ground set's preorders live here side by side, which is what agenda
// formation manipulates.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "medvote/lattice.hpp"
#include "medvote/relation.hpp"

namespace medvote {

// One element: a total preorder over the agenda `agenda` (a label-index mask
// over the parent ground). `rel` keeps parent coordinates, so pair-set
// inclusion across different agendas is plain mask containment.
struct SumElement {
    unsigned agenda = 0; // nonempty subset of parent indices
    Mask rel = 0;        // pairs over parent indices, only within `agenda`

    bool operator==(const SumElement& o) const { return agenda == o.agenda && rel == o.rel; }
    bool operator<(const SumElement& o) const {
        return agenda != o.agenda ? agenda < o.agenda : rel < o.rel;
    }
};

// Cached covering-order view of the sum structure for one parent ground set.
// Joins are partial here (see validate_sum_structure), so geometry uses the
// covering graph directly.
class SumStructure {
  public:
    static const SumStructure& of(const GroundPtr& ground);

    const GroundPtr& ground() const { return ground_; }
    int count() const { return static_cast<int>(elems_.size()); }
    const SumElement& element(int id) const { return elems_[static_cast<size_t>(id)]; }
    int id_of(const SumElement& e) const;
    int id_of(const TotalPreorder& r) const; // r on the parent ground or any sub-ground

    // Pair-set inclusion in parent coordinates.
    bool leq(int a, int b) const;

    // Least upper bound when one exists.
    std::optional<int> join(int a, int b) const;
    std::optional<int> meet(int a, int b) const;

    // Median from the pair-set formula: closures of pairwise unions,
    // intersected. The raw result can fail to be total on its agenda, in
    // which case it is no element of the sum and nullopt is returned.
    std::optional<int> median(int a, int b, int c) const;

    const std::vector<std::vector<int>>& upper_covers() const { return up_; }
    const std::vector<std::vector<int>>& lower_covers() const { return down_; }

    // Longest-chain rank from a minimal element (the poset is graded).
    int rank(int id) const { return rank_[static_cast<size_t>(id)]; }
    // Shortest-path distance on the covering graph; total, unlike joins.
    int distance(int a, int b) const;

    // As a preorder on the agenda's sub-ground (for rendering).
    TotalPreorder as_preorder(int id) const;
    std::string render(int id) const;

  private:
    explicit SumStructure(GroundPtr ground);

    GroundPtr ground_;
    std::vector<SumElement> elems_;
    std::map<SumElement, int> id_of_;
    std::vector<std::vector<int>> up_, down_;
    std::vector<int> rank_;
    std::vector<std::int16_t> dist_;
};

// Membership of a raw (agenda, pairs) candidate in the sum.
bool is_sum_element(unsigned agenda, Mask rel, int m);

// Pair-set median of three sum elements, computed on raw masks.
SumElement sum_median(const SumElement& x, const SumElement& y, const SumElement& z, int m);

// Structural audit of the sum. The join-totality probe is expected to fail:
// the report's `joins_are_lubs` flag records the defect with a witness.
ValidationReport validate_sum_structure(const GroundPtr& ground, const ValidationOptions& opt = {});

} // namespace medvote
