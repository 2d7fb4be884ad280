#pragma once

// Meta-preferences: orders over preorders with a designated peak, used by the
// manipulation checkers. They are query objects over cached distance tables,
// generic over the fixed-agenda semilattice and the agenda sum.

#include <functional>
#include <optional>
#include <string>

#include "medvote/lattice.hpp"
#include "medvote/sum.hpp"

namespace medvote {

// The space a meta-preference lives on: element ids, a path metric, and the
// ternary median (partial on the agenda sum).
struct MetaSpace {
    int n = 0;
    std::function<int(int, int)> dist;
    std::function<std::optional<int>(int, int, int)> median;
    std::function<std::string(int)> render;
};

MetaSpace lattice_space(const GroundPtr& ground);
MetaSpace sum_space(const GroundPtr& ground);

// A reflexive order over a space's elements with a single peak.
class MetaPreference {
  public:
    MetaPreference(int peak, std::function<bool(int, int)> geq)
        : peak_(peak), geq_(std::move(geq)) {}

    int peak() const { return peak_; }
    bool geq(int a, int b) const { return a == b || geq_(a, b); }
    bool strictly(int a, int b) const { return geq(a, b) && !geq(b, a); }
    bool indifferent(int a, int b) const { return geq(a, b) && geq(b, a); }

  private:
    int peak_;
    std::function<bool(int, int)> geq_;
};

// Geodesic meta: r' above r'' when r' lies on a shortest path from the peak
// to r''. Partial, reflexive, transitive; the peak is the unique maximum.
MetaPreference induced_meta(const MetaSpace& space, int peak);

// Total meta ranked purely by distance from the peak.
MetaPreference metric_meta(const MetaSpace& space, int peak);

// Unique maximum exists, and no point beats one lying between the peak and
// it, where "between" means being the median of the triple. Median-undefined
// triples constrain nothing. Induced metas satisfy this on the fixed-agenda
// semilattice but not on the mixed-agenda structure, whose median disagrees
// with geodesic betweenness; only the geodesic reading survives there.
bool is_single_peaked(const MetaSpace& space, const MetaPreference& order);

// Diagnostic: for every peak x and target y, the induced meta's upper contour
// at y is exactly the median interval between x and y. True on the
// fixed-agenda semilattice; this is the rich-domain shape.
bool induced_upper_contours_are_intervals(const MetaSpace& space);

} // namespace medvote
