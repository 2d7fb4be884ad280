#include "medvote/meta.hpp"

namespace medvote {

MetaSpace lattice_space(const GroundPtr& ground) {
    const Lattice& lat = Lattice::of(ground);
    MetaSpace s;
    s.n = lat.count();
    s.dist = [&lat](int a, int b) { return lat.bfs_distance(a, b); };
    s.median = [&lat](int a, int b, int c) -> std::optional<int> { return lat.median(a, b, c); };
    s.render = [&lat](int id) { return render_preorder(lat.element(id)); };
    return s;
}

MetaSpace sum_space(const GroundPtr& ground) {
    const SumStructure& sum = SumStructure::of(ground);
    MetaSpace s;
    s.n = sum.count();
    s.dist = [&sum](int a, int b) { return sum.distance(a, b); };
    s.median = [&sum](int a, int b, int c) { return sum.median(a, b, c); };
    s.render = [&sum](int id) { return sum.render(id); };
    return s;
}

MetaPreference induced_meta(const MetaSpace& space, int peak) {
    auto dist = space.dist;
    return MetaPreference(peak, [dist, peak](int a, int b) {
        return dist(peak, a) + dist(a, b) == dist(peak, b);
    });
}

MetaPreference metric_meta(const MetaSpace& space, int peak) {
    auto dist = space.dist;
    return MetaPreference(peak, [dist, peak](int a, int b) {
        return dist(peak, a) <= dist(peak, b);
    });
}

bool is_single_peaked(const MetaSpace& space, const MetaPreference& order) {
    int top = -1;
    for (int x = 0; x < space.n; ++x) {
        bool max = true;
        for (int y = 0; y < space.n && max; ++y)
            if (!order.geq(x, y))
                max = false;
        if (max) {
            if (top >= 0)
                return false; // two maxima
            top = x;
        }
    }
    if (top < 0)
        return false;
    for (int y = 0; y < space.n; ++y)
        for (int z = 0; z < space.n; ++z) {
            auto med = space.median(top, y, z);
            if (med && *med == z && order.strictly(y, z))
                return false;
        }
    return true;
}

bool induced_upper_contours_are_intervals(const MetaSpace& space) {
    for (int peak = 0; peak < space.n; ++peak) {
        auto meta = induced_meta(space, peak);
        for (int y = 0; y < space.n; ++y)
            for (int z = 0; z < space.n; ++z) {
                auto med = space.median(peak, y, z);
                bool interval = med && *med == z;
                if (meta.geq(z, y) != interval)
                    return false;
            }
    }
    return true;
}

} // namespace medvote
