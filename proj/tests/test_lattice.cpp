#include <doctest.h>

#include <algorithm>
#include <set>

#include "medvote/lattice.hpp"

using namespace medvote;

namespace {

GroundPtr abc() { return GroundSet::parse("a,b,c"); }
GroundPtr abcd() { return GroundSet::parse("a,b,c,d"); }

TotalPreorder P(const GroundPtr& g, const std::string& enc) { return parse_preorder(g, enc); }

// Oracle from the block picture: R is contained in R' exactly when the block
// sequence of R' arises by merging runs of consecutive blocks of R.
bool merge_contained(const TotalPreorder& r, const TotalPreorder& s) {
    auto rb = r.blocks().blocks;
    auto sb = s.blocks().blocks;
    size_t i = 0;
    for (const auto& big : sb) {
        std::set<int> want(big.begin(), big.end());
        std::set<int> got;
        while (i < rb.size() && got.size() < want.size()) {
            got.insert(rb[i].begin(), rb[i].end());
            ++i;
        }
        if (got != want)
            return false;
    }
    return i == rb.size();
}

} // namespace

TEST_CASE("containment equals the block-merge picture") {
    for (auto g : {abc(), abcd()}) {
        const auto& all = enumerate_preorders(g);
        for (const auto& r : all)
            for (const auto& s : all)
                CHECK(r.contained_in(s) == merge_contained(r, s));
    }
}

TEST_CASE("covers merge exactly two adjacent blocks") {
    for (auto g : {abc(), abcd()}) {
        const Lattice& lat = Lattice::of(g);
        for (int id = 0; id < lat.count(); ++id) {
            auto blocks = lat.element(id).blocks().blocks;
            std::set<int> expect;
            for (size_t i = 0; i + 1 < blocks.size(); ++i) {
                OrderedPartition merged;
                for (size_t j = 0; j < blocks.size(); ++j) {
                    if (j == i) {
                        std::vector<int> u = blocks[j];
                        u.insert(u.end(), blocks[j + 1].begin(), blocks[j + 1].end());
                        std::sort(u.begin(), u.end());
                        merged.blocks.push_back(u);
                        ++j;
                    } else {
                        merged.blocks.push_back(blocks[j]);
                    }
                }
                expect.insert(lat.id_of(from_partition(g, merged)));
            }
            auto ups = lat.upper_covers()[static_cast<size_t>(id)];
            CHECK(std::set<int>(ups.begin(), ups.end()) == expect);
        }
    }
}

TEST_CASE("rank counts block boundaries lost") {
    for (auto g : {abc(), abcd()}) {
        const Lattice& lat = Lattice::of(g);
        for (int id = 0; id < lat.count(); ++id)
            CHECK(lat.rank(id) == g->size() - lat.element(id).block_count());
    }
    const Lattice& lat = Lattice::of(abc());
    CHECK(lat.rank(lat.id_of(P(abc(), "a|b|c"))) == 0);
    CHECK(lat.rank(lat.id_of(P(abc(), "a|b c"))) == 1);
    CHECK(lat.rank(lat.id_of(P(abc(), "a b c"))) == 2);
    CHECK(lat.top() == lat.id_of(P(abc(), "a b c")));
}

TEST_CASE("join examples and laws") {
    auto g = abc();
    CHECK(render_preorder(join(P(g, "a|b|c"), P(g, "c|b|a"))) == "a b c");
    CHECK(render_preorder(join(P(g, "a|b|c"), P(g, "a|c|b"))) == "a|b c");
    CHECK(render_preorder(join(P(g, "a|b|c"), P(g, "a|b|c"))) == "a|b|c");
    CHECK(render_preorder(join(P(g, "b|a c"), P(g, "b|a|c"))) == "b|a c");

    const Lattice& lat = Lattice::of(g);
    for (int a = 0; a < lat.count(); ++a)
        for (int b = 0; b < lat.count(); ++b) {
            int j = lat.join(a, b);
            CHECK(j == lat.join(b, a));
            CHECK(lat.leq(a, j));
            CHECK(lat.leq(b, j));
            CHECK(lat.join(a, a) == a);
            CHECK(lat.join(a, lat.top()) == lat.top());
            for (int c = 0; c < lat.count(); ++c)
                CHECK(lat.join(lat.join(a, b), c) == lat.join(a, lat.join(b, c)));
        }
}

TEST_CASE("meet is the greatest common lower bound when it exists") {
    auto g = abc();
    auto got = meet({P(g, "a|b c"), P(g, "a b|c")}, g);
    REQUIRE(got.has_value());
    CHECK(render_preorder(*got) == "a|b|c");
    CHECK(!meet({P(g, "a|b|c"), P(g, "c|b|a")}, g).has_value());

    const Lattice& lat = Lattice::of(g);
    CHECK(meet(std::vector<TotalPreorder>{}, g).has_value());
    CHECK(*lat.meet_all({}) == lat.top());

    for (int a = 0; a < lat.count(); ++a)
        for (int b = 0; b < lat.count(); ++b) {
            auto mt = lat.meet(a, b);
            // scan: collect common lower bounds
            std::vector<int> lower;
            for (int c = 0; c < lat.count(); ++c)
                if (lat.leq(c, a) && lat.leq(c, b))
                    lower.push_back(c);
            int greatest = -1;
            for (int c : lower) {
                bool top_of_all = true;
                for (int d : lower)
                    if (!lat.leq(d, c))
                        top_of_all = false;
                if (top_of_all)
                    greatest = c;
            }
            if (greatest >= 0) {
                REQUIRE(mt.has_value());
                CHECK(*mt == greatest);
            } else {
                CHECK(!mt.has_value());
            }
        }
}

TEST_CASE("meet-irreducibles are the ordered bipartitions and the co-atoms") {
    for (auto g : {abc(), abcd()}) {
        const Lattice& lat = Lattice::of(g);
        const int m = g->size();
        CHECK(static_cast<int>(lat.irreducibles().size()) == (1 << m) - 2);
        std::vector<int> irr = lat.irreducible_ids();
        std::sort(irr.begin(), irr.end());
        auto coat = lat.coatoms();
        CHECK(irr == coat);
        for (int id : lat.irreducible_ids())
            CHECK(lat.element(id).block_count() == 2);
        // exactly the elements with a single upper cover
        std::vector<int> single;
        for (int id = 0; id < lat.count(); ++id)
            if (lat.upper_covers()[static_cast<size_t>(id)].size() == 1)
                single.push_back(id);
        CHECK(single == irr);
    }
    // canonical listing order at m=3: singleton tops first, by index
    auto irr = meet_irreducibles(abc());
    CHECK(irr.size() == 6);
    CHECK(irr[0].top == std::vector<std::string>{"a"});
    CHECK(irr[1].top == std::vector<std::string>{"b"});
    CHECK(irr[2].top == std::vector<std::string>{"c"});
    CHECK(irr[3].top == std::vector<std::string>{"a", "b"});
    CHECK(irr[5].top == std::vector<std::string>{"b", "c"});
    CHECK(render_preorder(irr[0].as_preorder(abc())) == "a|b c");
    CHECK(render_preorder(irr[3].as_preorder(abc())) == "a b|c");
}

TEST_CASE("distance agrees between rank formula and shortest paths") {
    auto g = abc();
    CHECK(distance(P(g, "a|b|c"), P(g, "c|b|a")) == 4);
    CHECK(distance(P(g, "a|b|c"), P(g, "a|c|b")) == 2);
    CHECK(distance(P(g, "a|b|c"), P(g, "a|b c")) == 1);
    CHECK(distance(P(g, "a|b|c"), P(g, "a|b|c")) == 0);

    for (auto gs : {abc(), abcd()}) {
        const Lattice& lat = Lattice::of(gs);
        for (int a = 0; a < lat.count(); ++a)
            for (int b = 0; b < lat.count(); ++b)
                CHECK(lat.distance(a, b) == lat.bfs_distance(a, b));
    }
}

TEST_CASE("median examples") {
    auto g = abc();
    CHECK(render_preorder(median(P(g, "a|b|c"), P(g, "b|c|a"), P(g, "c|a|b"))) == "a b c");
    CHECK(render_preorder(median(P(g, "a|b|c"), P(g, "a|c|b"), P(g, "a|b c"))) == "a|b c");
    CHECK(render_preorder(median(P(g, "a|b|c"), P(g, "a|b|c"), P(g, "c|b|a"))) == "a|b|c");
    CHECK(render_preorder(median(P(g, "a|b|c"), P(g, "a|b|c"), P(g, "a|b|c"))) == "a|b|c");
}

TEST_CASE("betweenness examples") {
    auto g = abc();
    CHECK(between(P(g, "a|b|c"), P(g, "a b c"), P(g, "c|b|a")));
    CHECK(!between(P(g, "a|b|c"), P(g, "c|b|a"), P(g, "a b c")));
    CHECK(between(P(g, "a|b|c"), P(g, "a|b c"), P(g, "a|c|b")));
    CHECK(between(P(g, "a|b|c"), P(g, "a|b|c"), P(g, "c|b|a")));

    const Lattice& lat = Lattice::of(g);
    for (int a = 0; a < lat.count(); ++a)
        for (int z = 0; z < lat.count(); ++z)
            for (int b = 0; b < lat.count(); ++b)
                CHECK(lat.between(a, z, b) == lat.metric_between(a, z, b));
}

TEST_CASE("structure validator passes on the preorder semilattice") {
    auto r3 = validate_preorder_lattice(abc());
    CHECK(r3.all_pass());
    CHECK(r3.mode == "exhaustive");
    CHECK(r3.coatomistic_checked);
    CHECK(r3.issues.empty());

    ValidationOptions opt;
    opt.samples = 4000;
    auto r4 = validate_preorder_lattice(abcd(), opt);
    CHECK(r4.all_pass());
    CHECK(r4.mode.substr(0, 7) == "sampled");
}

TEST_CASE("structure validator passes on the powerset sanity model") {
    auto rep = validate_powerset_lattice(abc());
    CHECK(rep.all_pass());
    CHECK(rep.coatomistic_checked);
}

TEST_CASE("dot output is deterministic and well-formed") {
    auto d1 = lattice_dot(abc());
    auto d2 = lattice_dot(abc());
    CHECK(d1 == d2);
    CHECK(d1.find("digraph") != std::string::npos);
    CHECK(d1.find("\"a|b|c\" -> \"a|b c\"") != std::string::npos);
    // 13 vertices and one edge per cover pair
    const Lattice& lat = Lattice::of(abc());
    size_t edges = 0;
    for (int i = 0; i < lat.count(); ++i)
        edges += lat.upper_covers()[static_cast<size_t>(i)].size();
    size_t arrows = 0;
    for (size_t pos = d1.find("->"); pos != std::string::npos; pos = d1.find("->", pos + 1))
        ++arrows;
    CHECK(arrows == edges);
}
