#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "medvote/profile.hpp"
#include "medvote/relation.hpp"

using namespace medvote;

namespace {

// Oracle: enumerate total preorders by filtering every reflexive relation on
// m elements, testing totality and transitivity pairwise from scratch.
std::set<Mask> brute_force_preorders(int m) {
    std::set<Mask> out;
    const int offdiag = m * m - m;
    std::vector<std::pair<int, int>> cells;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j)
                cells.push_back({i, j});
    for (std::uint64_t code = 0; code < (1ull << offdiag); ++code) {
        Mask rel = 0;
        for (int i = 0; i < m; ++i)
            rel |= bits::pair_bit(i, i, m);
        for (int c = 0; c < offdiag; ++c)
            if (code & (1ull << c))
                rel |= bits::pair_bit(cells[static_cast<size_t>(c)].first,
                                      cells[static_cast<size_t>(c)].second, m);
        bool total = true;
        for (int i = 0; i < m && total; ++i)
            for (int j = 0; j < m && total; ++j)
                if (!(rel & bits::pair_bit(i, j, m)) && !(rel & bits::pair_bit(j, i, m)))
                    total = false;
        if (!total)
            continue;
        bool trans = true;
        for (int i = 0; i < m && trans; ++i)
            for (int j = 0; j < m && trans; ++j)
                for (int k = 0; k < m && trans; ++k)
                    if ((rel & bits::pair_bit(i, j, m)) && (rel & bits::pair_bit(j, k, m)) &&
                        !(rel & bits::pair_bit(i, k, m)))
                        trans = false;
        if (trans)
            out.insert(rel);
    }
    return out;
}

GroundPtr abc() { return GroundSet::parse("a,b,c"); }

} // namespace

TEST_CASE("ground set basics") {
    auto g = abc();
    CHECK(g->size() == 3);
    CHECK(g->label(1) == "b");
    CHECK(g->index("c") == 2);
    CHECK(g->contains("a"));
    CHECK(!g->contains("d"));
    CHECK_THROWS_AS(g->index("x"), ParseError);
    CHECK_THROWS_AS(GroundSet::parse("a,b,a"), ParseError);
    CHECK_THROWS_AS(GroundSet::parse(""), ParseError);
    CHECK_THROWS_AS(GroundSet::parse("a,b,c,d,e,f"), GroundTooLarge);
    CHECK_THROWS_AS(GroundSet::parse("a|b,c"), ParseError);
    auto sub = g->subset({0, 2});
    CHECK(sub->labels() == std::vector<std::string>{"a", "c"});
    CHECK_THROWS_AS(g->subset({}), EmptyAgenda);
    CHECK_THROWS_AS(g->subset({0, 0}), ParameterError);
}

TEST_CASE("enumeration matches the brute-force oracle") {
    for (int m = 3; m <= 4; ++m) {
        std::vector<std::string> labels;
        for (int i = 0; i < m; ++i)
            labels.push_back(std::string(1, static_cast<char>('a' + i)));
        auto g = make_ground(labels);
        const auto& all = enumerate_preorders(g);
        auto oracle = brute_force_preorders(m);
        CHECK(all.size() == oracle.size());
        CHECK(all.size() == (m == 3 ? 13u : 75u));
        std::set<Mask> got;
        for (const auto& r : all)
            got.insert(r.mask());
        CHECK(got == oracle);
    }
}

TEST_CASE("five-element count and linear orders") {
    std::vector<std::string> labels = {"a", "b", "c", "d", "e"};
    const auto& all = enumerate_preorders(make_ground(labels));
    CHECK(all.size() == 541);

    int linear = 0;
    for (const auto& r : enumerate_preorders(abc()))
        if (r.is_linear())
            ++linear;
    CHECK(linear == 6);
}

TEST_CASE("canonical order is lexicographic on the rendering") {
    const auto& all = enumerate_preorders(abc());
    std::vector<std::string> rendered;
    for (const auto& r : all)
        rendered.push_back(render_preorder(r));
    auto sorted = rendered;
    std::sort(sorted.begin(), sorted.end());
    CHECK(rendered == sorted);
    CHECK(std::set<std::string>(rendered.begin(), rendered.end()).size() == rendered.size());
}

TEST_CASE("parse and render round-trip") {
    auto g = abc();
    for (const auto& r : enumerate_preorders(g)) {
        auto back = parse_preorder(g, render_preorder(r));
        CHECK(back == r);
    }
    CHECK(render_preorder(parse_preorder(g, "  b   c | a ")) == "b c|a");
    CHECK_THROWS_AS(parse_preorder(g, "a|b"), ParseError);        // c missing
    CHECK_THROWS_AS(parse_preorder(g, "a|b|c|"), ParseError);     // empty block
    CHECK_THROWS_AS(parse_preorder(g, "a|b|b"), ParseError);      // duplicate
    CHECK_THROWS_AS(parse_preorder(g, "a|b|x"), ParseError);      // unknown label
    CHECK_THROWS_AS(parse_preorder(g, ""), ParseError);
}

TEST_CASE("relational structure of parsed preorders") {
    auto g = abc();
    auto r = parse_preorder(g, "a|b c");
    CHECK(r.geq("a", "b"));
    CHECK(r.strictly("a", "b"));
    CHECK(r.geq("b", "c"));
    CHECK(r.geq("c", "b"));
    CHECK(r.indifferent("b", "c"));
    CHECK(!r.geq("b", "a"));
    CHECK(!r.is_linear());
    CHECK(parse_preorder(g, "a|b|c").is_linear());
    CHECK(r.block_count() == 2);
    CHECK(r.blocks().blocks == std::vector<std::vector<int>>{{0}, {1, 2}});

    auto conv = r.converse();
    CHECK(render_preorder(conv) == "b c|a");
    CHECK(conv.converse() == r);

    auto u = TotalPreorder(g, bits::full_relation(3));
    CHECK(u.block_count() == 1);
    CHECK(render_preorder(u) == "a b c");
}

TEST_CASE("containment is pair-set inclusion") {
    auto g = abc();
    auto fine = parse_preorder(g, "a|b|c");
    auto mid = parse_preorder(g, "a|b c");
    auto top = parse_preorder(g, "a b c");
    CHECK(fine.contained_in(mid));
    CHECK(mid.contained_in(top));
    CHECK(fine.contained_in(top));
    CHECK(!mid.contained_in(fine));
    CHECK(!parse_preorder(g, "b|a|c").contained_in(mid));
}

TEST_CASE("restriction to sub-agendas") {
    auto g = abc();
    CHECK(render_preorder(restrict(parse_preorder(g, "a|b c"), {"b", "c"})) == "b c");
    CHECK(render_preorder(restrict(parse_preorder(g, "a|b|c"), {"a", "c"})) == "a|c");
    CHECK(render_preorder(restrict(parse_preorder(g, "a|b|c"), {"b"})) == "b");
    auto full = restrict(parse_preorder(g, "c|a|b"), {"a", "b", "c"});
    CHECK(render_preorder(full) == "c|a|b");
    CHECK_THROWS_AS(restrict(parse_preorder(g, "a|b|c"), {}), EmptyAgenda);
    CHECK_THROWS_AS(restrict(parse_preorder(g, "a|b|c"), {"a", "x"}), ParseError);
}

TEST_CASE("restriction commutes with intersection semantics") {
    // restricting keeps exactly the pairs over the kept labels
    auto g = abc();
    for (const auto& r : enumerate_preorders(g)) {
        auto sub = restrict(r, {"a", "c"});
        for (const auto& x : {std::string("a"), std::string("c")})
            for (const auto& y : {std::string("a"), std::string("c")})
                CHECK(sub.geq(x, y) == r.geq(x, y));
    }
}

TEST_CASE("profile construction and replacement") {
    auto g = abc();
    std::vector<TotalPreorder> prefs = {parse_preorder(g, "a|b|c"), parse_preorder(g, "b|c|a"),
                                        parse_preorder(g, "c|a|b")};
    Profile p(g, prefs);
    CHECK(p.agents() == 3);
    CHECK(render_preorder(p.pref(1)) == "b|c|a");
    auto q = p.with_replaced(1, parse_preorder(g, "a b c"));
    CHECK(render_preorder(q.pref(1)) == "a b c");
    CHECK(render_preorder(p.pref(1)) == "b|c|a");
    CHECK(p != q);
    CHECK(p == Profile(g, prefs));
    CHECK_THROWS_AS(Profile(g, {prefs[0], prefs[1]}), ParameterError);

    auto sub = p.restricted({"a", "b"});
    CHECK(sub.agents() == 3);
    CHECK(render_preorder(sub.pref(0)) == "a|b");
    CHECK(render_preorder(sub.pref(1)) == "b|a");
    CHECK(render_preorder(sub.pref(2)) == "a|b");
    CHECK(sub.pref(0).ground() == sub.pref(2).ground());
}

TEST_CASE("profile text parsing") {
    auto g = abc();
    std::istringstream in("# three agents\na|b|c\n\nb c|a\n a | b | c \n");
    auto p = parse_profile(g, in, 3);
    CHECK(p.agents() == 3);
    CHECK(render_preorder(p.pref(1)) == "b c|a");
    CHECK(render_preorder(p.pref(2)) == "a|b|c");

    std::istringstream two("a|b|c\nb|c|a\n");
    CHECK_THROWS_AS(parse_profile(g, two, 3), ParseError);
    std::istringstream bad("a|b|c\nnope\na|b|c\n");
    CHECK_THROWS_AS(parse_profile(g, bad, 3), ParseError);
}
