// Agenda formation and manipulation checks: sovereignty certificates, the
// parallel and sequential composition checkers, natural reinstantiation
// schemes, and the catalog-wide implication audit. Every frozen verdict is
// re-derived by an independently coded naive loop and every frozen witness is
// replayed through the public evaluation API.

#include "doctest.h"

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "medvote/agenda.hpp"
#include "medvote/meta.hpp"
#include "medvote/sum.hpp"

using namespace medvote;

namespace {

GroundPtr g3() {
    static GroundPtr g = GroundSet::parse("a,b,c");
    return g;
}

std::vector<std::string> split_trim(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, sep)) {
        const size_t from = part.find_first_not_of(" \t");
        const size_t to = part.find_last_not_of(" \t");
        out.push_back(from == std::string::npos ? std::string()
                                                : part.substr(from, to - from + 1));
    }
    return out;
}

unsigned parse_agenda_mask(const GroundPtr& g, const std::string& labels) {
    unsigned mask = 0;
    for (const auto& label : split_trim(labels, ','))
        mask |= 1u << g->index(label);
    return mask;
}

std::vector<unsigned> parse_proposals(const GroundPtr& g, const std::string& text) {
    std::vector<unsigned> out;
    for (const auto& part : split_trim(text, ';'))
        out.push_back(parse_agenda_mask(g, part));
    return out;
}

std::vector<std::string> agenda_labels(const GroundPtr& g, unsigned mask) {
    std::vector<std::string> out;
    for (int i = 0; i < g->size(); ++i)
        if (mask >> i & 1u) out.push_back(g->label(i));
    return out;
}

// Geodesic comparison coded straight off the distance table: u is weakly
// better than v around peak iff u sits on a shortest path from peak to v.
bool on_geodesic(const SumStructure& s, int peak, int u, int v) {
    return s.distance(peak, u) + s.distance(u, v) == s.distance(peak, v);
}

bool one_sided_naive(const SumStructure& s, int peak, int u, int v) {
    if (u == v) return false;
    return on_geodesic(s, peak, u, v) != on_geodesic(s, peak, v, u);
}

void expect_witness(const CheckReport& rep,
                    const std::map<std::string, std::string>& expected) {
    CHECK(rep.witness == expected);
    if (rep.witness != expected) {
        for (const auto& [k, v] : rep.witness)
            MESSAGE("actual    ", k, " = ", v);
        for (const auto& [k, v] : expected)
            MESSAGE("expected  ", k, " = ", v);
    }
}

// Independent quantifier loop for the sequential check, given any rule
// family: all nested agenda pairs, all full profiles, all agents, geodesic
// one-sidedness straight from the distance table.
std::string naive_amp_s(const GroundPtr& g, int n,
                        const std::function<const Rule&(unsigned)>& family) {
    const Lattice& lat = Lattice::of(g);
    const SumStructure& s = SumStructure::of(g);
    const int m = g->size();
    long long total = 1;
    for (int i = 0; i < n; ++i) total *= lat.count();
    for (unsigned d = 1; d < (1u << m); ++d)
        for (unsigned c = 1; c < (1u << m); ++c) {
            if (c & ~d) continue;
            const Rule& rc = family(c);
            const Rule& rd = family(d);
            const auto labels_c = agenda_labels(g, c);
            const auto labels_d = agenda_labels(g, d);
            for (long long p = 0; p < total; ++p) {
                long long q = p;
                std::vector<int> ids(static_cast<size_t>(n));
                for (int i = n - 1; i >= 0; --i) {
                    ids[static_cast<size_t>(i)] = static_cast<int>(q % lat.count());
                    q /= lat.count();
                }
                std::vector<int> ids_c, ids_d;
                for (int id : ids) {
                    ids_c.push_back(rc.lattice().id_of(restrict(lat.element(id), labels_c)));
                    ids_d.push_back(rd.lattice().id_of(restrict(lat.element(id), labels_d)));
                }
                const int x = s.id_of(rc.lattice().element(rc.eval_ids(ids_c)));
                const int y =
                    s.id_of(restrict(rd.lattice().element(rd.eval_ids(ids_d)), labels_c));
                if (x == y) continue;
                for (int i = 0; i < n; ++i) {
                    const int peak = s.id_of(lat.element(ids[static_cast<size_t>(i)]));
                    if (one_sided_naive(s, peak, x, y))
                        return "agent " + std::to_string(i + 1) + " profile " +
                               render_profile_ids(lat, ids) + " agendas " +
                               std::to_string(c) + "<=" + std::to_string(d);
                }
            }
        }
    return "";
}

} // namespace

TEST_CASE("union agenda rule evaluates and validates proposals") {
    const AgendaRule u = union_agenda_rule(g3(), 3);
    CHECK(u.name() == "union");
    CHECK(u.agents() == 3);
    CHECK(u.eval({1u, 2u, 2u}) == 3u);
    CHECK(u.eval({7u, 1u, 1u}) == 7u);
    CHECK(u.eval({4u, 4u, 4u}) == 4u);
    CHECK_THROWS_AS((void)u.eval({1u, 2u}), ParameterError);           // arity
    CHECK_THROWS_AS((void)u.eval({1u, 0u, 2u}), EmptyAgenda);         // empty proposal
    CHECK_THROWS_AS((void)u.eval({1u, 8u, 2u}), ParameterError);      // outside ground
    CHECK_THROWS_AS(AgendaRule("broken", g3(), 0, [](const std::vector<unsigned>&) {
                        return 1u;
                    }),
                    ParameterError);

    // Misbehaving evaluation functions are caught at eval time.
    const AgendaRule empty_out("empty-out", g3(), 3,
                               [](const std::vector<unsigned>&) { return 0u; });
    CHECK_THROWS_AS((void)empty_out.eval({1u, 1u, 1u}), EmptyAgenda);
    const AgendaRule wild_out("wild-out", g3(), 3,
                              [](const std::vector<unsigned>&) { return 9u; });
    CHECK_THROWS_AS((void)wild_out.eval({1u, 1u, 1u}), ParameterError);
}

TEST_CASE("sovereignty certificate covers every nonempty agenda") {
    const CheckReport rep = check_sovereign(union_agenda_rule(g3(), 3));
    CHECK(rep.axiom == "sovereign");
    CHECK(rep.rule == "union");
    CHECK(rep.verdict == "holds");
    CHECK(rep.scope == "exhaustive(m=3,n=3)");
    CHECK(rep.domain_size == 343 * 7);
    expect_witness(rep, {
                            {"agenda a", "a ; a ; a"},
                            {"agenda a,b", "a,b ; a,b ; a,b"},
                            {"agenda a,b,c", "a,b,c ; a,b,c ; a,b,c"},
                            {"agenda a,c", "a,c ; a,c ; a,c"},
                            {"agenda b", "b ; b ; b"},
                            {"agenda b,c", "b,c ; b,c ; b,c"},
                            {"agenda c", "c ; c ; c"},
                        });
    // Replay: every certified proposal profile really lands on its agenda.
    const AgendaRule u = union_agenda_rule(g3(), 3);
    for (const auto& [key, proposals] : rep.witness) {
        const unsigned target = parse_agenda_mask(g3(), key.substr(std::string("agenda ").size()));
        CHECK(u.eval(parse_proposals(g3(), proposals)) == target);
    }
}

TEST_CASE("sovereignty scan certifies four alternatives and rejects five") {
    const GroundPtr g4 = GroundSet::parse("a,b,c,d");
    const CheckReport rep = check_sovereign(union_agenda_rule(g4, 3));
    CHECK(rep.verdict == "holds");
    CHECK(rep.scope == "exhaustive(m=4,n=3)");
    CHECK(rep.domain_size == 3375LL * 15);
    CHECK(rep.witness.size() == 15);

    CHECK_THROWS_AS((void)check_sovereign(union_agenda_rule(GroundSet::parse("a,b,c,d,e"), 3)),
                    GroundTooLarge);
    CHECK_THROWS_AS((void)check_sovereign(union_agenda_rule(g3(), 2)), ParameterError);
}

TEST_CASE("a constant agenda rule fails sovereignty with the unreached list") {
    const AgendaRule full_only("full-only", g3(), 3,
                               [](const std::vector<unsigned>&) { return 7u; });
    const CheckReport rep = check_sovereign(full_only);
    CHECK(rep.verdict == "fails");
    expect_witness(rep, {{"unreached", "a; b; a,b; c; a,c; b,c"}});
    // Replay: none of the listed agendas is the rule's constant output.
    for (const auto& part : split_trim(rep.witness.at("unreached"), ';'))
        CHECK(full_only.eval({1u, 2u, 4u}) != parse_agenda_mask(g3(), part));
}

TEST_CASE("parallel composition validates its two parts") {
    CHECK_THROWS_AS(PafeRule("mismatch", union_agenda_rule(g3(), 3),
                             dictator(GroundSet::parse("a,b"), 3, 1)),
                    ParameterError);
    CHECK_THROWS_AS(PafeRule("mismatch", union_agenda_rule(g3(), 3), dictator(g3(), 4, 1)),
                    ParameterError);
    CHECK_THROWS_AS(PafeRule("null-entangled", union_agenda_rule(g3(), 3), dictator(g3(), 3, 1),
                             nullptr),
                    ParameterError);

    const PafeRule plain("plain", union_agenda_rule(g3(), 3), dictator(g3(), 3, 1));
    CHECK(plain.decomposable());
    CHECK(plain.agenda_out({1u, 2u, 4u}) == 7u);
    CHECK(plain.preference_out({1u, 1u, 1u}, {5, 0, 0}) == 5);

    const PafeRule double_rule = entangled_pafe_double(g3(), 3);
    CHECK_FALSE(double_rule.decomposable());
    // Even total popcount routes to agent 1, odd to agent 2.
    CHECK(double_rule.preference_out({1u, 1u, 2u}, {5, 9, 0}) == 9);  // 3 bits
    CHECK(double_rule.preference_out({3u, 1u, 2u}, {5, 9, 0}) == 5);  // 4 bits
}

TEST_CASE("every decomposable catalog composition passes the parallel check") {
    for (const auto& rule : standard_catalog(g3(), 3)) {
        const CheckReport rep = check_AMP_P(rule);
        CAPTURE(rule.name());
        CHECK(rep.axiom == "AMP_P");
        CHECK(rep.rule == rule.name());
        CHECK(rep.verdict == "holds");
        CHECK(rep.scope == "exhaustive(m=3,n=3)");
        CHECK(rep.domain_size == 103775295LL);
        CHECK(rep.witness.empty());
    }
}

TEST_CASE("decomposable compositions keep restrictions literally equal") {
    // The reason the parallel check holds for every decomposable composition:
    // both outputs are the same full preorder, so the restrictions coincide.
    // Verified directly on a sample of nested proposal pairs and profiles.
    const Lattice& lat = Lattice::of(g3());
    const SumStructure& s = SumStructure::of(g3());
    const Rule rule = borda(g3(), 3);
    const PafeRule pafe("borda", union_agenda_rule(g3(), 3), rule);
    for (unsigned c = 1; c < 8; ++c)
        for (unsigned d = 1; d < 8; ++d) {
            if (c & ~d) continue;
            const auto labels = agenda_labels(g3(), c);
            for (int p = 0; p < 2197; p += 7) {
                std::vector<int> ids = {p % 13, (p / 13) % 13, (p / 169) % 13};
                const std::vector<unsigned> first(3, c), second(3, d);
                const int x = pafe.preference_out(first, ids);
                const int y = pafe.preference_out(second, ids);
                CHECK(s.id_of(restrict(lat.element(x), labels)) ==
                      s.id_of(restrict(lat.element(y), labels)));
            }
        }
}

TEST_CASE("the entangled double fails the parallel check with a replayable witness") {
    const PafeRule pafe = entangled_pafe_double(g3(), 3);
    const Lattice& lat = Lattice::of(g3());
    const SumStructure& s = SumStructure::of(g3());

    const auto replay = [&](const CheckReport& rep) {
        REQUIRE(rep.verdict == "fails");
        const auto first = parse_proposals(g3(), rep.witness.at("proposals"));
        const auto second = parse_proposals(g3(), rep.witness.at("proposals2"));
        const unsigned agenda_c = parse_agenda_mask(g3(), rep.witness.at("agendaC"));
        const unsigned agenda_d = parse_agenda_mask(g3(), rep.witness.at("agendaD"));
        CHECK(pafe.agenda_out(first) == agenda_c);
        CHECK(pafe.agenda_out(second) == agenda_d);
        CHECK((agenda_c & ~agenda_d) == 0u);
        const auto ids = parse_profile_ids(lat, rep.witness.at("profile"));
        const auto labels = agenda_labels(g3(), agenda_c);
        const int x = s.id_of(restrict(lat.element(pafe.preference_out(first, ids)), labels));
        const int y = s.id_of(restrict(lat.element(pafe.preference_out(second, ids)), labels));
        CHECK(s.render(x) == rep.witness.at("restriction"));
        CHECK(s.render(y) == rep.witness.at("restriction2"));
        CHECK(x != y);
        const int agent = std::stoi(rep.witness.at("agent"));
        const int peak = s.id_of(lat.element(ids[static_cast<size_t>(agent - 1)]));
        CHECK(one_sided_naive(s, peak, x, y));
        const bool x_better = on_geodesic(s, peak, x, y);
        CHECK(rep.witness.at("preferred") == (x_better ? "restriction" : "restriction2"));
    };

    SUBCASE("default mode: same-proposal pairs already expose the parity routing") {
        const CheckReport rep = check_AMP_P(pafe);
        CHECK(rep.scope ==
              "exhaustive-preferences(m=3,n=3)+sampled-proposals(seed=42,samples=20000)");
        CHECK(rep.domain_size == 103775295LL);
        expect_witness(rep, {
                                {"agendaC", "a,b"},
                                {"agendaD", "a,b,c"},
                                {"agent", "1"},
                                {"preferred", "restriction"},
                                {"profile", "a b c ; a c|b ; a b c"},
                                {"proposals", "a,b ; a,b ; a,b"},
                                {"proposals2", "a,b,c ; a,b,c ; a,b,c"},
                                {"restriction", "a b"},
                                {"restriction2", "a|b"},
                            });
        replay(rep);
    }

    SUBCASE("exhaustive mode scans all nested proposal-profile pairs") {
        CheckOptions opt;
        opt.mode = CheckMode::Exhaustive;
        const CheckReport rep = check_AMP_P(pafe, opt);
        CHECK(rep.scope == "exhaustive(m=3,n=3)");
        CHECK(rep.domain_size == 612455493LL);
        expect_witness(rep, {
                                {"agendaC", "a,b"},
                                {"agendaD", "a,b"},
                                {"agent", "1"},
                                {"preferred", "restriction2"},
                                {"profile", "a b c ; a c|b ; a b c"},
                                {"proposals", "a ; a ; b"},
                                {"proposals2", "a ; a ; a,b"},
                                {"restriction", "a|b"},
                                {"restriction2", "a b"},
                            });
        replay(rep);
    }
}

TEST_CASE("an entangled wrapper that ignores proposals stays inconclusive until exhaustive") {
    const Rule base = dictator(g3(), 3, 1);
    const PafeRule wrapped("wrapped-dictator", union_agenda_rule(g3(), 3), base,
                           [base](const std::vector<unsigned>&, const std::vector<int>& ids) {
                               return base.eval_ids(ids);
                           });
    CHECK_FALSE(wrapped.decomposable());

    const CheckReport sampled = check_AMP_P(wrapped);
    CHECK(sampled.verdict == "inconclusive-sampled");
    CHECK(sampled.scope ==
          "exhaustive-preferences(m=3,n=3)+sampled-proposals(seed=42,samples=20000)");

    CheckOptions opt;
    opt.mode = CheckMode::Exhaustive;
    const CheckReport full = check_AMP_P(wrapped, opt);
    CHECK(full.verdict == "holds");
    CHECK(full.scope == "exhaustive(m=3,n=3)");
}

TEST_CASE("manipulation checks reject large grounds and wrong agent counts") {
    const GroundPtr g4 = GroundSet::parse("a,b,c,d");
    CHECK_THROWS_AS((void)check_AMP_P(comajority(g4, 3)), GroundTooLarge);
    CHECK_THROWS_AS((void)check_AMP_P(dictator(g3(), 4, 1)), ParameterError);
    CHECK_THROWS_AS((void)check_AMP_S(comajority(g4, 3)), GroundTooLarge);
    CHECK_THROWS_AS((void)check_AMP_S(dictator(g3(), 4, 1)), ParameterError);
    CHECK_THROWS_AS((void)implication_suite_prop2(g4, 3), GroundTooLarge);
    CHECK_THROWS_AS((void)implication_suite_prop2(g3(), 2), ParameterError);
}

TEST_CASE("sequential composition caches and validates its per-agenda family") {
    SafeRule safe = make_safe_uniform(g3(), 3, "quota:q=2", *natural_scheme(quota_rule(g3(), 3, 2)));
    CHECK(safe.name() == "quota:q=2");
    CHECK(safe.agents() == 3);
    CHECK(safe.agenda_part().name() == "union");

    const Rule& on_ab = safe.family(3u);
    CHECK(on_ab.ground()->labels() == std::vector<std::string>{"a", "b"});
    CHECK(on_ab.agents() == 3);
    CHECK(&safe.family(3u) == &on_ab); // cached

    CHECK_THROWS_AS((void)safe.family(0u), EmptyAgenda);
    CHECK_THROWS_AS((void)safe.family(8u), ParameterError);

    const SafeRule wrong_ground("bad", union_agenda_rule(g3(), 3),
                                [](const GroundPtr&) { return borda(g3(), 3); });
    CHECK_NOTHROW((void)wrong_ground.family(7u)); // full agenda matches by luck
    CHECK_THROWS_AS((void)wrong_ground.family(3u), ParameterError);

    const SafeRule wrong_agents("bad-agents", union_agenda_rule(g3(), 3),
                                [](const GroundPtr& sub) { return borda(sub, 4); });
    CHECK_THROWS_AS((void)wrong_agents.family(7u), ParameterError);

    CHECK_THROWS_AS(SafeRule("no-scheme", union_agenda_rule(g3(), 3), nullptr), ParameterError);
}

TEST_CASE("natural reinstantiation schemes cover the catalog heads") {
    SUBCASE("parameter-preserving heads rebuild on the sub-ground") {
        for (const char* spec : {"comajority", "stalemate", "borda", "un", "leadingpair",
                                 "quota:q=2", "quota:q=3", "dictator:i=2", "invdictator:i=1",
                                 "bordaproj:i=1"}) {
            const Rule rule = parse_rule_spec(g3(), 3, spec);
            auto scheme = natural_scheme(rule);
            REQUIRE_MESSAGE(scheme.has_value(), spec);
            const GroundPtr sub = g3()->subset({0, 1});
            const Rule on_sub = (*scheme)(sub);
            CHECK(on_sub.name() == rule.name());
            CHECK(*on_sub.ground() == *sub);
            CHECK(on_sub.agents() == 3);
        }
    }

    SUBCASE("a constant rule restricts its fixed output") {
        const Rule rule = parse_rule_spec(g3(), 3, "constant:R=a|b|c");
        auto scheme = natural_scheme(rule);
        REQUIRE(scheme.has_value());
        const GroundPtr sub = g3()->subset({1, 2}); // {b, c}
        const Rule on_sub = (*scheme)(sub);
        const Lattice& sublat = Lattice::of(sub);
        for (int p = 0; p < sublat.count(); ++p)
            CHECK(render_preorder(sublat.element(on_sub.eval_ids({p, 0, 0}))) == "b|c");
    }

    SUBCASE("rules anchored to one alternative have no total scheme") {
        CHECK_FALSE(natural_scheme(lex_top_rule(g3(), 3, "a")).has_value());
        CHECK_FALSE(natural_scheme(Rule("mystery", g3(), 3,
                                        [](const std::vector<int>& ids) { return ids[0]; }))
                        .has_value());
    }
}

TEST_CASE("the reinstantiated target-match rule adapts its hidden part per agenda") {
    const Rule original = target_match_rule(g3(), 3, 1, parse_preorder(g3(), "b|c|a"), {"a"});
    auto scheme = natural_scheme(original);
    REQUIRE(scheme.has_value());

    SUBCASE("on the full ground it reproduces the original rule") {
        const Rule rebuilt = (*scheme)(g3());
        for (int p = 0; p < 2197; ++p) {
            const std::vector<int> ids = {p % 13, (p / 13) % 13, (p / 169) % 13};
            CHECK(rebuilt.eval_ids(ids) == original.eval_ids(ids));
        }
    }

    SUBCASE("when the hidden part leaves the agenda, matching means full agreement") {
        const GroundPtr sub = g3()->subset({1, 2}); // {b, c}; hidden {a} is gone
        const Rule on_sub = (*scheme)(sub);
        const Lattice& sublat = Lattice::of(sub);
        const int target = sublat.id_of(parse_preorder(sub, "b|c"));
        for (int r1 = 0; r1 < sublat.count(); ++r1)
            for (int r2 = 0; r2 < sublat.count(); ++r2)
                for (int r3 = 0; r3 < sublat.count(); ++r3) {
                    const int out = on_sub.eval_ids({r1, r2, r3});
                    if (r2 == target || r3 == target)
                        CHECK(out == target);
                    else
                        CHECK(out == r1);
                }
    }

    SUBCASE("when the agenda sits inside the hidden part's complement boundary") {
        // On {a, b} the hidden part is {a}, so only the {b}-coordinates are
        // compared; those are trivially equal, making the rule constant at
        // the restricted target.
        const GroundPtr sub = g3()->subset({0, 1});
        const Rule on_sub = (*scheme)(sub);
        const Lattice& sublat = Lattice::of(sub);
        const int target = sublat.id_of(parse_preorder(sub, "b|a"));
        for (int r1 = 0; r1 < sublat.count(); ++r1)
            for (int r2 = 0; r2 < sublat.count(); ++r2)
                CHECK(on_sub.eval_ids({r1, r2, 0}) == target);
    }
}

TEST_CASE("bare sequential checks: independence decides whether the family exists") {
    const auto catalog = standard_catalog(g3(), 3);
    for (const auto& rule : catalog) {
        CAPTURE(rule.name());
        const bool iia = check_IIA(rule).holds();
        if (iia) {
            const CheckReport rep = check_AMP_S(rule);
            CHECK(rep.axiom == "AMP_S");
            CHECK(rep.verdict == "holds");
            CHECK(rep.scope == "exhaustive(m=3,n=3)");
            CHECK(rep.domain_size == 125229LL);
            CHECK(rep.witness.empty());
        } else {
            CHECK_THROWS_AS((void)check_AMP_S(rule), FamilyUndefined);
            try {
                (void)check_AMP_S(rule);
            } catch (const FamilyUndefined& e) {
                const std::string what = e.what();
                CHECK(what.find(rule.name()) != std::string::npos);
                CHECK(what.find("a,b") != std::string::npos); // first conflicting agenda
            }
        }
    }
}

TEST_CASE("independent rules have literally coinciding nested restrictions") {
    // Why the bare sequential check holds whenever the family exists: the
    // family value at a restricted profile is the restricted full output, and
    // restriction composes, so both compared items are the same element.
    const Lattice& lat = Lattice::of(g3());
    const SumStructure& s = SumStructure::of(g3());
    for (const char* spec : {"stalemate", "dictator:i=1", "dictator:i=2", "invdictator:i=1",
                             "constant:R=a|b|c"}) {
        const Rule rule = parse_rule_spec(g3(), 3, spec);
        for (unsigned d = 1; d < 8; ++d)
            for (unsigned c = 1; c < 8; ++c) {
                if (c & ~d) continue;
                const auto labels_c = agenda_labels(g3(), c);
                const auto labels_d = agenda_labels(g3(), d);
                for (int p = 0; p < 2197; p += 5) {
                    const std::vector<int> ids = {p % 13, (p / 13) % 13, (p / 169) % 13};
                    const TotalPreorder out = lat.element(rule.eval_ids(ids));
                    CHECK(s.id_of(restrict(out, labels_c)) ==
                          s.id_of(restrict(restrict(out, labels_d), labels_c)));
                }
            }
    }
}

TEST_CASE("scheme-based sequential checks fail for every reinstantiable non-independent rule") {
    struct Expected {
        const char* spec;
        std::map<std::string, std::string> witness;
    };
    const std::vector<Expected> expected = {
        {"comajority",
         {{"agendaC", "a,b"},
          {"agendaD", "a,b,c"},
          {"agent", "1"},
          {"output_c", "a|b"},
          {"output_dc", "a b"},
          {"preferred", "output_dc"},
          {"profile", "a b c ; a c|b ; a|b c"}}},
        {"quota:q=2",
         {{"agendaC", "a,b"},
          {"agendaD", "a,b,c"},
          {"agent", "1"},
          {"output_c", "a|b"},
          {"output_dc", "a b"},
          {"preferred", "output_dc"},
          {"profile", "a b c ; a c|b ; a|b c"}}},
        {"quota:q=3",
         {{"agendaC", "a,b"},
          {"agendaD", "a,b,c"},
          {"agent", "1"},
          {"output_c", "a|b"},
          {"output_dc", "a b"},
          {"preferred", "output_c"},
          {"profile", "a c|b ; a c|b ; a|b c"}}},
        {"borda",
         {{"agendaC", "a,b"},
          {"agendaD", "a,b,c"},
          {"agent", "1"},
          {"output_c", "a b"},
          {"output_dc", "b|a"},
          {"preferred", "output_c"},
          {"profile", "a b c ; a c|b ; b|a c"}}},
        {"bordaproj:i=1",
         {{"agendaC", "a,b"},
          {"agendaD", "a,b,c"},
          {"agent", "1"},
          {"output_c", "a b"},
          {"output_dc", "a|b"},
          {"preferred", "output_c"},
          {"profile", "a b c ; a b|c ; a c|b"}}},
        {"remark3:i=1,Rstar=b|c|a,Bstar=a",
         {{"agendaC", "a,b"},
          {"agendaD", "a,b,c"},
          {"agent", "1"},
          {"output_c", "b|a"},
          {"output_dc", "a b"},
          {"preferred", "output_dc"},
          {"profile", "a b c ; a b c ; a b c"}}},
        {"un",
         {{"agendaC", "a,b"},
          {"agendaD", "a,b,c"},
          {"agent", "1"},
          {"output_c", "a|b"},
          {"output_dc", "a b"},
          {"preferred", "output_c"},
          {"profile", "a c|b ; a c|b ; a|b c"}}},
        {"leadingpair",
         {{"agendaC", "a,b"},
          {"agendaD", "a,b,c"},
          {"agent", "1"},
          {"output_c", "a|b"},
          {"output_dc", "a b"},
          {"preferred", "output_dc"},
          {"profile", "a b c ; a c|b ; a|b c"}}},
    };

    const Lattice& lat = Lattice::of(g3());
    const SumStructure& s = SumStructure::of(g3());
    for (const auto& exp : expected) {
        CAPTURE(exp.spec);
        const Rule rule = parse_rule_spec(g3(), 3, exp.spec);
        auto scheme = natural_scheme(rule);
        REQUIRE(scheme.has_value());
        const SafeRule safe = make_safe_uniform(g3(), 3, rule.name(), std::move(*scheme));
        const CheckReport rep = check_AMP_S(safe);
        CHECK(rep.axiom == "AMP_S");
        CHECK(rep.rule == rule.name());
        CHECK(rep.verdict == "fails");
        CHECK(rep.scope == "exhaustive(m=3,n=3)");
        CHECK(rep.domain_size == 125229LL);
        expect_witness(rep, exp.witness);

        // Replay through the family itself.
        const unsigned agenda_c = parse_agenda_mask(g3(), rep.witness.at("agendaC"));
        const unsigned agenda_d = parse_agenda_mask(g3(), rep.witness.at("agendaD"));
        const auto labels_c = agenda_labels(g3(), agenda_c);
        const auto labels_d = agenda_labels(g3(), agenda_d);
        const auto ids = parse_profile_ids(lat, rep.witness.at("profile"));
        const Rule& rc = safe.family(agenda_c);
        const Rule& rd = safe.family(agenda_d);
        std::vector<int> ids_c, ids_d;
        for (int id : ids) {
            ids_c.push_back(rc.lattice().id_of(restrict(lat.element(id), labels_c)));
            ids_d.push_back(rd.lattice().id_of(restrict(lat.element(id), labels_d)));
        }
        const int x = s.id_of(rc.lattice().element(rc.eval_ids(ids_c)));
        const int y = s.id_of(restrict(rd.lattice().element(rd.eval_ids(ids_d)), labels_c));
        CHECK(s.render(x) == rep.witness.at("output_c"));
        CHECK(s.render(y) == rep.witness.at("output_dc"));
        CHECK(x != y);
        const int agent = std::stoi(rep.witness.at("agent"));
        const int peak = s.id_of(lat.element(ids[static_cast<size_t>(agent - 1)]));
        CHECK(one_sided_naive(s, peak, x, y));
        CHECK(rep.witness.at("preferred") ==
              (on_geodesic(s, peak, x, y) ? std::string("output_c") : std::string("output_dc")));
    }
}

TEST_CASE("naive quantifier loop agrees with the sequential checker on every verdict") {
    // Bare families for the independent rules.
    for (const char* spec : {"stalemate", "dictator:i=1", "dictator:i=2", "invdictator:i=1",
                             "constant:R=a|b|c"}) {
        CAPTURE(spec);
        const Rule rule = parse_rule_spec(g3(), 3, spec);
        auto scheme = natural_scheme(rule);
        REQUIRE(scheme.has_value());
        const SafeRule safe = make_safe_uniform(g3(), 3, rule.name(), std::move(*scheme));
        const std::string naive =
            naive_amp_s(g3(), 3, [&safe](unsigned mask) -> const Rule& { return safe.family(mask); });
        CHECK(naive.empty());
        CHECK(check_AMP_S(rule).holds());
    }
    // Natural schemes for the reinstantiable non-independent rules.
    for (const char* spec : {"comajority", "quota:q=2", "quota:q=3", "borda", "bordaproj:i=1",
                             "remark3:i=1,Rstar=b|c|a,Bstar=a", "un", "leadingpair"}) {
        CAPTURE(spec);
        const Rule rule = parse_rule_spec(g3(), 3, spec);
        auto scheme = natural_scheme(rule);
        REQUIRE(scheme.has_value());
        const SafeRule safe = make_safe_uniform(g3(), 3, rule.name(), std::move(*scheme));
        const std::string naive =
            naive_amp_s(g3(), 3, [&safe](unsigned mask) -> const Rule& { return safe.family(mask); });
        CAPTURE(naive);
        CHECK_FALSE(naive.empty());
        CHECK(check_AMP_S(safe).fails());
    }
}

TEST_CASE("an agenda rule that never shrinks the table trivializes the sequential check") {
    // With a constant full agenda the only nested pair is (full, full), so
    // even a reinstantiated score rule passes: manipulation needs a real
    // agenda change.
    const AgendaRule full_only("full-only", g3(), 3,
                               [](const std::vector<unsigned>&) { return 7u; });
    const SafeRule safe("borda-full-only", full_only, *natural_scheme(borda(g3(), 3)));
    const CheckReport rep = check_AMP_S(safe);
    CHECK(rep.verdict == "holds");
    CHECK(rep.domain_size == 6591LL); // one agenda pair, all profiles, all agents
}

TEST_CASE("catalog audit: independence implies the sequential check implies projection") {
    const CheckReport rep = implication_suite_prop2(g3(), 3);
    CHECK(rep.axiom == "prop2");
    CHECK(rep.rule == "catalog");
    CHECK(rep.verdict == "holds");
    CHECK(rep.scope == "exhaustive(m=3,n=3)");
    CHECK(rep.domain_size == 14);
    expect_witness(
        rep,
        {
            {"anomalies independence->sequential", "(none)"},
            {"anomalies sequential->projective", "(none)"},
            {"borda", "IIA=fails AMP_S=fails IIAP=fails"},
            {"bordaproj:i=1", "IIA=fails AMP_S=fails IIAP=holds"},
            {"comajority", "IIA=fails AMP_S=fails IIAP=fails"},
            {"constant:R=a|b|c", "IIA=holds AMP_S=holds IIAP=holds"},
            {"dictator:i=1", "IIA=holds AMP_S=holds IIAP=holds"},
            {"dictator:i=2", "IIA=holds AMP_S=holds IIAP=holds"},
            {"invdictator:i=1", "IIA=holds AMP_S=holds IIAP=holds"},
            {"leadingpair", "IIA=fails AMP_S=fails IIAP=fails"},
            {"lextop:x=a", "IIA=fails AMP_S=undefined(no scheme) IIAP=fails"},
            {"quota:q=2", "IIA=fails AMP_S=fails IIAP=fails"},
            {"quota:q=3", "IIA=fails AMP_S=fails IIAP=holds"},
            {"remark3 assessment",
             "computed AMP_S=fails, IIAP=fails: consistent with the sequential->projective "
             "implication; an AMP_S-positive reading of this rule would contradict it"},
            {"remark3:i=1,Rstar=b|c|a,Bstar=a", "IIA=fails AMP_S=fails IIAP=fails"},
            {"stalemate", "IIA=holds AMP_S=holds IIAP=holds"},
            {"un", "IIA=fails AMP_S=fails IIAP=holds"},
        });
}

TEST_CASE("rule-level parallel check wrapper matches the explicit composition") {
    const Rule rule = quota_rule(g3(), 3, 2);
    const CheckReport via_rule = check_AMP_P(rule);
    const CheckReport via_pafe =
        check_AMP_P(PafeRule(rule.name(), union_agenda_rule(g3(), 3), rule));
    CHECK(via_rule.verdict == via_pafe.verdict);
    CHECK(via_rule.rule == via_pafe.rule);
    CHECK(via_rule.domain_size == via_pafe.domain_size);
    CHECK(via_rule.scope == via_pafe.scope);
}
