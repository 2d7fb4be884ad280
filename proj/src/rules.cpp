#include "medvote/rules.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <sstream>

namespace medvote {

std::string render_profile_ids(const Lattice& lat, const std::vector<int>& ids) {
    std::string out;
    for (size_t i = 0; i < ids.size(); ++i) {
        if (i) out += " ; ";
        out += render_preorder(lat.element(ids[i]));
    }
    return out;
}

std::vector<int> parse_profile_ids(const Lattice& lat, const std::string& text) {
    std::vector<int> ids;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t sep = text.find(';', pos);
        std::string part = text.substr(pos, sep == std::string::npos ? std::string::npos
                                                                     : sep - pos);
        size_t lo = part.find_first_not_of(" \t");
        if (lo == std::string::npos)
            throw ParseError("empty entry in profile '" + text + "'");
        size_t hi = part.find_last_not_of(" \t");
        ids.push_back(lat.id_of(parse_preorder(lat.ground(), part.substr(lo, hi - lo + 1))));
        if (sep == std::string::npos) break;
        pos = sep + 1;
    }
    return ids;
}

namespace {

int checked_agent(int agents, int agent) {
    if (agent < 1 || agent > agents) {
        throw ParameterError("agent index " + std::to_string(agent) +
                             " out of range 1.." + std::to_string(agents));
    }
    return agent;
}

// Bitmask over irreducibles: bit k set <=> element is contained in the k-th
// irreducible bipartition.
std::vector<unsigned> subset_signatures(const Lattice& lat) {
    const auto& irr = lat.irreducible_ids();
    std::vector<unsigned> sig(static_cast<size_t>(lat.count()), 0u);
    for (int e = 0; e < lat.count(); ++e)
        for (size_t k = 0; k < irr.size(); ++k)
            if (lat.leq(e, irr[k])) sig[static_cast<size_t>(e)] |= 1u << k;
    return sig;
}

void check_family(const FilterFamily& family) {
    if (!family.ground) throw ParameterError("filter family has no ground set");
    if (family.agents < 1) throw ParameterError("filter family needs at least one agent");
    const auto& irr = Lattice::of(family.ground).irreducible_ids();
    if (family.filters.size() != irr.size()) {
        throw ParameterError("filter family size " + std::to_string(family.filters.size()) +
                             " does not match the " + std::to_string(irr.size()) +
                             " bipartitions");
    }
    for (const auto& f : family.filters)
        if (f.agents() != family.agents)
            throw ParameterError("filter agent count mismatch inside family");
}

// Selected bipartition ids for one profile, by filter membership.
std::vector<int> selected_irreducibles(const Lattice& lat,
                                       const std::vector<unsigned>& sig,
                                       const std::vector<OrderFilter>& filters,
                                       const std::vector<int>& ids) {
    const auto& irr = lat.irreducible_ids();
    std::vector<int> chosen;
    for (size_t k = 0; k < irr.size(); ++k) {
        Coalition c = 0;
        for (size_t i = 0; i < ids.size(); ++i)
            if (sig[static_cast<size_t>(ids[i])] >> k & 1u) c |= 1u << i;
        if (filters[k].member(c)) chosen.push_back(irr[k]);
    }
    return chosen;
}

// Odometer over all profiles (count^agents) in lexicographic order with
// agent 1 most significant, calling fn with the id vector.
template <typename Fn>
void for_profiles(int count, int agents, Fn&& fn) {
    std::vector<int> ids(static_cast<size_t>(agents), 0);
    while (true) {
        fn(ids);
        int pos = agents - 1;
        while (pos >= 0) {
            if (++ids[static_cast<size_t>(pos)] < count) break;
            ids[static_cast<size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) return;
    }
}

} // namespace

// ---------------------------------------------------------------------------
// OrderFilter

OrderFilter::OrderFilter(int agents, std::vector<Coalition> basis)
    : agents_(agents), basis_(std::move(basis)) {}

OrderFilter OrderFilter::from_coalitions(int agents, std::vector<Coalition> members) {
    if (agents < 1 || agents > 31) throw ParameterError("unsupported agent count");
    const Coalition everyone = (1u << agents) - 1u;
    for (Coalition s : members)
        if (s & ~everyone)
            throw ParameterError("coalition mentions an agent beyond the agent count");
    // Keep only the minimal members.
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    std::vector<Coalition> minimal;
    for (Coalition s : members) {
        bool dominated = false;
        for (Coalition t : members)
            if (t != s && (t & s) == t) { dominated = true; break; }
        if (!dominated) minimal.push_back(s);
    }
    return OrderFilter(agents, std::move(minimal));
}

OrderFilter OrderFilter::threshold(int agents, int quota) {
    if (agents < 1 || agents > 31) throw ParameterError("unsupported agent count");
    if (quota <= 0) return OrderFilter(agents, {0u});
    if (quota > agents) return OrderFilter(agents, {});
    std::vector<Coalition> basis;
    for (Coalition s = 0; s < (1u << agents); ++s)
        if (static_cast<int>(__builtin_popcount(s)) == quota) basis.push_back(s);
    return OrderFilter(agents, std::move(basis));
}

OrderFilter OrderFilter::none(int agents) {
    if (agents < 1 || agents > 31) throw ParameterError("unsupported agent count");
    return OrderFilter(agents, {});
}

bool OrderFilter::member(Coalition s) const {
    for (Coalition b : basis_)
        if ((b & s) == b) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Rule core

struct Rule::Memo {
    long long dense_size = 0;
    std::unique_ptr<std::atomic<int>[]> dense;
    std::mutex mu;
    std::map<std::vector<int>, int> sparse;
};

Rule::Rule(std::string name, GroundPtr ground, int agents,
           std::function<int(const std::vector<int>&)> eval_ids)
    : name_(std::move(name)),
      ground_(std::move(ground)),
      agents_(agents),
      lat_(&Lattice::of(ground_)),
      fn_(std::move(eval_ids)),
      memo_(std::make_shared<Memo>()) {
    if (agents_ < 1) throw ParameterError("a rule needs at least one agent");
    long long size = 1;
    for (int i = 0; i < agents_; ++i) {
        size *= lat_->count();
        if (size > 4'000'000) { size = 0; break; }
    }
    if (size > 0) {
        memo_->dense_size = size;
        memo_->dense = std::make_unique<std::atomic<int>[]>(static_cast<size_t>(size));
        for (long long i = 0; i < size; ++i)
            memo_->dense[i].store(-1, std::memory_order_relaxed);
    }
}

int Rule::eval_ids(const std::vector<int>& ids) const {
    if (static_cast<int>(ids.size()) != agents_)
        throw ParameterError("profile has " + std::to_string(ids.size()) +
                             " agents, rule expects " + std::to_string(agents_));
    for (int id : ids)
        if (id < 0 || id >= lat_->count())
            throw ParameterError("element id out of range");
    if (memo_->dense) {
        long long idx = 0;
        for (int i = agents_ - 1; i >= 0; --i) idx = idx * lat_->count() + ids[static_cast<size_t>(i)];
        int got = memo_->dense[idx].load(std::memory_order_relaxed);
        if (got >= 0) return got;
        int value = fn_(ids);
        memo_->dense[idx].store(value, std::memory_order_relaxed);
        return value;
    }
    std::lock_guard<std::mutex> lock(memo_->mu);
    auto it = memo_->sparse.find(ids);
    if (it != memo_->sparse.end()) return it->second;
    int value = fn_(ids);
    memo_->sparse.emplace(ids, value);
    return value;
}

TotalPreorder Rule::eval(const Profile& profile) const {
    if (*profile.ground() != *ground_)
        throw ParameterError("profile ground set does not match the rule");
    if (profile.agents() != agents_)
        throw ParameterError("profile has " + std::to_string(profile.agents()) +
                             " agents, rule expects " + std::to_string(agents_));
    std::vector<int> ids;
    ids.reserve(static_cast<size_t>(agents_));
    for (const auto& r : profile.prefs()) ids.push_back(lat_->id_of(r));
    return lat_->element(eval_ids(ids));
}

// ---------------------------------------------------------------------------
// Filter-representation rules

Rule filter_rule(std::string name, const FilterFamily& family) {
    check_family(family);
    const Lattice& lat = Lattice::of(family.ground);
    auto sig = subset_signatures(lat);
    auto filters = family.filters;
    Rule rule(std::move(name), family.ground, family.agents,
              [&lat, sig, filters](const std::vector<int>& ids) {
                  auto chosen = selected_irreducibles(lat, sig, filters, ids);
                  auto met = lat.meet_all(chosen);
                  if (!met) {
                      throw IllFormedFamily("meet undefined on profile " +
                                            render_profile_ids(lat, ids));
                  }
                  return *met;
              });
    if (family.ground->size() <= 3) {
        auto audit = audit_filter_family(family);
        if (!audit.well_formed) {
            std::string msg = "filter family is ill-formed; witness profile:";
            for (const auto& enc : audit.witness) msg += " " + enc + " ;";
            msg += " selected:";
            for (const auto& enc : audit.selected) msg += " " + enc + " ;";
            throw IllFormedFamily(msg);
        }
    }
    return rule;
}

FamilyAudit audit_filter_family(const FilterFamily& family) {
    check_family(family);
    const Lattice& lat = Lattice::of(family.ground);
    if (family.ground->size() > 4)
        throw GroundTooLarge("filter audits stop at four alternatives");
    long long total = 1;
    for (int i = 0; i < family.agents; ++i) {
        total *= lat.count();
        if (total > 5'000'000)
            throw GroundTooLarge("too many profiles to audit");
    }
    auto sig = subset_signatures(lat);
    FamilyAudit report;
    for_profiles(lat.count(), family.agents, [&](const std::vector<int>& ids) {
        if (!report.well_formed) return;
        auto chosen = selected_irreducibles(lat, sig, family.filters, ids);
        if (!lat.meet_all(chosen)) {
            report.well_formed = false;
            for (int id : ids) report.witness.push_back(render_preorder(lat.element(id)));
            for (int id : chosen) report.selected.push_back(render_preorder(lat.element(id)));
        }
    });
    return report;
}

Rule quota_rule(const GroundPtr& ground, int agents, int quota) {
    if (quota < 0 || quota > agents)
        throw ParameterError("quota " + std::to_string(quota) + " out of range 0.." +
                             std::to_string(agents));
    const auto& irr = Lattice::of(ground).irreducible_ids();
    FilterFamily family{ground, agents,
                        std::vector<OrderFilter>(irr.size(), OrderFilter::threshold(agents, quota))};
    return filter_rule("quota:q=" + std::to_string(quota), family);
}

Rule quota_rule(const GroundPtr& ground, int agents, const std::vector<int>& quotas) {
    const auto& irr = Lattice::of(ground).irreducible_ids();
    if (quotas.size() != irr.size())
        throw ParameterError("expected one quota per bipartition");
    std::vector<OrderFilter> filters;
    std::string name = "quota:q=";
    for (size_t k = 0; k < quotas.size(); ++k) {
        if (quotas[k] < 0 || quotas[k] > agents)
            throw ParameterError("quota " + std::to_string(quotas[k]) + " out of range 0.." +
                                 std::to_string(agents));
        filters.push_back(OrderFilter::threshold(agents, quotas[k]));
        if (k) name += ",";
        name += std::to_string(quotas[k]);
    }
    return filter_rule(std::move(name), FilterFamily{ground, agents, std::move(filters)});
}

QuotaFlags quota_flags(const GroundPtr& ground, int agents, const std::vector<int>& quotas) {
    const Lattice& lat = Lattice::of(ground);
    const auto& irr = lat.irreducible_ids();
    if (quotas.size() != irr.size())
        throw ParameterError("expected one quota per bipartition");
    QuotaFlags flags;
    flags.positive = std::all_of(quotas.begin(), quotas.end(), [](int q) { return q > 0; });
    flags.weakly_neutral = true;
    (void)agents;
    for (size_t k = 0; k < irr.size(); ++k)
        for (size_t l = k + 1; l < irr.size(); ++l)
            if (lat.meet(irr[k], irr[l]) && quotas[k] != quotas[l]) flags.weakly_neutral = false;
    return flags;
}

Rule comajority(const GroundPtr& ground, int agents) {
    if (agents < 1) throw ParameterError("a rule needs at least one agent");
    if (agents > 20) throw ParameterError("too many agents for coalition enumeration");
    const Lattice& lat = Lattice::of(ground);
    const int need = (agents + 1) / 2 + (agents % 2 == 0 ? 1 : 0); // smallest strict-majority size
    Rule rule("comajority", ground, agents, [&lat, agents, need](const std::vector<int>& ids) {
        std::vector<int> joins;
        for (Coalition s = 1; s < (1u << agents); ++s) {
            if (__builtin_popcount(s) < need) continue;
            int j = -1;
            for (int i = 0; i < agents; ++i)
                if (s >> i & 1u) j = j < 0 ? ids[static_cast<size_t>(i)] : lat.join(j, ids[static_cast<size_t>(i)]);
            joins.push_back(j);
        }
        auto met = lat.meet_all(joins);
        if (!met)
            throw IllFormedFamily("majority-join meet undefined on profile " +
                                  render_profile_ids(lat, ids));
        return *met;
    });
    if (ground->size() <= 3) {
        // Eager well-definedness sweep, mirroring the filter-family audit.
        for_profiles(lat.count(), agents, [&rule](const std::vector<int>& ids) { rule.eval_ids(ids); });
    }
    return rule;
}

// ---------------------------------------------------------------------------
// Named rules

Rule dictator(const GroundPtr& ground, int agents, int agent) {
    checked_agent(agents, agent);
    return Rule("dictator:i=" + std::to_string(agent), ground, agents,
                [agent](const std::vector<int>& ids) { return ids[static_cast<size_t>(agent - 1)]; });
}

Rule inverse_dictator(const GroundPtr& ground, int agents, int agent) {
    checked_agent(agents, agent);
    const Lattice& lat = Lattice::of(ground);
    const int m = ground->size();
    return Rule("invdictator:i=" + std::to_string(agent), ground, agents,
                [&lat, m, agent](const std::vector<int>& ids) {
                    Mask rel = lat.element(ids[static_cast<size_t>(agent - 1)]).mask();
                    return lat.id_of_mask(bits::converse(rel, m));
                });
}

Rule constant_rule(const GroundPtr& ground, int agents, const TotalPreorder& value) {
    if (*value.ground() != *ground)
        throw ParameterError("constant value lives on a different ground set");
    const int id = Lattice::of(ground).id_of(value);
    return Rule("constant:R=" + render_preorder(value), ground, agents,
                [id](const std::vector<int>&) { return id; });
}

Rule global_stalemate(const GroundPtr& ground, int agents) {
    const int top = Lattice::of(ground).top();
    return Rule("stalemate", ground, agents, [top](const std::vector<int>&) { return top; });
}

namespace {

// Per-element vector of strict-win counts, indexed [element][alternative].
std::vector<std::vector<int>> strict_win_counts(const Lattice& lat) {
    const int m = lat.ground()->size();
    std::vector<std::vector<int>> wins(static_cast<size_t>(lat.count()),
                                       std::vector<int>(static_cast<size_t>(m), 0));
    for (int e = 0; e < lat.count(); ++e) {
        Mask rel = lat.element(e).mask();
        Mask strict = rel & ~bits::converse(rel, m);
        for (int x = 0; x < m; ++x)
            wins[static_cast<size_t>(e)][static_cast<size_t>(x)] =
                __builtin_popcountll(bits::row(strict, x, m));
    }
    return wins;
}

int borda_eval(const Lattice& lat, const std::vector<std::vector<int>>& wins,
               const std::vector<int>& ids) {
    const int m = lat.ground()->size();
    std::vector<int> score(static_cast<size_t>(m), 0);
    for (int id : ids)
        for (int x = 0; x < m; ++x) score[static_cast<size_t>(x)] += wins[static_cast<size_t>(id)][static_cast<size_t>(x)];
    Mask rel = 0;
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
            if (score[static_cast<size_t>(x)] >= score[static_cast<size_t>(y)])
                rel |= bits::pair_bit(x, y, m);
    return lat.id_of_mask(rel);
}

} // namespace

Rule borda(const GroundPtr& ground, int agents) {
    const Lattice& lat = Lattice::of(ground);
    auto wins = strict_win_counts(lat);
    return Rule("borda", ground, agents, [&lat, wins](const std::vector<int>& ids) {
        return borda_eval(lat, wins, ids);
    });
}

Rule borda_projective(const GroundPtr& ground, int agents, int agent) {
    checked_agent(agents, agent);
    const Lattice& lat = Lattice::of(ground);
    auto wins = strict_win_counts(lat);
    return Rule("bordaproj:i=" + std::to_string(agent), ground, agents,
                [&lat, wins, agent](const std::vector<int>& ids) {
                    int b = borda_eval(lat, wins, ids);
                    for (int id : ids)
                        if (id == b) return ids[static_cast<size_t>(agent - 1)];
                    return b;
                });
}

Rule target_match_rule(const GroundPtr& ground, int agents, int agent,
                       const TotalPreorder& target,
                       const std::vector<std::string>& masked) {
    checked_agent(agents, agent);
    if (*target.ground() != *ground)
        throw ParameterError("target preference lives on a different ground set");
    if (masked.empty()) throw ParameterError("masked agenda must be nonempty");
    const int m = ground->size();
    unsigned masked_bits = 0;
    for (const auto& label : masked) {
        unsigned bit = 1u << ground->index(label);
        if (masked_bits & bit) throw ParameterError("duplicate label in masked agenda: " + label);
        masked_bits |= bit;
    }
    const unsigned everyone = (1u << m) - 1u;
    if (masked_bits == everyone)
        throw ParameterError("masked agenda must be a proper subset of the ground set");
    const unsigned keep = everyone & ~masked_bits;

    const Lattice& lat = Lattice::of(ground);
    std::vector<Mask> visible(static_cast<size_t>(lat.count()));
    for (int e = 0; e < lat.count(); ++e)
        visible[static_cast<size_t>(e)] = bits::compress(lat.element(e).mask(), keep, m);
    const Mask target_visible = bits::compress(target.mask(), keep, m);
    const int target_id = lat.id_of(target);

    std::string name = "remark3:i=" + std::to_string(agent) + ",Rstar=" + render_preorder(target) +
                       ",Bstar=";
    bool first = true;
    for (int i = 0; i < m; ++i) {
        if (!(masked_bits >> i & 1u)) continue;
        if (!first) name += ",";
        name += ground->label(i);
        first = false;
    }
    return Rule(std::move(name), ground, agents,
                [visible, target_visible, target_id, agent](const std::vector<int>& ids) {
                    for (size_t j = 0; j < ids.size(); ++j) {
                        if (static_cast<int>(j) == agent - 1) continue;
                        if (visible[static_cast<size_t>(ids[j])] == target_visible) return target_id;
                    }
                    return ids[static_cast<size_t>(agent - 1)];
                });
}

Rule unanimity_rule(const GroundPtr& ground, int agents) {
    const int top = Lattice::of(ground).top();
    return Rule("un", ground, agents, [top](const std::vector<int>& ids) {
        for (int id : ids)
            if (id != ids[0]) return top;
        return ids[0];
    });
}

Rule lex_top_rule(const GroundPtr& ground, int agents, const std::string& top) {
    const int t = ground->index(top);
    const Lattice& lat = Lattice::of(ground);
    const int m = ground->size();
    // Linear orders in canonical encoding order; enumeration order is already
    // lexicographic on the rendering.
    std::vector<int> linear_ids;
    std::vector<Mask> linear_masks;
    std::vector<char> has_top;
    const Mask full_row = (Mask{1} << m) - 1;
    for (int e = 0; e < lat.count(); ++e) {
        if (!lat.element(e).is_linear()) continue;
        Mask rel = lat.element(e).mask();
        linear_ids.push_back(e);
        linear_masks.push_back(rel);
        has_top.push_back(bits::row(rel, t, m) == full_row ? 1 : 0);
    }
    return Rule("lextop:x=" + top, ground, agents,
                [&lat, m, t, linear_ids, linear_masks, has_top](const std::vector<int>& ids) {
                    Mask unanimous_strict = ~Mask{0};
                    for (int id : ids) {
                        Mask rel = lat.element(id).mask();
                        unanimous_strict &= rel & ~bits::converse(rel, m);
                    }
                    bool beaten = false;
                    for (int y = 0; y < m && !beaten; ++y)
                        if (y != t && (unanimous_strict & bits::pair_bit(y, t, m))) beaten = true;
                    for (size_t k = 0; k < linear_ids.size(); ++k) {
                        if (!beaten && !has_top[k]) continue;
                        if (unanimous_strict & ~linear_masks[k]) continue;
                        return linear_ids[k];
                    }
                    throw InternalError("no linear order extends the unanimous strict preferences");
                });
}

Rule leading_pair_rule(const GroundPtr& ground, int agents) {
    if (agents < 3) throw ParameterError("the leading-pair rule needs at least three agents");
    const Lattice& lat = Lattice::of(ground);
    const int m = ground->size();
    return Rule("leadingpair", ground, agents, [&lat, m](const std::vector<int>& ids) {
        Mask raw = (lat.element(ids[0]).mask() & lat.element(ids[1]).mask()) |
                   lat.element(ids[2]).mask();
        int id = lat.id_of_mask(bits::closure(raw, m));
        if (id < 0) throw InternalError("closure of a total reflexive relation left the space");
        return id;
    });
}

// ---------------------------------------------------------------------------
// Catalog and rule-spec mini-language

std::vector<Rule> standard_catalog(const GroundPtr& ground, int agents) {
    if (ground->size() < 3) throw ParameterError("the catalog needs at least three alternatives");
    if (agents < 3) throw ParameterError("the catalog needs at least three agents");
    const auto& labels = ground->labels();
    std::string identity;        // first|second|...|last
    std::string rotated;         // second|...|last|first
    for (size_t i = 0; i < labels.size(); ++i) {
        if (i) identity += "|";
        identity += labels[i];
    }
    for (size_t i = 1; i < labels.size(); ++i) {
        rotated += labels[i];
        rotated += "|";
    }
    rotated += labels[0];

    std::vector<Rule> rules;
    rules.push_back(global_stalemate(ground, agents));
    rules.push_back(dictator(ground, agents, 1));
    rules.push_back(dictator(ground, agents, 2));
    rules.push_back(inverse_dictator(ground, agents, 1));
    rules.push_back(constant_rule(ground, agents, parse_preorder(ground, identity)));
    rules.push_back(comajority(ground, agents));
    rules.push_back(quota_rule(ground, agents, 2));
    rules.push_back(quota_rule(ground, agents, agents));
    rules.push_back(borda(ground, agents));
    rules.push_back(borda_projective(ground, agents, 1));
    rules.push_back(target_match_rule(ground, agents, 1, parse_preorder(ground, rotated),
                                      {labels[0]}));
    rules.push_back(unanimity_rule(ground, agents));
    rules.push_back(lex_top_rule(ground, agents, labels[0]));
    rules.push_back(leading_pair_rule(ground, agents));
    return rules;
}

namespace {

int parse_int(const std::string& text) {
    size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(text, &used);
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + text + "'");
    }
    if (used != text.size()) throw ParseError("expected an integer, got '" + text + "'");
    return value;
}

// "key=value" with a fixed expected key.
std::string keyed_value(const std::string& text, const std::string& key) {
    if (text.rfind(key + "=", 0) != 0)
        throw ParseError("expected '" + key + "=...', got '" + text + "'");
    return text.substr(key.size() + 1);
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    size_t start = 0;
    while (true) {
        size_t comma = text.find(',', start);
        values.push_back(parse_int(text.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return values;
}

} // namespace

Rule parse_rule_spec(const GroundPtr& ground, int agents, const std::string& spec) {
    const size_t colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    const bool has_params = colon != std::string::npos;

    auto no_params = [&](const char* what) {
        if (has_params) throw ParseError(std::string(what) + " takes no parameters");
    };

    if (head == "comajority") {
        no_params("comajority");
        return comajority(ground, agents);
    }
    if (head == "stalemate") {
        no_params("stalemate");
        return global_stalemate(ground, agents);
    }
    if (head == "borda") {
        no_params("borda");
        return borda(ground, agents);
    }
    if (head == "un") {
        no_params("un");
        return unanimity_rule(ground, agents);
    }
    if (head == "leadingpair") {
        no_params("leadingpair");
        return leading_pair_rule(ground, agents);
    }
    if (head == "quota") {
        auto values = parse_int_list(keyed_value(rest, "q"));
        if (values.size() == 1) return quota_rule(ground, agents, values[0]);
        return quota_rule(ground, agents, values);
    }
    if (head == "dictator") return dictator(ground, agents, parse_int(keyed_value(rest, "i")));
    if (head == "invdictator")
        return inverse_dictator(ground, agents, parse_int(keyed_value(rest, "i")));
    if (head == "constant")
        return constant_rule(ground, agents, parse_preorder(ground, keyed_value(rest, "R")));
    if (head == "bordaproj")
        return borda_projective(ground, agents, parse_int(keyed_value(rest, "i")));
    if (head == "lextop") return lex_top_rule(ground, agents, keyed_value(rest, "x"));
    if (head == "remark3") {
        // i=<int>,Rstar=<encoding>,Bstar=<label>[,<label>...]
        const size_t rstar_at = rest.find(",Rstar=");
        const size_t bstar_at = rest.find(",Bstar=");
        if (rstar_at == std::string::npos || bstar_at == std::string::npos || bstar_at < rstar_at)
            throw ParseError("expected 'i=<n>,Rstar=<encoding>,Bstar=<labels>', got '" + rest + "'");
        int agent = parse_int(keyed_value(rest.substr(0, rstar_at), "i"));
        std::string enc = rest.substr(rstar_at + 7, bstar_at - (rstar_at + 7));
        std::string labels_text = rest.substr(bstar_at + 7);
        std::vector<std::string> masked;
        size_t start = 0;
        while (true) {
            size_t comma = labels_text.find(',', start);
            masked.push_back(labels_text.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return target_match_rule(ground, agents, agent, parse_preorder(ground, enc), masked);
    }
    throw ParseError("unknown rule spec '" + spec + "'");
}

} // namespace medvote
