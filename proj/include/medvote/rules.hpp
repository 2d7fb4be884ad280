#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "medvote/lattice.hpp"
#include "medvote/profile.hpp"

namespace medvote {

// Coalitions are agent bitmasks: bit k set <=> agent k+1 belongs. Agents are
// numbered 1..n in every public parameter and rendered name.
using Coalition = unsigned;

// Upward-closed family of coalitions, stored as the antichain of its minimal
// members. Both extremes are representable: the empty family (no members at
// all) and the improper family that contains every coalition (basis {∅}).
class OrderFilter {
  public:
    // Minimizes `members` to an antichain; the filter is their upward closure.
    static OrderFilter from_coalitions(int agents, std::vector<Coalition> members);
    // {T : |T| >= quota}. quota <= 0 gives the improper family, quota > agents
    // the empty one.
    static OrderFilter threshold(int agents, int quota);
    static OrderFilter none(int agents);

    int agents() const { return agents_; }
    const std::vector<Coalition>& basis() const { return basis_; }
    bool member(Coalition s) const;
    bool is_empty() const { return basis_.empty(); }

    bool operator==(const OrderFilter& other) const {
        return agents_ == other.agents_ && basis_ == other.basis_;
    }
    bool operator!=(const OrderFilter& other) const { return !(*this == other); }

  private:
    OrderFilter(int agents, std::vector<Coalition> basis);

    int agents_;
    std::vector<Coalition> basis_; // ascending, pairwise incomparable
};

// One order filter per two-class bipartition, indexed parallel to
// Lattice::irreducible_ids() of the ground set.
struct FilterFamily {
    GroundPtr ground;
    int agents = 0;
    std::vector<OrderFilter> filters;
};

// Social welfare function over a fixed ground set and agent count. eval is
// pure; results are memoized because axiom checkers revisit profiles heavily.
// Copies share the memo table.
class Rule {
  public:
    Rule(std::string name, GroundPtr ground, int agents,
         std::function<int(const std::vector<int>&)> eval_ids);

    const std::string& name() const { return name_; }
    const GroundPtr& ground() const { return ground_; }
    int agents() const { return agents_; }
    const Lattice& lattice() const { return *lat_; }

    // Evaluate on lattice element ids, one per agent.
    int eval_ids(const std::vector<int>& ids) const;
    TotalPreorder eval(const Profile& profile) const;

  private:
    struct Memo;

    std::string name_;
    GroundPtr ground_;
    int agents_;
    const Lattice* lat_;
    std::function<int(const std::vector<int>&)> fn_;
    std::shared_ptr<Memo> memo_;
};

// Profiles as text: encodings joined by " ; ", one per agent. The parser
// accepts any amount of surrounding whitespace per entry.
std::string render_profile_ids(const Lattice& lat, const std::vector<int>& ids);
std::vector<int> parse_profile_ids(const Lattice& lat, const std::string& text);

// ---------------------------------------------------------------------------
// Filter-representation rules

// Meet over the bipartitions whose supporting coalition {i : R_i ⊆ m} belongs
// to m's filter; the empty meet is the universal indifference. Throws
// IllFormedFamily when some profile makes the meet undefined; that condition
// is audited eagerly at construction for ground sets of size <= 3 and
// otherwise surfaces at evaluation time.
Rule filter_rule(std::string name, const FilterFamily& family);

struct FamilyAudit {
    bool well_formed = true;
    std::vector<std::string> witness;  // profile encodings when ill-formed
    std::vector<std::string> selected; // bipartitions selected at the witness
};

// Scan every profile for an undefined meet (exhaustive for the family's
// ground set; sizes above 4 are rejected as too large).
FamilyAudit audit_filter_family(const FilterFamily& family);

// Uniform-threshold family: every bipartition gets {T : |T| >= quota}.
Rule quota_rule(const GroundPtr& ground, int agents, int quota);
// Per-bipartition thresholds, indexed parallel to irreducible_ids().
Rule quota_rule(const GroundPtr& ground, int agents, const std::vector<int>& quotas);

struct QuotaFlags {
    bool positive = false;       // every quota > 0
    bool weakly_neutral = false; // equal filters on every meet-compatible pair
};
QuotaFlags quota_flags(const GroundPtr& ground, int agents, const std::vector<int>& quotas);

// Meet over all majority coalitions (|S| >= (n+1)/2) of the join of the
// members' preorders. Deliberately computed from joins and meets directly,
// not through the filter machinery, so the two routes can be compared.
Rule comajority(const GroundPtr& ground, int agents);

// ---------------------------------------------------------------------------
// Named rules

Rule dictator(const GroundPtr& ground, int agents, int agent);
Rule inverse_dictator(const GroundPtr& ground, int agents, int agent);
Rule constant_rule(const GroundPtr& ground, int agents, const TotalPreorder& value);
// Constant universal indifference.
Rule global_stalemate(const GroundPtr& ground, int agents);

// Scores each alternative by how many alternatives it strictly beats, summed
// over agents; equal totals become social indifference.
Rule borda(const GroundPtr& ground, int agents);
// Borda unless the Borda outcome coincides with some agent's preference, in
// which case `agent`'s preference is returned instead.
Rule borda_projective(const GroundPtr& ground, int agents, int agent);

// Returns `target` when some agent other than `agent` reports a preference
// agreeing with `target` outside `masked`; otherwise returns `agent`'s own
// preference. `masked` must be a nonempty proper subset of the ground set.
Rule target_match_rule(const GroundPtr& ground, int agents, int agent,
                       const TotalPreorder& target,
                       const std::vector<std::string>& masked);

// Unanimous profiles pass through; everything else is universal indifference.
Rule unanimity_rule(const GroundPtr& ground, int agents);

// Picks the first linear order (in canonical encoding order) extending the
// profile's unanimous strict preferences, with `top` as top element whenever
// no unanimous strict preference beats `top`.
Rule lex_top_rule(const GroundPtr& ground, int agents, const std::string& top);

// Pairwise: follow agents 1 and 2 where they weakly agree, agent 3 otherwise;
// equivalently the union of (R_1 ∩ R_2) with R_3. That union is total but
// need not be transitive, so the output is its transitive closure. Requires
// at least three agents.
Rule leading_pair_rule(const GroundPtr& ground, int agents);

// ---------------------------------------------------------------------------
// Catalog and rule-spec mini-language

// The standard rule battery used by the checking suites, all over one ground
// set and agent count (agents >= 3).
std::vector<Rule> standard_catalog(const GroundPtr& ground, int agents);

// Parse specs like "comajority", "quota:q=2", "dictator:i=1",
// "invdictator:i=1", "stalemate", "constant:R=a|b|c", "borda",
// "bordaproj:i=1", "remark3:i=1,Rstar=b|c|a,Bstar=a", "un", "lextop:x=a",
// "leadingpair". Every constructed rule's name() round-trips through here.
Rule parse_rule_spec(const GroundPtr& ground, int agents, const std::string& spec);

} // namespace medvote
