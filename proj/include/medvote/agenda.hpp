#pragma once

// Agenda formation and its manipulation checks. An agenda rule picks the set
// of alternatives actually on the table from one proposal per agent; the
// checkers ask whether swapping or shrinking the agenda can strictly improve
// the outcome for some agent, judged by that agent's geodesic order around
// their own preference on the mixed-agenda structure (see meta.hpp).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "medvote/axioms.hpp"
#include "medvote/rules.hpp"

namespace medvote {

// Maps one nonempty proposal (label-index mask over the ground set) per agent
// to a nonempty agenda mask. eval validates arity and nonemptiness.
class AgendaRule {
  public:
    AgendaRule(std::string name, GroundPtr ground, int agents,
               std::function<unsigned(const std::vector<unsigned>&)> eval);

    const std::string& name() const { return name_; }
    const GroundPtr& ground() const { return ground_; }
    int agents() const { return agents_; }

    unsigned eval(const std::vector<unsigned>& proposals) const;

  private:
    std::string name_;
    GroundPtr ground_;
    int agents_;
    std::function<unsigned(const std::vector<unsigned>&)> fn_;
};

// Union of all proposals. Identical proposals pass through unchanged, so
// every nonempty agenda is reachable.
AgendaRule union_agenda_rule(const GroundPtr& ground, int agents);

// Exhaustively confirms that every nonempty agenda is attained by some
// proposal profile. The certificate lists one witness profile per agenda
// (identical proposals are tried first); a failure names the unreached
// agendas. Witness keys: "agenda <labels>" -> proposal profile.
CheckReport check_sovereign(const AgendaRule& rule);

// Side-by-side composition of an agenda rule and a preference rule over the
// same ground set and agent count. The plain constructor is decomposable:
// the preference output never reads the proposals. The entangled constructor
// exists for test doubles whose preference output does read them; the
// manipulation checker must catch those.
class PafeRule {
  public:
    PafeRule(std::string name, AgendaRule agenda_part, Rule swf_part);
    PafeRule(std::string name, AgendaRule agenda_part, Rule swf_part,
             std::function<int(const std::vector<unsigned>&, const std::vector<int>&)> entangled);

    const std::string& name() const { return name_; }
    const AgendaRule& agenda_part() const { return agenda_; }
    const Rule& swf_part() const { return swf_; }
    bool decomposable() const { return !entangled_; }

    unsigned agenda_out(const std::vector<unsigned>& proposals) const;
    int preference_out(const std::vector<unsigned>& proposals,
                       const std::vector<int>& pref_ids) const;

  private:
    std::string name_;
    AgendaRule agenda_;
    Rule swf_;
    std::function<int(const std::vector<unsigned>&, const std::vector<int>&)> entangled_;
};

// Test double whose preference output routes between two dictatorships on
// the parity of the proposals' total popcount. Not decomposable; the
// parallel-manipulation checker refutes it with a witness.
PafeRule entangled_pafe_double(const GroundPtr& ground, int agents);

// Builds the rule a sequential composition runs on one agenda's sub-ground
// set. Must return a rule over exactly the ground set it is handed.
using RuleScheme = std::function<Rule(const GroundPtr& agenda_ground)>;

// Sequential composition: the agenda is formed first, then a per-agenda rule
// aggregates the profile restricted to it. The scheme is instantiated lazily
// and cached per agenda; it must be total over nonempty agendas.
class SafeRule {
  public:
    SafeRule(std::string name, AgendaRule agenda_part, RuleScheme scheme);

    const std::string& name() const { return name_; }
    const AgendaRule& agenda_part() const { return agenda_; }
    const GroundPtr& ground() const { return agenda_.ground(); }
    int agents() const { return agenda_.agents(); }

    // The rule for one agenda mask, built on the matching sub-ground.
    const Rule& family(unsigned agenda_mask) const;

  private:
    std::string name_;
    AgendaRule agenda_;
    RuleScheme scheme_;
    mutable std::vector<std::optional<Rule>> cache_;
};

// Uniform sequential composition over the union agenda rule.
SafeRule make_safe_uniform(const GroundPtr& ground, int agents, std::string name,
                           RuleScheme scheme);

// The natural reinstantiation of a catalog rule on each sub-agenda, when the
// rule's parameters survive restriction (quotas, dictators, score rules, a
// restricted constant, a restricted target-match). Rules anchored to a fixed
// alternative that may leave the agenda have no total scheme.
std::optional<RuleScheme> natural_scheme(const Rule& rule);

// Parallel-composition manipulation check: at every preference profile, for
// every achievable agenda pair C within D, every agent must be indifferent
// between the two social outputs restricted to C. Decomposable compositions
// make the restrictions literally equal; the checker verifies that rather
// than assuming it. Preference profiles and same-proposal agenda pairs are
// covered exhaustively; proposal pairs beyond those are seeded samples
// (which only matter for entangled doubles).
CheckReport check_AMP_P(const PafeRule& pafe, const CheckOptions& options = {});

// Convenience: the given rule composed with the union agenda rule.
CheckReport check_AMP_P(const Rule& rule, const CheckOptions& options = {});

// Sequential-composition manipulation check: for every preference profile
// and every nonempty agenda pair C within D, the rule run on the profile
// restricted to C and the C-restriction of (the rule run on the profile
// restricted to D) must be symmetrically comparable for every agent: either
// equal, or neither on a geodesic from the agent's preference to the other.
CheckReport check_AMP_S(const SafeRule& safe, const CheckOptions& options = {});

// Bare-rule form: uses the restriction family, defined by evaluating the rule
// on any full profile and restricting. Throws FamilyUndefined when two full
// profiles with the same restriction disagree on the restricted output (the
// rule is not independent of irrelevant alternatives); pass an explicit
// scheme through a SafeRule instead.
CheckReport check_AMP_S(const Rule& rule, const CheckOptions& options = {});

// Catalog-wide audit of the two implication directions around sequential
// manipulation-proofness: rules passing the independence check must pass the
// sequential check (restriction family), and rules passing the sequential
// check (under their natural scheme otherwise) must pass the projective
// independence check. The witness lists the per-rule verdict triples and any
// anomalies; the verdict is "holds" exactly when both directions are
// anomaly-free.
CheckReport implication_suite_prop2(const GroundPtr& ground, int agents,
                                    const CheckOptions& options = {});

} // namespace medvote
