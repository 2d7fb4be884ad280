#pragma once

// Decision procedures for the axiom vocabulary. Each checker quantifies over
// the full profile space (or a seeded sample of it), returns a structured
// verdict, and carries a replayable witness for every failure. Checkers
// require exactly three agents and ground sets of at most four alternatives;
// three-alternative runs are exhaustive by default, four-alternative runs
// sampled. Scans are chunked across threads and merged by smallest index, so
// witnesses are deterministic for a fixed seed.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "medvote/rules.hpp"

namespace medvote {

enum class CheckMode {
    Auto,       // exhaustive at three alternatives, sampled at four
    Exhaustive, // full scan regardless of size
    Sampled,    // seeded random tuples
};

struct CheckOptions {
    CheckMode mode = CheckMode::Auto;
    std::uint64_t seed = 42;
    long long samples = 20000;
    int threads = 0; // 0 = hardware concurrency
};

// Outcome of one check. Witness keys depend on the axiom; the shared ones are
// "profile"/"profile2" (render_profile_ids format), "pair" (comma-separated
// labels), "agent" (1-based), "agenda" (comma-separated labels),
// "output"/"output2" (preorder encodings) and "note" (free text). A "fails"
// verdict always replays: re-evaluating the rule on the witness reproduces
// the violation. domain_size counts quantified tuples when exhaustive and
// drawn samples otherwise. Existential checks (WS, LS, S) can return "holds"
// from a sample, since found witnesses certify them; universal checks return
// "inconclusive-sampled" instead.
struct CheckReport {
    std::string axiom;
    std::string rule;
    std::string scope;
    std::string verdict; // "holds" | "fails" | "inconclusive-sampled"
    std::map<std::string, std::string> witness;
    long long domain_size = 0;
    double elapsed_seconds = 0.0;

    bool holds() const { return verdict == "holds"; }
    bool fails() const { return verdict == "fails"; }
};

// Output is invariant under every permutation of the agents.
CheckReport check_AN(const Rule& rule, const CheckOptions& options = {});

// Unanimous profiles pass through unchanged.
CheckReport check_ID(const Rule& rule, const CheckOptions& options = {});

// Whenever two profiles reverse every agent's weak stance on a pair, the
// social weak stance reverses too. Quantifies, per ordered pair, over all
// profile pairs satisfying that linkage.
CheckReport check_NT(const Rule& rule, const CheckOptions& options = {});

// For any two two-class preorders that contain exactly the same agents'
// reports, the output is contained in one iff it is contained in the other.
CheckReport check_WNT(const Rule& rule, const CheckOptions& options = {});

// Unanimous strict preference comes out strict.
CheckReport check_WP(const Rule& rule, const CheckOptions& options = {});

// Unanimous weak preference comes out weak.
CheckReport check_BP(const Rule& rule, const CheckOptions& options = {});

// For every distinct pair, some two profiles produce different output
// restrictions to that pair. Reports the first pair with a constant
// restriction on failure.
CheckReport check_LS(const Rule& rule, const CheckOptions& options = {});

// Every ordered pair is socially weak-preferred under some profile. Reports
// the first unmet pair on failure.
CheckReport check_WS(const Rule& rule, const CheckOptions& options = {});

// Every preorder is attained as an output. Reports the first unattained
// value on failure.
CheckReport check_S(const Rule& rule, const CheckOptions& options = {});

// Equal profile restrictions to a proper nonempty sub-agenda force equal
// output restrictions to it.
CheckReport check_IIA(const Rule& rule, const CheckOptions& options = {});

// As check_IIA, but both profiles must be projective: the output equals some
// agent's report.
CheckReport check_IIAP(const Rule& rule, const CheckOptions& options = {});

// If a single agent's weak stance on some pair ever forces the social weak
// stance by itself, then some coalition avoiding that agent forces one too
// (the empty coalition counts). Forcing is decided through boolean answer
// patterns, one bit per coalition member, checked against every consistent
// profile; this checker always runs exhaustively because sampled membership
// tests would be unsound in both directions.
CheckReport check_MDR(const Rule& rule, const CheckOptions& options = {});

// No agent can move the outcome strictly toward their own report by
// misreporting: the deviation outcome never lies strictly between the
// agent's report and the truthful outcome on the fixed-agenda semilattice.
CheckReport check_SP(const Rule& rule, const CheckOptions& options = {});

// Strategy-proofness against every preference over outcomes that is
// single-peaked at the agent's report, not just the canonical geodesic one:
// whenever a deviation changes the outcome, the truthful outcome must lie
// between the report and the deviated outcome, since otherwise some
// single-peaked preference ranks the deviated outcome strictly higher. This
// is strictly stronger than check_SP (see the dispatch name "SPstrong").
CheckReport check_SP_strong(const Rule& rule, const CheckOptions& options = {});

// For every bipartition: growing the coalition of agents whose report lies
// below it keeps the output below it.
CheckReport check_monotone_M_independence(const Rule& rule,
                                          const CheckOptions& options = {});

// Verdict holds iff some fixed agent's report contains every output
// (respectively, its converse does). The witness carries the agent set when
// found and one refuting profile per agent when not.
CheckReport detect_dictator(const Rule& rule, const CheckOptions& options = {});
CheckReport detect_inverse_dictator(const Rule& rule, const CheckOptions& options = {});

// Verdict holds iff some profile puts a unanimously strict pair inside an
// output indifference class. A "fails" verdict records exhaustive absence.
CheckReport detect_stalemate(const Rule& rule, const CheckOptions& options = {});

// Certificate that a coalition forces the weak social preference x over y:
// an answer bit per member (does the member weakly rank x over y?) such that
// every profile matching the bits yields x weakly over y. The pattern's keys
// are exactly the coalition's agents.
struct ResponsivenessWitness {
    Coalition coalition = 0;
    std::map<int, bool> pattern; // agent (1-based) -> required weak stance
};

// First forcing pattern for the given coalition and ordered pair, if any.
// Exhaustive over all profiles; x and y are element indices of the ground
// set and must differ.
std::optional<ResponsivenessWitness> responsive_pattern(const Rule& rule,
                                                        Coalition coalition,
                                                        int x, int y);

// All coalitions holding a forcing pattern for the ordered pair, ascending.
std::vector<Coalition> responsive_coalitions(const Rule& rule, int x, int y);

// Coalitions that force strict social preference: whenever every member
// strictly prefers x to y, so does the output, for every ordered pair.
// The flags report the classic filter structure of that set.
struct DecisiveReport {
    std::string rule;
    std::vector<Coalition> decisive; // ascending bitmask order
    bool intersection_closed = false;
    bool complement_dichotomy = false;
    bool upward_closed = false;
    bool is_ultrafilter = false;          // nonempty, no empty coalition,
                                          // intersection-closed, dichotomous
    std::optional<int> principal_agent;   // set when decisive = {C : i in C}
    long long domain_size = 0;
    double elapsed_seconds = 0.0;
};
DecisiveReport decisive_coalitions(const Rule& rule, const CheckOptions& options = {});

// Name-based dispatch used by the command line. Accepted names: AN, ID, NT,
// WNT, WP, BP, LS, WS, S, IIA, IIAP, MDR, SP, MI, dictator, invdictator,
// stalemate. Throws ParseError for anything else.
CheckReport run_axiom_check(const Rule& rule, const std::string& axiom,
                            const CheckOptions& options = {});
const std::vector<std::string>& axiom_names();

} // namespace medvote
