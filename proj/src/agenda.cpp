#include "medvote/agenda.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <exception>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "medvote/meta.hpp"
#include "medvote/sum.hpp"

namespace medvote {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Same contract as the axiom checkers' helper: smallest index where pred
// holds, scanned in parallel chunks with exact-minimum abandonment.
template <class Pred>
long long first_hit(long long total, int threads, Pred&& pred) {
    if (total <= 0) return -1;
    threads = static_cast<int>(std::min<long long>(threads, total));
    if (threads <= 1) {
        for (long long i = 0; i < total; ++i)
            if (pred(i)) return i;
        return -1;
    }
    std::atomic<long long> best(total);
    std::exception_ptr error;
    std::mutex error_mu;
    const long long chunk = (total + threads - 1) / threads;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                const long long lo = t * chunk;
                const long long hi = std::min(total, lo + chunk);
                for (long long i = lo; i < hi; ++i) {
                    if ((i & 4095) == 0 && best.load(std::memory_order_relaxed) <= lo)
                        return;
                    if (pred(i)) {
                        long long cur = best.load(std::memory_order_relaxed);
                        while (i < cur && !best.compare_exchange_weak(cur, i)) {
                        }
                        return;
                    }
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    const long long found = best.load();
    return found == total ? -1 : found;
}

void require_scale(const GroundPtr& ground, int agents, const char* what) {
    if (ground->size() > 3)
        throw GroundTooLarge(std::string(what) + " support at most 3 alternatives, got " +
                             std::to_string(ground->size()));
    if (agents != 3)
        throw ParameterError(std::string(what) + " require exactly three agents, got " +
                             std::to_string(agents));
}

std::string label_list(const GroundPtr& ground, unsigned mask) {
    std::string out;
    for (int i = 0; i < ground->size(); ++i) {
        if (!(mask >> i & 1u)) continue;
        if (!out.empty()) out += ",";
        out += ground->label(i);
    }
    return out;
}

std::string render_proposals(const GroundPtr& ground, const std::vector<unsigned>& proposals) {
    std::string out;
    for (size_t i = 0; i < proposals.size(); ++i) {
        if (i) out += " ; ";
        out += label_list(ground, proposals[i]);
    }
    return out;
}

std::vector<int> mask_indices(unsigned mask, int m) {
    std::vector<int> keep;
    for (int i = 0; i < m; ++i)
        if (mask >> i & 1u) keep.push_back(i);
    return keep;
}

// Profile indexing over full-ground lattice ids, agent 1 most significant.
struct ProfileIndex {
    const Lattice* lat = nullptr;
    int n = 0;
    int count = 0;
    long long total = 1;

    ProfileIndex(const Lattice& l, int agents) : lat(&l), n(agents), count(l.count()) {
        for (int i = 0; i < n; ++i) total *= count;
    }
    int agent_id(long long p, int i) const {
        long long q = p;
        for (int k = n - 1; k > i; --k) q /= count;
        return static_cast<int>(q % count);
    }
    void decode(long long p, std::vector<int>& ids) const {
        ids.resize(static_cast<size_t>(n));
        for (int i = n - 1; i >= 0; --i) {
            ids[static_cast<size_t>(i)] = static_cast<int>(p % count);
            p /= count;
        }
    }
};

// Proposal-profile indexing: each agent's proposal is a nonempty subset mask,
// encoded as digit (mask - 1) in base (2^m - 1), agent 1 most significant.
struct ProposalIndex {
    int m = 0;
    int n = 0;
    long long base = 0;
    long long total = 1;

    ProposalIndex(int alts, int agents) : m(alts), n(agents), base((1 << alts) - 1) {
        for (int i = 0; i < n; ++i) total *= base;
    }
    void decode(long long p, std::vector<unsigned>& proposals) const {
        proposals.resize(static_cast<size_t>(n));
        for (int i = n - 1; i >= 0; --i) {
            proposals[static_cast<size_t>(i)] = static_cast<unsigned>(p % base) + 1u;
            p /= base;
        }
    }
};

// Cached geometry shared by the manipulation checkers: sum ids of full
// elements and of their restrictions, plus one geodesic order per possible
// peak.
struct AmpView {
    const Lattice* lat = nullptr;
    const SumStructure* sum = nullptr;
    GroundPtr ground;
    int m = 0;
    std::vector<MetaPreference> metas;                 // per full element id
    std::map<unsigned, std::vector<int>> full_to_sum;  // agenda -> full id -> sum id

    explicit AmpView(const GroundPtr& g)
        : lat(&Lattice::of(g)), sum(&SumStructure::of(g)), ground(g), m(g->size()) {
        MetaSpace space = sum_space(g);
        metas.reserve(static_cast<size_t>(lat->count()));
        for (int e = 0; e < lat->count(); ++e)
            metas.push_back(induced_meta(space, sum->id_of(lat->element(e))));
    }

    const std::vector<int>& restriction_to(unsigned agenda) {
        auto it = full_to_sum.find(agenda);
        if (it != full_to_sum.end()) return it->second;
        const auto keep = mask_indices(agenda, m);
        std::vector<int> table(static_cast<size_t>(lat->count()));
        for (int e = 0; e < lat->count(); ++e)
            table[static_cast<size_t>(e)] = sum->id_of(restrict_indexed(lat->element(e), keep));
        return full_to_sum.emplace(agenda, std::move(table)).first->second;
    }

    // Symmetric comparability around agent i's preference: equal, or neither
    // restriction lies on a geodesic from the peak to the other.
    bool one_sided(int peak_full_id, int x_sum, int y_sum) const {
        if (x_sum == y_sum) return false;
        const MetaPreference& meta = metas[static_cast<size_t>(peak_full_id)];
        return meta.geq(x_sum, y_sum) != meta.geq(y_sum, x_sum);
    }
};

std::string preferred_side(const AmpView& view, int peak_full_id, int x_sum, int y_sum,
                           const char* first, const char* second) {
    return view.metas[static_cast<size_t>(peak_full_id)].geq(x_sum, y_sum) ? first : second;
}

} // namespace

// ---------------------------------------------------------------------------
// Agenda rules

AgendaRule::AgendaRule(std::string name, GroundPtr ground, int agents,
                       std::function<unsigned(const std::vector<unsigned>&)> eval)
    : name_(std::move(name)), ground_(std::move(ground)), agents_(agents), fn_(std::move(eval)) {
    if (agents_ < 1) throw ParameterError("an agenda rule needs at least one agent");
    if (!fn_) throw ParameterError("agenda rule has no evaluation function");
}

unsigned AgendaRule::eval(const std::vector<unsigned>& proposals) const {
    if (static_cast<int>(proposals.size()) != agents_)
        throw ParameterError("proposal profile has " + std::to_string(proposals.size()) +
                             " entries for " + std::to_string(agents_) + " agents");
    const unsigned everyone = (1u << ground_->size()) - 1u;
    for (unsigned p : proposals) {
        if (p == 0) throw EmptyAgenda("empty proposal");
        if (p & ~everyone) throw ParameterError("proposal mentions alternatives outside the ground set");
    }
    const unsigned out = fn_(proposals);
    if (out == 0) throw EmptyAgenda("agenda rule produced an empty agenda");
    if (out & ~everyone)
        throw ParameterError("agenda rule produced alternatives outside the ground set");
    return out;
}

AgendaRule union_agenda_rule(const GroundPtr& ground, int agents) {
    return AgendaRule("union", ground, agents, [](const std::vector<unsigned>& proposals) {
        unsigned out = 0;
        for (unsigned p : proposals) out |= p;
        return out;
    });
}

CheckReport check_sovereign(const AgendaRule& rule) {
    const auto t0 = Clock::now();
    const GroundPtr& g = rule.ground();
    if (g->size() > 4)
        throw GroundTooLarge("sovereignty scan supports at most 4 alternatives, got " +
                             std::to_string(g->size()));
    if (rule.agents() != 3)
        throw ParameterError("sovereignty scan requires exactly three agents, got " +
                             std::to_string(rule.agents()));
    const int m = g->size();
    const ProposalIndex pix(m, rule.agents());

    CheckReport rep;
    rep.axiom = "sovereign";
    rep.rule = rule.name();
    rep.scope = "exhaustive(m=" + std::to_string(m) + ",n=" + std::to_string(rule.agents()) + ")";
    rep.domain_size = pix.total * ((1 << m) - 1);

    std::string unreached;
    std::vector<unsigned> proposals;
    for (unsigned target = 1; target < (1u << m); ++target) {
        proposals.assign(static_cast<size_t>(rule.agents()), target);
        bool found = rule.eval(proposals) == target;
        if (!found) {
            for (long long p = 0; p < pix.total && !found; ++p) {
                pix.decode(p, proposals);
                found = rule.eval(proposals) == target;
            }
        }
        if (found) {
            rep.witness["agenda " + label_list(g, target)] = render_proposals(g, proposals);
        } else {
            if (!unreached.empty()) unreached += "; ";
            unreached += label_list(g, target);
        }
    }
    if (unreached.empty()) {
        rep.verdict = "holds";
    } else {
        rep.verdict = "fails";
        rep.witness.clear();
        rep.witness["unreached"] = unreached;
    }
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

// ---------------------------------------------------------------------------
// Parallel composition

PafeRule::PafeRule(std::string name, AgendaRule agenda_part, Rule swf_part)
    : name_(std::move(name)), agenda_(std::move(agenda_part)), swf_(std::move(swf_part)) {
    if (*agenda_.ground() != *swf_.ground())
        throw ParameterError("agenda part and preference part use different ground sets");
    if (agenda_.agents() != swf_.agents())
        throw ParameterError("agenda part and preference part disagree on the agent count");
}

PafeRule::PafeRule(std::string name, AgendaRule agenda_part, Rule swf_part,
                   std::function<int(const std::vector<unsigned>&, const std::vector<int>&)>
                       entangled)
    : PafeRule(std::move(name), std::move(agenda_part), std::move(swf_part)) {
    entangled_ = std::move(entangled);
    if (!entangled_) throw ParameterError("entangled preference projection is empty");
}

unsigned PafeRule::agenda_out(const std::vector<unsigned>& proposals) const {
    return agenda_.eval(proposals);
}

int PafeRule::preference_out(const std::vector<unsigned>& proposals,
                             const std::vector<int>& pref_ids) const {
    if (entangled_) return entangled_(proposals, pref_ids);
    return swf_.eval_ids(pref_ids);
}

PafeRule entangled_pafe_double(const GroundPtr& ground, int agents) {
    Rule even = dictator(ground, agents, 1);
    Rule odd = dictator(ground, agents, std::min(2, agents));
    auto route = [even, odd](const std::vector<unsigned>& proposals, const std::vector<int>& ids) {
        int bits = 0;
        for (unsigned p : proposals) bits += std::popcount(p);
        return (bits & 1) == 0 ? even.eval_ids(ids) : odd.eval_ids(ids);
    };
    return PafeRule("entangled-parity-double", union_agenda_rule(ground, agents), even,
                    std::move(route));
}

// ---------------------------------------------------------------------------
// Sequential composition

SafeRule::SafeRule(std::string name, AgendaRule agenda_part, RuleScheme scheme)
    : name_(std::move(name)), agenda_(std::move(agenda_part)), scheme_(std::move(scheme)) {
    if (!scheme_) throw ParameterError("sequential composition has no per-agenda scheme");
    cache_.resize(1u << agenda_.ground()->size());
}

const Rule& SafeRule::family(unsigned agenda_mask) const {
    static std::mutex mu;
    if (agenda_mask == 0) throw EmptyAgenda("no rule on an empty agenda");
    if (agenda_mask >= cache_.size())
        throw ParameterError("agenda mentions alternatives outside the ground set");
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache_[agenda_mask];
    if (!slot) {
        const GroundPtr sub =
            agenda_.ground()->subset(mask_indices(agenda_mask, agenda_.ground()->size()));
        Rule built = scheme_(sub);
        if (*built.ground() != *sub)
            throw ParameterError("scheme returned a rule on the wrong ground set for agenda " +
                                 label_list(agenda_.ground(), agenda_mask));
        if (built.agents() != agenda_.agents())
            throw ParameterError("scheme returned a rule with the wrong agent count");
        slot.emplace(std::move(built));
    }
    return *slot;
}

SafeRule make_safe_uniform(const GroundPtr& ground, int agents, std::string name,
                           RuleScheme scheme) {
    return SafeRule(std::move(name), union_agenda_rule(ground, agents), std::move(scheme));
}

namespace {

// Generalized target-match on a sub-agenda: the hidden part of the original
// rule's agenda is intersected with the sub-agenda, so the visible part may
// grow to everything (plain full-agreement trigger) or shrink to nothing
// (every report matches, a constant rule).
Rule reinstantiated_target_match(const GroundPtr& sub, int agents, int agent,
                                 const TotalPreorder& target, unsigned masked_in_sub) {
    const int ms = sub->size();
    const unsigned visible = ((1u << ms) - 1u) & ~masked_in_sub;
    const Lattice& lat = Lattice::of(sub);
    std::vector<Mask> vis(static_cast<size_t>(lat.count()));
    for (int e = 0; e < lat.count(); ++e)
        vis[static_cast<size_t>(e)] = bits::compress(lat.element(e).mask(), visible, ms);
    const Mask target_vis = bits::compress(target.mask(), visible, ms);
    const int target_id = lat.id_of(target);
    std::string name = "remark3:i=" + std::to_string(agent) +
                       ",Rstar=" + render_preorder(target) + ",Bstar=" +
                       (masked_in_sub ? label_list(sub, masked_in_sub) : std::string("(none)"));
    return Rule(std::move(name), sub, agents,
                [vis, target_vis, target_id, agent](const std::vector<int>& ids) {
                    for (size_t j = 0; j < ids.size(); ++j) {
                        if (static_cast<int>(j) == agent - 1) continue;
                        if (vis[static_cast<size_t>(ids[j])] == target_vis) return target_id;
                    }
                    return ids[static_cast<size_t>(agent - 1)];
                });
}

std::string value_after(const std::string& text, const std::string& key) {
    const size_t at = text.find(key);
    if (at == std::string::npos)
        throw ParseError("rule name lacks expected parameter " + key + ": " + text);
    const size_t from = at + key.size();
    size_t to = text.find(',', from);
    // Bstar's label list is comma-separated and runs to the end of the name.
    if (key == ",Bstar=") to = std::string::npos;
    return text.substr(from, to == std::string::npos ? std::string::npos : to - from);
}

} // namespace

std::optional<RuleScheme> natural_scheme(const Rule& rule) {
    const std::string name = rule.name();
    const int agents = rule.agents();
    const size_t colon = name.find(':');
    const std::string head = name.substr(0, colon);

    // Parameter-free heads and integer-parameter heads survive restriction
    // verbatim; the spec parser rebuilds them on the sub-ground.
    static const std::vector<std::string> verbatim = {
        "comajority", "stalemate", "borda", "un", "leadingpair",
        "quota",      "dictator",  "invdictator", "bordaproj"};
    if (std::find(verbatim.begin(), verbatim.end(), head) != verbatim.end())
        return RuleScheme([name, agents](const GroundPtr& sub) {
            return parse_rule_spec(sub, agents, name);
        });

    if (head == "constant") {
        const GroundPtr parent = rule.ground();
        const std::string enc = value_after(name, "constant:R=");
        return RuleScheme([parent, agents, enc](const GroundPtr& sub) {
            const TotalPreorder full = parse_preorder(parent, enc);
            return constant_rule(sub, agents, restrict(full, sub->labels()));
        });
    }

    if (head == "remark3") {
        const GroundPtr parent = rule.ground();
        const int agent = std::stoi(value_after(name, "remark3:i="));
        const std::string enc = value_after(name, ",Rstar=");
        const std::string bstar = value_after(name, ",Bstar=");
        return RuleScheme([parent, agents, agent, enc, bstar](const GroundPtr& sub) {
            const TotalPreorder target = restrict(parse_preorder(parent, enc), sub->labels());
            unsigned masked = 0;
            std::stringstream ss(bstar);
            std::string label;
            while (std::getline(ss, label, ','))
                if (sub->contains(label)) masked |= 1u << sub->index(label);
            return reinstantiated_target_match(sub, agents, agent, target, masked);
        });
    }

    // Rules anchored to a fixed alternative (lex-top) stop making sense on
    // agendas that drop it; there is no total reinstantiation.
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Parallel-composition manipulation check

CheckReport check_AMP_P(const PafeRule& pafe, const CheckOptions& opt) {
    const auto t0 = Clock::now();
    const GroundPtr& g = pafe.agenda_part().ground();
    require_scale(g, pafe.agenda_part().agents(), "agenda manipulation checks");
    const int threads = resolve_threads(opt.threads);
    const int m = g->size();
    const int n = pafe.agenda_part().agents();
    AmpView view(g);
    const ProfileIndex pix(*view.lat, n);
    const ProposalIndex bix(m, n);

    struct ProposalPair {
        std::vector<unsigned> first, second;
        unsigned agenda_first = 0, agenda_second = 0;
    };
    std::vector<ProposalPair> pairs;
    const bool exhaustive_proposals = opt.mode == CheckMode::Exhaustive;
    if (exhaustive_proposals) {
        std::vector<std::vector<unsigned>> all(static_cast<size_t>(bix.total));
        std::vector<unsigned> agenda(static_cast<size_t>(bix.total));
        for (long long p = 0; p < bix.total; ++p) {
            bix.decode(p, all[static_cast<size_t>(p)]);
            agenda[static_cast<size_t>(p)] = pafe.agenda_out(all[static_cast<size_t>(p)]);
        }
        for (long long a = 0; a < bix.total; ++a)
            for (long long b = 0; b < bix.total; ++b) {
                const unsigned C = agenda[static_cast<size_t>(a)];
                const unsigned D = agenda[static_cast<size_t>(b)];
                if (C & ~D) continue;
                pairs.push_back({all[static_cast<size_t>(a)], all[static_cast<size_t>(b)], C, D});
            }
    } else {
        // Same-proposal pairs realize every nested agenda pair; seeded draws
        // add proposal variety for compositions that read the proposals.
        std::vector<unsigned> prop(static_cast<size_t>(n));
        for (unsigned c = 1; c < (1u << m); ++c)
            for (unsigned d = 1; d < (1u << m); ++d) {
                if (c & ~d) continue;
                ProposalPair pp;
                pp.first.assign(static_cast<size_t>(n), c);
                pp.second.assign(static_cast<size_t>(n), d);
                pp.agenda_first = pafe.agenda_out(pp.first);
                pp.agenda_second = pafe.agenda_out(pp.second);
                if (pp.agenda_first & ~pp.agenda_second) continue;
                pairs.push_back(std::move(pp));
            }
        std::mt19937_64 rng(opt.seed);
        for (long long s = 0; s < opt.samples; ++s) {
            ProposalPair pp;
            pp.first.resize(static_cast<size_t>(n));
            pp.second.resize(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) {
                pp.first[static_cast<size_t>(i)] =
                    1u + static_cast<unsigned>(rng() % static_cast<unsigned>(bix.base));
                pp.second[static_cast<size_t>(i)] =
                    1u + static_cast<unsigned>(rng() % static_cast<unsigned>(bix.base));
            }
            pp.agenda_first = pafe.agenda_out(pp.first);
            pp.agenda_second = pafe.agenda_out(pp.second);
            if (pp.agenda_first & ~pp.agenda_second) continue;
            pairs.push_back(std::move(pp));
        }
    }

    // Restriction tables for every agenda that can appear on the small side.
    for (const auto& pp : pairs) view.restriction_to(pp.agenda_first);

    // Decomposable compositions admit one shared output table.
    std::vector<int> shared_out;
    if (pafe.decomposable()) {
        shared_out.resize(static_cast<size_t>(pix.total));
        std::vector<int> ids;
        for (long long p = 0; p < pix.total; ++p) {
            pix.decode(p, ids);
            shared_out[static_cast<size_t>(p)] = pafe.swf_part().eval_ids(ids);
        }
    }

    const long long total = static_cast<long long>(pairs.size()) * pix.total;
    const auto pred = [&](long long idx) {
        const ProposalPair& pp = pairs[static_cast<size_t>(idx / pix.total)];
        const long long p = idx % pix.total;
        thread_local std::vector<int> ids;
        pix.decode(p, ids);
        int x_full, y_full;
        if (!shared_out.empty()) {
            x_full = shared_out[static_cast<size_t>(p)];
            y_full = x_full;
        } else {
            x_full = pafe.preference_out(pp.first, ids);
            y_full = pafe.preference_out(pp.second, ids);
        }
        const auto& rest = view.full_to_sum.at(pp.agenda_first);
        const int x = rest[static_cast<size_t>(x_full)];
        const int y = rest[static_cast<size_t>(y_full)];
        if (x == y) return false;
        for (int i = 0; i < pix.n; ++i)
            if (view.one_sided(ids[static_cast<size_t>(i)], x, y)) return true;
        return false;
    };
    const long long hit = first_hit(total, threads, pred);

    CheckReport rep;
    rep.axiom = "AMP_P";
    rep.rule = pafe.name();
    rep.domain_size = total * n;
    const bool conclusive = exhaustive_proposals || pafe.decomposable();
    if (conclusive) {
        rep.scope = "exhaustive(m=" + std::to_string(m) + ",n=" + std::to_string(n) + ")";
    } else {
        std::ostringstream os;
        os << "exhaustive-preferences(m=" << m << ",n=" << n << ")+sampled-proposals(seed="
           << opt.seed << ",samples=" << opt.samples << ")";
        rep.scope = os.str();
    }
    if (hit < 0) {
        rep.verdict = conclusive ? "holds" : "inconclusive-sampled";
    } else {
        rep.verdict = "fails";
        const ProposalPair& pp = pairs[static_cast<size_t>(hit / pix.total)];
        const long long p = hit % pix.total;
        std::vector<int> ids;
        pix.decode(p, ids);
        const int x_full = pafe.preference_out(pp.first, ids);
        const int y_full = pafe.preference_out(pp.second, ids);
        const auto& rest = view.full_to_sum.at(pp.agenda_first);
        const int x = rest[static_cast<size_t>(x_full)];
        const int y = rest[static_cast<size_t>(y_full)];
        int agent = -1;
        for (int i = 0; i < pix.n && agent < 0; ++i)
            if (view.one_sided(ids[static_cast<size_t>(i)], x, y)) agent = i;
        rep.witness["proposals"] = render_proposals(g, pp.first);
        rep.witness["proposals2"] = render_proposals(g, pp.second);
        rep.witness["agendaC"] = label_list(g, pp.agenda_first);
        rep.witness["agendaD"] = label_list(g, pp.agenda_second);
        rep.witness["profile"] = render_profile_ids(*view.lat, ids);
        rep.witness["agent"] = std::to_string(agent + 1);
        rep.witness["restriction"] = view.sum->render(x);
        rep.witness["restriction2"] = view.sum->render(y);
        rep.witness["preferred"] = preferred_side(view, ids[static_cast<size_t>(agent)], x, y,
                                                  "restriction", "restriction2");
    }
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

CheckReport check_AMP_P(const Rule& rule, const CheckOptions& opt) {
    PafeRule pafe(rule.name(), union_agenda_rule(rule.ground(), rule.agents()), rule);
    return check_AMP_P(pafe, opt);
}

// ---------------------------------------------------------------------------
// Sequential-composition manipulation check

namespace {

CheckReport amp_s_core(const std::string& display_name, const AgendaRule& agenda,
                       const std::function<const Rule&(unsigned)>& family,
                       const CheckOptions& opt) {
    const auto t0 = Clock::now();
    const GroundPtr& g = agenda.ground();
    require_scale(g, agenda.agents(), "agenda manipulation checks");
    const int threads = resolve_threads(opt.threads);
    const int m = g->size();
    const int n = agenda.agents();
    AmpView view(g);
    const ProfileIndex pix(*view.lat, n);

    // The achievable agendas, by exhaustive scan of the proposal space.
    std::vector<unsigned> achievable;
    {
        const ProposalIndex bix(m, n);
        std::vector<char> seen(1u << m, 0);
        std::vector<unsigned> proposals;
        for (long long p = 0; p < bix.total; ++p) {
            bix.decode(p, proposals);
            seen[agenda.eval(proposals)] = 1;
        }
        for (unsigned c = 1; c < (1u << m); ++c)
            if (seen[c]) achievable.push_back(c);
    }

    // Per-agenda machinery: the family rule, restricted-profile ids, and the
    // sum ids of its outputs.
    struct AgendaSide {
        unsigned mask = 0;
        const Rule* rule = nullptr;
        std::vector<int> full_to_sub; // full lattice id -> sub lattice id
        std::vector<int> sub_to_sum;  // sub lattice id -> sum id
    };
    std::map<unsigned, AgendaSide> sides;
    for (unsigned c : achievable) {
        AgendaSide side;
        side.mask = c;
        side.rule = &family(c);
        const auto keep = mask_indices(c, m);
        const Lattice& sub = side.rule->lattice();
        side.full_to_sub.resize(static_cast<size_t>(view.lat->count()));
        for (int e = 0; e < view.lat->count(); ++e)
            side.full_to_sub[static_cast<size_t>(e)] =
                sub.id_of(restrict_indexed(view.lat->element(e), keep));
        side.sub_to_sum.resize(static_cast<size_t>(sub.count()));
        for (int e = 0; e < sub.count(); ++e)
            side.sub_to_sum[static_cast<size_t>(e)] = view.sum->id_of(sub.element(e));
        sides.emplace(c, std::move(side));
    }

    // Nested agenda pairs, plus the cross-restriction of the large side's
    // outputs onto the small side.
    struct AgendaPair {
        const AgendaSide* small = nullptr;
        const AgendaSide* large = nullptr;
        std::vector<int> large_out_to_sum; // large sub id -> sum id on small agenda
    };
    std::vector<AgendaPair> pairs;
    for (unsigned d : achievable)
        for (unsigned c : achievable) {
            if (c & ~d) continue;
            AgendaPair pr;
            pr.small = &sides.at(c);
            pr.large = &sides.at(d);
            const Lattice& large_sub = pr.large->rule->lattice();
            std::vector<std::string> small_labels;
            for (int i : mask_indices(c, m)) small_labels.push_back(g->label(i));
            pr.large_out_to_sum.resize(static_cast<size_t>(large_sub.count()));
            for (int e = 0; e < large_sub.count(); ++e)
                pr.large_out_to_sum[static_cast<size_t>(e)] =
                    view.sum->id_of(restrict(large_sub.element(e), small_labels));
            pairs.push_back(std::move(pr));
        }

    const long long total = static_cast<long long>(pairs.size()) * pix.total;
    const auto outputs_at = [&](const AgendaPair& pr, const std::vector<int>& ids, int* x,
                                int* y) {
        thread_local std::vector<int> sub_ids;
        sub_ids.resize(static_cast<size_t>(ids.size()));
        for (size_t i = 0; i < ids.size(); ++i)
            sub_ids[i] = pr.small->full_to_sub[static_cast<size_t>(ids[i])];
        *x = pr.small->sub_to_sum[static_cast<size_t>(pr.small->rule->eval_ids(sub_ids))];
        for (size_t i = 0; i < ids.size(); ++i)
            sub_ids[i] = pr.large->full_to_sub[static_cast<size_t>(ids[i])];
        *y = pr.large_out_to_sum[static_cast<size_t>(pr.large->rule->eval_ids(sub_ids))];
    };
    const auto pred = [&](long long idx) {
        const AgendaPair& pr = pairs[static_cast<size_t>(idx / pix.total)];
        const long long p = idx % pix.total;
        thread_local std::vector<int> ids;
        pix.decode(p, ids);
        int x, y;
        outputs_at(pr, ids, &x, &y);
        if (x == y) return false;
        for (int i = 0; i < pix.n; ++i)
            if (view.one_sided(ids[static_cast<size_t>(i)], x, y)) return true;
        return false;
    };
    const long long hit = first_hit(total, threads, pred);

    CheckReport rep;
    rep.axiom = "AMP_S";
    rep.rule = display_name;
    rep.scope = "exhaustive(m=" + std::to_string(m) + ",n=" + std::to_string(n) + ")";
    rep.domain_size = total * n;
    if (hit < 0) {
        rep.verdict = "holds";
    } else {
        rep.verdict = "fails";
        const AgendaPair& pr = pairs[static_cast<size_t>(hit / pix.total)];
        const long long p = hit % pix.total;
        std::vector<int> ids;
        pix.decode(p, ids);
        int x, y;
        outputs_at(pr, ids, &x, &y);
        int agent = -1;
        for (int i = 0; i < pix.n && agent < 0; ++i)
            if (view.one_sided(ids[static_cast<size_t>(i)], x, y)) agent = i;
        rep.witness["agendaC"] = label_list(g, pr.small->mask);
        rep.witness["agendaD"] = label_list(g, pr.large->mask);
        rep.witness["profile"] = render_profile_ids(*view.lat, ids);
        rep.witness["agent"] = std::to_string(agent + 1);
        rep.witness["output_c"] = view.sum->render(x);
        rep.witness["output_dc"] = view.sum->render(y);
        rep.witness["preferred"] =
            preferred_side(view, ids[static_cast<size_t>(agent)], x, y, "output_c", "output_dc");
    }
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

} // namespace

CheckReport check_AMP_S(const SafeRule& safe, const CheckOptions& opt) {
    return amp_s_core(safe.name(), safe.agenda_part(),
                      [&safe](unsigned mask) -> const Rule& { return safe.family(mask); }, opt);
}

CheckReport check_AMP_S(const Rule& rule, const CheckOptions& opt) {
    const GroundPtr& g = rule.ground();
    require_scale(g, rule.agents(), "agenda manipulation checks");
    const int m = g->size();
    const int n = rule.agents();
    const Lattice& lat = rule.lattice();
    const ProfileIndex pix(lat, n);

    // Restriction family: the rule's full-ground outputs, restricted, must be
    // a function of the restricted profile alone. The build detects any
    // conflict exhaustively.
    std::vector<int> full_out(static_cast<size_t>(pix.total));
    {
        std::vector<int> ids;
        for (long long p = 0; p < pix.total; ++p) {
            pix.decode(p, ids);
            full_out[static_cast<size_t>(p)] = rule.eval_ids(ids);
        }
    }
    std::map<unsigned, std::shared_ptr<std::vector<int>>> tables;
    std::map<unsigned, GroundPtr> subs;
    std::vector<int> ids;
    for (unsigned c = 1; c < (1u << m); ++c) {
        const auto keep = mask_indices(c, m);
        const GroundPtr sub = g->subset(keep);
        const Lattice& sublat = Lattice::of(sub);
        std::vector<int> full_to_sub(static_cast<size_t>(lat.count()));
        for (int e = 0; e < lat.count(); ++e)
            full_to_sub[static_cast<size_t>(e)] = sublat.id_of(restrict_indexed(lat.element(e), keep));
        long long sub_total = 1;
        for (int i = 0; i < n; ++i) sub_total *= sublat.count();
        auto table = std::make_shared<std::vector<int>>(static_cast<size_t>(sub_total), -1);
        for (long long p = 0; p < pix.total; ++p) {
            pix.decode(p, ids);
            long long key = 0;
            for (int i = 0; i < n; ++i)
                key = key * sublat.count() + full_to_sub[static_cast<size_t>(ids[static_cast<size_t>(i)])];
            const int value = full_to_sub[static_cast<size_t>(full_out[static_cast<size_t>(p)])];
            int& slot = (*table)[static_cast<size_t>(key)];
            if (slot == -1) {
                slot = value;
            } else if (slot != value) {
                throw FamilyUndefined(
                    "rule " + rule.name() + " has no restriction family: restricted profiles on " +
                    label_list(g, c) +
                    " do not determine the restricted output; supply an explicit scheme");
            }
        }
        tables.emplace(c, std::move(table));
        subs.emplace(c, sub);
    }

    RuleScheme scheme = [rule, tables, subs, g](const GroundPtr& sub) {
        unsigned mask = 0;
        for (const auto& label : sub->labels()) mask |= 1u << g->index(label);
        const auto table = tables.at(mask);
        const int count = Lattice::of(subs.at(mask)).count();
        return Rule(rule.name(), subs.at(mask), rule.agents(),
                    [table, count](const std::vector<int>& sub_ids) {
                        long long key = 0;
                        for (int id : sub_ids) key = key * count + id;
                        const int value = (*table)[static_cast<size_t>(key)];
                        if (value < 0)
                            throw InternalError("restriction family missing a profile entry");
                        return value;
                    });
    };
    SafeRule safe(rule.name(), union_agenda_rule(g, n), std::move(scheme));
    return check_AMP_S(safe, opt);
}

// ---------------------------------------------------------------------------
// Catalog audit of the two implication directions

CheckReport implication_suite_prop2(const GroundPtr& ground, int agents,
                                    const CheckOptions& opt) {
    const auto t0 = Clock::now();
    require_scale(ground, agents, "agenda manipulation checks");
    const auto catalog = standard_catalog(ground, agents);

    CheckReport rep;
    rep.axiom = "prop2";
    rep.rule = "catalog";
    rep.scope = "exhaustive(m=" + std::to_string(ground->size()) + ",n=" + std::to_string(agents) +
                ")";
    rep.domain_size = static_cast<long long>(catalog.size());

    std::string independence_anomalies;  // independence holds, sequential check fails
    std::string projection_anomalies;    // sequential check holds, projective independence fails
    for (const auto& rule : catalog) {
        const CheckReport iia = check_IIA(rule, opt);
        const CheckReport iiap = check_IIAP(rule, opt);
        std::string amp_verdict;
        if (iia.holds()) {
            amp_verdict = check_AMP_S(rule, opt).verdict;
        } else if (auto scheme = natural_scheme(rule)) {
            SafeRule safe = make_safe_uniform(ground, agents, rule.name(), std::move(*scheme));
            amp_verdict = check_AMP_S(safe, opt).verdict;
        } else {
            amp_verdict = "undefined(no scheme)";
        }
        rep.witness[rule.name()] =
            "IIA=" + iia.verdict + " AMP_S=" + amp_verdict + " IIAP=" + iiap.verdict;
        if (rule.name().rfind("remark3:", 0) == 0) {
            // The target-match rule is the interesting boundary case: were it
            // sequentially manipulation-proof while failing projective
            // independence, it would refute the second implication direction.
            std::string assessment = "computed AMP_S=" + amp_verdict + ", IIAP=" + iiap.verdict;
            if (amp_verdict == "holds" && iiap.fails())
                assessment += ": contradicts the sequential->projective implication";
            else
                assessment += ": consistent with the sequential->projective implication; an "
                              "AMP_S-positive reading of this rule would contradict it";
            rep.witness["remark3 assessment"] = assessment;
        }
        if (iia.holds() && amp_verdict == "fails") {
            if (!independence_anomalies.empty()) independence_anomalies += "; ";
            independence_anomalies += rule.name();
        }
        if (amp_verdict == "holds" && iiap.fails()) {
            if (!projection_anomalies.empty()) projection_anomalies += "; ";
            projection_anomalies += rule.name();
        }
    }
    rep.witness["anomalies independence->sequential"] =
        independence_anomalies.empty() ? "(none)" : independence_anomalies;
    rep.witness["anomalies sequential->projective"] =
        projection_anomalies.empty() ? "(none)" : projection_anomalies;
    rep.verdict =
        independence_anomalies.empty() && projection_anomalies.empty() ? "holds" : "fails";
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

} // namespace medvote
