#include "medvote/axioms.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <exception>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

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

// Smallest index in [0, total) where pred holds, or -1. The range is split
// into contiguous chunks scanned concurrently; a chunk is abandoned once a
// hit below its start is known, so the minimum is exact and deterministic.
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

// Shared per-checker view of a rule: profile indexing (lexicographic, agent 1
// most significant), relation masks per element, and optionally the full
// output table, filled concurrently.
struct Scan {
    const Rule* rule = nullptr;
    const Lattice* lat = nullptr;
    int m = 0;
    int n = 0;
    int count = 0;
    long long profiles = 0;
    std::vector<long long> stride; // per agent
    std::vector<Mask> rel;         // per element id
    std::vector<Mask> strict;      // rel minus its converse
    std::vector<int> out;          // per profile index; empty unless filled

    int agent_id(long long p, int i) const {
        return static_cast<int>((p / stride[static_cast<size_t>(i)]) % count);
    }
    void decode(long long p, std::vector<int>& ids) const {
        ids.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) ids[static_cast<size_t>(i)] = agent_id(p, i);
    }
    long long encode(const std::vector<int>& ids) const {
        long long p = 0;
        for (int i = 0; i < n; ++i) p = p * count + ids[static_cast<size_t>(i)];
        return p;
    }
    long long with_agent(long long p, int i, int v) const {
        return p + (v - agent_id(p, i)) * stride[static_cast<size_t>(i)];
    }
    int out_id(long long p) const {
        if (!out.empty()) return out[static_cast<size_t>(p)];
        thread_local std::vector<int> ids;
        decode(p, ids);
        return rule->eval_ids(ids);
    }
    Mask out_rel(long long p) const { return rel[static_cast<size_t>(out_id(p))]; }
    std::string profile_text(long long p) const {
        thread_local std::vector<int> ids;
        decode(p, ids);
        return render_profile_ids(*lat, ids);
    }
    std::string enc(int id) const { return render_preorder(lat->element(id)); }
    std::string pair_text(int i, int j) const {
        return lat->ground()->label(i) + "," + lat->ground()->label(j);
    }
};

Scan make_scan(const Rule& rule, int threads, bool fill_outputs) {
    if (rule.ground()->size() > 4) {
        throw GroundTooLarge("axiom checkers support at most 4 alternatives, got " +
                             std::to_string(rule.ground()->size()));
    }
    if (rule.agents() != 3) {
        throw ParameterError("axiom checkers require exactly three agents, got " +
                             std::to_string(rule.agents()));
    }
    Scan s;
    s.rule = &rule;
    s.lat = &rule.lattice();
    s.m = rule.ground()->size();
    s.n = rule.agents();
    s.count = s.lat->count();
    s.profiles = 1;
    for (int i = 0; i < s.n; ++i) s.profiles *= s.count;
    s.stride.resize(static_cast<size_t>(s.n));
    long long st = 1;
    for (int i = s.n - 1; i >= 0; --i) {
        s.stride[static_cast<size_t>(i)] = st;
        st *= s.count;
    }
    s.rel.resize(static_cast<size_t>(s.count));
    s.strict.resize(static_cast<size_t>(s.count));
    for (int e = 0; e < s.count; ++e) {
        const Mask r = s.lat->element(e).mask();
        s.rel[static_cast<size_t>(e)] = r;
        s.strict[static_cast<size_t>(e)] = r & ~bits::converse(r, s.m);
    }
    if (fill_outputs) {
        s.out.assign(static_cast<size_t>(s.profiles), -1);
        const int T = std::max(1, std::min<int>(threads, static_cast<int>(
                                   std::min<long long>(s.profiles, 64))));
        const long long chunk = (s.profiles + T - 1) / T;
        std::vector<std::thread> pool;
        std::exception_ptr error;
        std::mutex error_mu;
        for (int t = 0; t < T; ++t) {
            pool.emplace_back([&, t] {
                try {
                    std::vector<int> ids;
                    const long long lo = t * chunk;
                    const long long hi = std::min(s.profiles, lo + chunk);
                    for (long long p = lo; p < hi; ++p) {
                        s.decode(p, ids);
                        s.out[static_cast<size_t>(p)] = rule.eval_ids(ids);
                    }
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (error) std::rethrow_exception(error);
    }
    return s;
}

bool exhaustive_mode(const CheckOptions& opt, int m) {
    if (opt.mode == CheckMode::Exhaustive) return true;
    if (opt.mode == CheckMode::Sampled) return false;
    return m == 3;
}

std::string scope_text(bool exhaustive, const Scan& s, const CheckOptions& opt) {
    std::ostringstream os;
    if (exhaustive) {
        os << "exhaustive(m=" << s.m << ",n=" << s.n << ")";
    } else {
        os << "sampled(m=" << s.m << ",n=" << s.n << ",seed=" << opt.seed
           << ",samples=" << opt.samples << ")";
    }
    return os.str();
}

CheckReport base_report(const std::string& axiom, const Rule& rule, bool exhaustive,
                        const Scan& s, const CheckOptions& opt) {
    CheckReport rep;
    rep.axiom = axiom;
    rep.rule = rule.name();
    rep.scope = scope_text(exhaustive, s, opt);
    return rep;
}

long long rand_below(std::mt19937_64& rng, long long bound) {
    return static_cast<long long>(rng() % static_cast<unsigned long long>(bound));
}

int lowest_pair(Mask mask, int m, int* x, int* y) {
    const int bit = std::countr_zero(mask);
    *x = bit / m;
    *y = bit % m;
    return bit;
}

// Off-diagonal pairs in canonical order: (0,1),(0,2),(1,0),...
std::vector<std::pair<int, int>> ordered_pairs(int m) {
    std::vector<std::pair<int, int>> ps;
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
            if (x != y) ps.emplace_back(x, y);
    return ps;
}

const int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                          {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

} // namespace

// ---------------------------------------------------------------------------
// Profile-symmetry and unanimity

CheckReport check_AN(const Rule& rule, const CheckOptions& opt) {
    const auto t0 = Clock::now();
    const int threads = resolve_threads(opt.threads);
    const bool ex = exhaustive_mode(opt, rule.ground()->size());
    Scan s = make_scan(rule, threads, ex);
    CheckReport rep = base_report("AN", rule, ex, s, opt);

    auto fill_witness = [&](long long p, int k) {
        std::vector<int> ids, perm(3);
        s.decode(p, ids);
        for (int j = 0; j < 3; ++j) perm[static_cast<size_t>(j)] = ids[kPerms[k][j]];
        rep.witness["profile"] = s.profile_text(p);
        rep.witness["permutation"] = std::to_string(kPerms[k][0] + 1) + "," +
                                     std::to_string(kPerms[k][1] + 1) + "," +
                                     std::to_string(kPerms[k][2] + 1);
        rep.witness["output"] = s.enc(s.out_id(p));
        rep.witness["output_permuted"] = s.enc(rule.eval_ids(perm));
    };
    auto violates = [&](long long p, int k) {
        thread_local std::vector<int> ids, perm;
        s.decode(p, ids);
        perm.resize(3);
        for (int j = 0; j < 3; ++j) perm[static_cast<size_t>(j)] = ids[kPerms[k][j]];
        return s.out_id(p) != s.out_id(s.encode(perm));
    };

    if (ex) {
        rep.domain_size = s.profiles * 6;
        const long long hit = first_hit(rep.domain_size, threads, [&](long long i) {
            return violates(i / 6, static_cast<int>(i % 6));
        });
        rep.verdict = hit < 0 ? "holds" : "fails";
        if (hit >= 0) fill_witness(hit / 6, static_cast<int>(hit % 6));
    } else {
        std::mt19937_64 rng(opt.seed);
        rep.domain_size = opt.samples;
        rep.verdict = "inconclusive-sampled";
        for (long long k = 0; k < opt.samples; ++k) {
            const long long p = rand_below(rng, s.profiles);
            const int perm = static_cast<int>(rand_below(rng, 6));
            if (violates(p, perm)) {
                rep.verdict = "fails";
                fill_witness(p, perm);
                rep.domain_size = k + 1;
                break;
            }
        }
    }
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

CheckReport check_ID(const Rule& rule, const CheckOptions& opt) {
    const auto t0 = Clock::now();
    const int threads = resolve_threads(opt.threads);
    // The unanimous diagonal is tiny, so this check is always exhaustive.
    Scan s = make_scan(rule, threads, false);
    CheckReport rep = base_report("ID", rule, true, s, opt);
    rep.domain_size = s.count;
    rep.verdict = "holds";
    std::vector<int> ids(static_cast<size_t>(s.n));
    for (int e = 0; e < s.count; ++e) {
        std::fill(ids.begin(), ids.end(), e);
        const int got = rule.eval_ids(ids);
        if (got != e) {
            rep.verdict = "fails";
            rep.witness["preference"] = s.enc(e);
            rep.witness["output"] = s.enc(got);
            break;
        }
    }
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

// ---------------------------------------------------------------------------
// Neutrality

CheckReport check_NT(const Rule& rule, const CheckOptions& opt) {
    const auto t0 = Clock::now();
    const int threads = resolve_threads(opt.threads);
    const bool ex = exhaustive_mode(opt, rule.ground()->size());
    Scan s = make_scan(rule, threads, ex);
    CheckReport rep = base_report("NT", rule, ex, s, opt);

    auto stance_sig = [&](long long p, int x, int y) {
        const Mask bit = bits::pair_bit(x, y, s.m);
        unsigned sig = 0;
        for (int i = 0; i < s.n; ++i)
            if (s.rel[static_cast<size_t>(s.agent_id(p, i))] & bit) sig |= 1u << i;
        return sig;
    };
    auto pattern_text = [&](unsigned sig) {
        std::string t;
        for (int i = 0; i < s.n; ++i) {
            if (i) t += ",";
            t += (sig >> i & 1u) ? "1" : "0";
        }
        return t;
    };
    auto fill_witness = [&](int x, int y, unsigned sig, long long p1, long long p2) {
        rep.witness["pair"] = s.pair_text(x, y);
        rep.witness["pattern"] = pattern_text(sig);
        rep.witness["profile"] = s.profile_text(p1);
        rep.witness["profile2"] = s.profile_text(p2);
        rep.witness["forward"] = (s.out_rel(p1) & bits::pair_bit(x, y, s.m)) ? "1" : "0";
        rep.witness["backward"] = (s.out_rel(p2) & bits::pair_bit(y, x, s.m)) ? "1" : "0";
    };

    if (ex) {
        rep.verdict = "holds";
        rep.domain_size = 0;
        for (const auto& [x, y] : ordered_pairs(s.m)) {
            // Buckets over the three-agent stance signature: first profile
            // producing each social answer, on the forward and reversed side.
            long long fwd[8][2], bwd[8][2], cf[8] = {0}, cb[8] = {0};
            for (auto& b : fwd) b[0] = b[1] = -1;
            for (auto& b : bwd) b[0] = b[1] = -1;
            const Mask bxy = bits::pair_bit(x, y, s.m);
            const Mask byx = bits::pair_bit(y, x, s.m);
            for (long long p = 0; p < s.profiles; ++p) {
                const unsigned sf = stance_sig(p, x, y);
                const unsigned sb = stance_sig(p, y, x);
                const int vf = (s.out_rel(p) & bxy) ? 1 : 0;
                const int vb = (s.out_rel(p) & byx) ? 1 : 0;
                ++cf[sf];
                ++cb[sb];
                if (fwd[sf][vf] < 0) fwd[sf][vf] = p;
                if (bwd[sb][vb] < 0) bwd[sb][vb] = p;
            }
            for (unsigned sig = 0; sig < 8; ++sig)
                rep.domain_size += cf[sig] * cb[sig];
            if (rep.fails()) continue; // keep counting the full domain
            for (unsigned sig = 0; sig < 8; ++sig) {
                const bool two_sided = fwd[sig][0] >= 0 && bwd[sig][1] >= 0;
                const bool flipped = fwd[sig][1] >= 0 && bwd[sig][0] >= 0;
                if (two_sided) {
                    fill_witness(x, y, sig, fwd[sig][0], bwd[sig][1]);
                } else if (flipped) {
                    fill_witness(x, y, sig, fwd[sig][1], bwd[sig][0]);
                } else {
                    continue;
                }
                rep.verdict = "fails";
                break;
            }
        }
    } else {
        std::mt19937_64 rng(opt.seed);
        const auto pairs = ordered_pairs(s.m);
        rep.verdict = "inconclusive-sampled";
        long long tested = 0;
        for (long long k = 0; k < opt.samples; ++k) {
            const auto [x, y] = pairs[static_cast<size_t>(
                rand_below(rng, static_cast<long long>(pairs.size())))];
            const long long p1 = rand_below(rng, s.profiles);
            const unsigned sig = stance_sig(p1, x, y);
            for (int tries = 0; tries < 64; ++tries) {
                const long long p2 = rand_below(rng, s.profiles);
                if (stance_sig(p2, y, x) != sig) continue;
                ++tested;
                const bool vf = (s.out_rel(p1) & bits::pair_bit(x, y, s.m)) != 0;
                const bool vb = (s.out_rel(p2) & bits::pair_bit(y, x, s.m)) != 0;
                if (vf != vb) {
                    rep.verdict = "fails";
                    fill_witness(x, y, sig, p1, p2);
                }
                break;
            }
            if (rep.fails()) break;
        }
        rep.domain_size = tested;
    }
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

CheckReport check_WNT(const Rule& rule, const CheckOptions& opt) {
    const auto t0 = Clock::now();
    const int threads = resolve_threads(opt.threads);
    const bool ex = exhaustive_mode(opt, rule.ground()->size());
    Scan s = make_scan(rule, threads, ex);
    CheckReport rep = base_report("WNT", rule, ex, s, opt);

    const auto& irr = s.lat->irreducible_ids();
    const int ni = static_cast<int>(irr.size());
    // contain[e] bit j: element e's relation is a subset of bipartition j.
    std::vector<unsigned> contain(static_cast<size_t>(s.count), 0u);
    for (int e = 0; e < s.count; ++e)
        for (int j = 0; j < ni; ++j)
            if ((s.rel[static_cast<size_t>(e)] &
                 ~s.rel[static_cast<size_t>(irr[static_cast<size_t>(j)])]) == 0)
                contain[static_cast<size_t>(e)] |= 1u << j;

    // Violating bipartition pair (j, k) for one profile, packed, or -1.
    auto violation_at = [&](long long p) -> int {
        unsigned sig[16];
        const unsigned c0 = contain[static_cast<size_t>(s.agent_id(p, 0))];
        const unsigned c1 = contain[static_cast<size_t>(s.agent_id(p, 1))];
        const unsigned c2 = contain[static_cast<size_t>(s.agent_id(p, 2))];
        const unsigned co = contain[static_cast<size_t>(s.out_id(p))];
        for (int j = 0; j < ni; ++j)
            sig[j] = (c0 >> j & 1u) | (c1 >> j & 1u) << 1 | (c2 >> j & 1u) << 2;
        for (int j = 0; j < ni; ++j)
            for (int k = j + 1; k < ni; ++k)
                if (sig[j] == sig[k] && ((co >> j & 1u) != (co >> k & 1u)))
                    return j * ni + k;
        return -1;
    };
    auto fill_witness = [&](long long p) {
        const int jk = violation_at(p);
        const int j = jk / ni, k = jk % ni;
        rep.witness["profile"] = s.profile_text(p);
        rep.witness["bipartition"] = s.enc(irr[static_cast<size_t>(j)]);
        rep.witness["bipartition2"] = s.enc(irr[static_cast<size_t>(k)]);
        const unsigned co = contain[static_cast<size_t>(s.out_id(p))];
        rep.witness["contained"] = (co >> j & 1u) ? "1" : "0";
        rep.witness["contained2"] = (co >> k & 1u) ? "1" : "0";
        rep.witness["output"] = s.enc(s.out_id(p));
    };

    if (ex) {
        rep.domain_size = s.profiles * ni * ni;
        const long long hit =
            first_hit(s.profiles, threads, [&](long long p) { return violation_at(p) >= 0; });
        rep.verdict = hit < 0 ? "holds" : "fails";
        if (hit >= 0) fill_witness(hit);
    } else {
        std::mt19937_64 rng(opt.seed);
        rep.domain_size = opt.samples;
        rep.verdict = "inconclusive-sampled";
        for (long long k = 0; k < opt.samples; ++k) {
            const long long p = rand_below(rng, s.profiles);
            if (violation_at(p) >= 0) {
                rep.verdict = "fails";
                fill_witness(p);
                rep.domain_size = k + 1;
                break;
            }
        }
    }
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

// ---------------------------------------------------------------------------
// Pareto conditions

namespace {

CheckReport pareto_check(const char* axiom, bool strict_version, const Rule& rule,
                         const CheckOptions& opt) {
    const auto t0 = Clock::now();
    const int threads = resolve_threads(opt.threads);
    const bool ex = exhaustive_mode(opt, rule.ground()->size());
    Scan s = make_scan(rule, threads, ex);
    CheckReport rep = base_report(axiom, rule, ex, s, opt);

    const auto& tab = strict_version ? s.strict : s.rel;
    auto viol_mask = [&](long long p) {
        Mask common = ~Mask{0};
        for (int i = 0; i < s.n; ++i)
            common &= tab[static_cast<size_t>(s.agent_id(p, i))];
        const Mask o = s.out_rel(p);
        return common & ~(strict_version ? (o & ~bits::converse(o, s.m)) : o);
    };
    auto fill_witness = [&](long long p) {
        int x = 0, y = 0;
        lowest_pair(viol_mask(p), s.m, &x, &y);
        rep.witness["profile"] = s.profile_text(p);
        rep.witness["pair"] = s.pair_text(x, y);
        rep.witness["output"] = s.enc(s.out_id(p));
    };

    if (ex) {
        rep.domain_size = s.profiles * s.m * s.m;
        const long long hit =
            first_hit(s.profiles, threads, [&](long long p) { return viol_mask(p) != 0; });
        rep.verdict = hit < 0 ? "holds" : "fails";
        if (hit >= 0) fill_witness(hit);
    } else {
        std::mt19937_64 rng(opt.seed);
        rep.domain_size = opt.samples;
        rep.verdict = "inconclusive-sampled";
        for (long long k = 0; k < opt.samples; ++k) {
            const long long p = rand_below(rng, s.profiles);
            if (viol_mask(p) != 0) {
                rep.verdict = "fails";
                fill_witness(p);
                rep.domain_size = k + 1;
                break;
            }
        }
    }
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

} // namespace

CheckReport check_WP(const Rule& rule, const CheckOptions& opt) {
    return pareto_check("WP", true, rule, opt);
}

CheckReport check_BP(const Rule& rule, const CheckOptions& opt) {
    return pareto_check("BP", false, rule, opt);
}

// ---------------------------------------------------------------------------
// Existential range conditions

CheckReport check_LS(const Rule& rule, const CheckOptions& opt) {
    const auto t0 = Clock::now();
    const int threads = resolve_threads(opt.threads);
    const bool ex = exhaustive_mode(opt, rule.ground()->size());
    Scan s = make_scan(rule, threads, ex);
    CheckReport rep = base_report("LS", rule, ex, s, opt);

    // Distinct pairs are quantified; a single alternative has only one
    // restriction, so including x = y would make the condition unsatisfiable.
    std::vector<std::pair<int, int>> pairs;
    for (int x = 0; x < s.m; ++x)
        for (int y = x + 1; y < s.m; ++y) pairs.emplace_back(x, y);

    auto restriction = [&](long long p, int x, int y) {
        const Mask o = s.out_rel(p);
        return ((o >> (x * s.m + y)) & 1) | (((o >> (y * s.m + x)) & 1) << 1);
    };
    auto restriction_text = [&](int x, int y, unsigned r) {
        const std::string& lx = s.lat->ground()->label(x);
        const std::string& ly = s.lat->ground()->label(y);
        if (r == 3) return lx + " " + ly;
        return r == 1 ? lx + "|" + ly : ly + "|" + lx;
    };

    std::vector<unsigned> seen(pairs.size(), 4u); // 4 = nothing yet
    std::vector<bool> diverged(pairs.size(), false);
    const long long scans = ex ? s.profiles : opt.samples;
    std::mt19937_64 rng(opt.seed);
    for (long long k = 0; k < scans; ++k) {
        const long long p = ex ? k : rand_below(rng, s.profiles);
        bool all = true;
        for (size_t i = 0; i < pairs.size(); ++i) {
            if (diverged[i]) continue;
            const unsigned r = restriction(p, pairs[i].first, pairs[i].second);
            if (seen[i] == 4u)
                seen[i] = r;
            else if (seen[i] != r)
                diverged[i] = true;
            all = all && diverged[i];
        }
        if (all) break;
    }
    (void)threads;
    rep.domain_size = ex ? static_cast<long long>(pairs.size()) * s.profiles : opt.samples;
    const auto stuck = std::find(diverged.begin(), diverged.end(), false);
    if (stuck == diverged.end()) {
        rep.verdict = "holds"; // found witnesses certify the existentials
    } else if (ex) {
        rep.verdict = "fails";
        const size_t i = static_cast<size_t>(stuck - diverged.begin());
        rep.witness["pair"] = s.pair_text(pairs[i].first, pairs[i].second);
        rep.witness["restriction"] =
            restriction_text(pairs[i].first, pairs[i].second, seen[i]);
        rep.witness["note"] = "every profile yields this restriction";
    } else {
        rep.verdict = "inconclusive-sampled";
        const size_t i = static_cast<size_t>(stuck - diverged.begin());
        rep.witness["note"] = "no second restriction found for pair " +
                              s.pair_text(pairs[i].first, pairs[i].second);
    }
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

namespace {

// Shared shape of WS and S: a target set must be covered by outputs.
CheckReport coverage_check(const char* axiom, const Rule& rule, const CheckOptions& opt,
                           bool over_pairs) {
    const auto t0 = Clock::now();
    const int threads = resolve_threads(opt.threads);
    const bool ex = exhaustive_mode(opt, rule.ground()->size());
    Scan s = make_scan(rule, threads, ex);
    CheckReport rep = base_report(axiom, rule, ex, s, opt);

    const long long scans = ex ? s.profiles : opt.samples;
    std::mt19937_64 rng(opt.seed);
    if (over_pairs) {
        Mask found = 0;
        const Mask want = bits::full_relation(s.m);
        for (long long k = 0; k < scans && found != want; ++k) {
            const long long p = ex ? k : rand_below(rng, s.profiles);
            found |= s.out_rel(p);
        }
        rep.domain_size = ex ? s.profiles * s.m * s.m : opt.samples;
        if (found == want) {
            rep.verdict = "holds";
        } else {
            int x = 0, y = 0;
            lowest_pair(want & ~found, s.m, &x, &y);
            rep.witness["pair"] = s.pair_text(x, y);
            if (ex) {
                rep.verdict = "fails";
                rep.witness["note"] = "no profile yields this social weak preference";
            } else {
                rep.verdict = "inconclusive-sampled";
            }
        }
    } else {
        std::vector<bool> found(static_cast<size_t>(s.count), false);
        int missing = s.count;
        for (long long k = 0; k < scans && missing > 0; ++k) {
            const long long p = ex ? k : rand_below(rng, s.profiles);
            const size_t o = static_cast<size_t>(s.out_id(p));
            if (!found[o]) {
                found[o] = true;
                --missing;
            }
        }
        rep.domain_size = ex ? static_cast<long long>(s.count) * s.profiles : opt.samples;
        if (missing == 0) {
            rep.verdict = "holds";
        } else {
            const auto it = std::find(found.begin(), found.end(), false);
            rep.witness["preference"] = s.enc(static_cast<int>(it - found.begin()));
            if (ex) {
                rep.verdict = "fails";
                rep.witness["note"] = "never attained as an output";
            } else {
                rep.verdict = "inconclusive-sampled";
            }
        }
    }
    (void)threads;
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

} // namespace

CheckReport check_WS(const Rule& rule, const CheckOptions& opt) {
    return coverage_check("WS", rule, opt, true);
}

CheckReport check_S(const Rule& rule, const CheckOptions& opt) {
    return coverage_check("S", rule, opt, false);
}

// ---------------------------------------------------------------------------
// Independence of irrelevant alternatives

namespace {

std::string agenda_text(const GroundSet& g, unsigned keep) {
    std::string t;
    for (int i = 0; i < g.size(); ++i) {
        if (!(keep >> i & 1u)) continue;
        if (!t.empty()) t += ",";
        t += g.label(i);
    }
    return t;
}

struct IiaViolation {
    size_t agenda_pos;
    long long first, second;
};

// Scan one agenda: group profiles (from `members`, or all when empty) by
// their restricted inputs and compare restricted outputs within each group.
std::optional<IiaViolation> iia_scan_agenda(const Scan& s, unsigned keep, size_t agenda_pos,
                                            const std::vector<long long>* members) {
    const int mm = s.m * s.m;
    std::unordered_map<std::uint64_t, std::pair<long long, Mask>> groups;
    const long long total =
        members ? static_cast<long long>(members->size()) : s.profiles;
    groups.reserve(static_cast<size_t>(std::min<long long>(total, 1 << 20)));
    for (long long k = 0; k < total; ++k) {
        const long long p = members ? (*members)[static_cast<size_t>(k)] : k;
        std::uint64_t key = 0;
        for (int i = 0; i < s.n; ++i) {
            const Mask r = bits::restrict_pairs(
                s.rel[static_cast<size_t>(s.agent_id(p, i))], keep, s.m);
            key |= static_cast<std::uint64_t>(r) << (i * mm);
        }
        const Mask rout = bits::restrict_pairs(s.out_rel(p), keep, s.m);
        const auto [it, inserted] = groups.try_emplace(key, p, rout);
        if (!inserted && it->second.second != rout)
            return IiaViolation{agenda_pos, it->second.first, p};
    }
    return std::nullopt;
}

CheckReport iia_check(const char* axiom, bool projective_only, const Rule& rule,
                      const CheckOptions& opt) {
    const auto t0 = Clock::now();
    const int threads = resolve_threads(opt.threads);
    const bool ex = exhaustive_mode(opt, rule.ground()->size());
    Scan s = make_scan(rule, threads, ex);
    CheckReport rep = base_report(axiom, rule, ex, s, opt);

    std::vector<unsigned> agendas; // proper nonempty, ascending mask order
    for (unsigned b = 1; b + 1 < (1u << s.m); ++b) agendas.push_back(b);

    auto is_projective = [&](long long p) {
        const int o = s.out_id(p);
        for (int i = 0; i < s.n; ++i)
            if (s.agent_id(p, i) == o) return true;
        return false;
    };
    auto fill_witness = [&](const IiaViolation& v) {
        rep.witness["agenda"] =
            agenda_text(*s.lat->ground(), agendas[v.agenda_pos]);
        rep.witness["profile"] = s.profile_text(v.first);
        rep.witness["profile2"] = s.profile_text(v.second);
        rep.witness["output"] = s.enc(s.out_id(v.first));
        rep.witness["output2"] = s.enc(s.out_id(v.second));
        if (projective_only) rep.witness["note"] = "both profiles are projective";
    };

    if (ex) {
        std::vector<long long> members;
        std::vector<long long>* filter = nullptr;
        if (projective_only) {
            for (long long p = 0; p < s.profiles; ++p)
                if (is_projective(p)) members.push_back(p);
            filter = &members;
        }
        const long long base = projective_only
                                   ? static_cast<long long>(members.size())
                                   : s.profiles;
        rep.domain_size = static_cast<long long>(agendas.size()) * base * base;

        // Agendas are independent; scan them concurrently and keep the
        // violation on the earliest agenda (its in-agenda pair is already
        // the first in scan order).
        std::vector<std::optional<IiaViolation>> results(agendas.size());
        std::atomic<size_t> next(0);
        std::vector<std::thread> pool;
        std::exception_ptr error;
        std::mutex error_mu;
        const int T = std::max(1, std::min<int>(threads, static_cast<int>(agendas.size())));
        for (int t = 0; t < T; ++t) {
            pool.emplace_back([&] {
                try {
                    for (size_t a = next.fetch_add(1); a < agendas.size();
                         a = next.fetch_add(1))
                        results[a] = iia_scan_agenda(s, agendas[a], a, filter);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (error) std::rethrow_exception(error);

        rep.verdict = "holds";
        for (const auto& r : results) {
            if (r) {
                rep.verdict = "fails";
                fill_witness(*r);
                break;
            }
        }
    } else {
        std::mt19937_64 rng(opt.seed);
        rep.verdict = "inconclusive-sampled";
        long long tested = 0;
        // Grow per-agenda groups from sampled (projective) profiles; any
        // clash inside a group is a sound failure.
        std::vector<std::unordered_map<std::uint64_t, std::pair<long long, Mask>>>
            groups(agendas.size());
        const int mm = s.m * s.m;
        for (long long k = 0; k < opt.samples && !rep.fails(); ++k) {
            const long long p = rand_below(rng, s.profiles);
            if (projective_only && !is_projective(p)) continue;
            ++tested;
            for (size_t a = 0; a < agendas.size(); ++a) {
                std::uint64_t key = 0;
                for (int i = 0; i < s.n; ++i) {
                    const Mask r = bits::restrict_pairs(
                        s.rel[static_cast<size_t>(s.agent_id(p, i))], agendas[a], s.m);
                    key |= static_cast<std::uint64_t>(r) << (i * mm);
                }
                const Mask rout = bits::restrict_pairs(s.out_rel(p), agendas[a], s.m);
                const auto [it, inserted] = groups[a].try_emplace(key, p, rout);
                if (!inserted && it->second.second != rout) {
                    rep.verdict = "fails";
                    fill_witness(IiaViolation{a, it->second.first, p});
                    break;
                }
            }
        }
        rep.domain_size = tested;
    }
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

} // namespace

CheckReport check_IIA(const Rule& rule, const CheckOptions& opt) {
    return iia_check("IIA", false, rule, opt);
}

CheckReport check_IIAP(const Rule& rule, const CheckOptions& opt) {
    return iia_check("IIAP", true, rule, opt);
}

// ---------------------------------------------------------------------------
// Responsiveness

namespace {

// Does the pattern force the weak social stance x over y across every
// consistent profile? Pattern bit i is agent i+1's required weak stance.
bool pattern_forces(const Scan& s, Coalition coalition, unsigned pattern, int x, int y) {
    const Mask bit = bits::pair_bit(x, y, s.m);
    for (long long p = 0; p < s.profiles; ++p) {
        bool consistent = true;
        for (int i = 0; i < s.n && consistent; ++i) {
            if (!(coalition >> i & 1u)) continue;
            const bool stance =
                (s.rel[static_cast<size_t>(s.agent_id(p, i))] & bit) != 0;
            if (stance != ((pattern >> i & 1u) != 0)) consistent = false;
        }
        if (consistent && !(s.out_rel(p) & bit)) return false;
    }
    return true;
}

// First forcing pattern for the coalition in ascending pattern order.
std::optional<unsigned> first_forcing_pattern(const Scan& s, Coalition coalition,
                                              int x, int y) {
    std::vector<int> members;
    for (int i = 0; i < s.n; ++i)
        if (coalition >> i & 1u) members.push_back(i);
    const unsigned combos = 1u << members.size();
    for (unsigned c = 0; c < combos; ++c) {
        unsigned pattern = 0;
        for (size_t k = 0; k < members.size(); ++k)
            if (c >> k & 1u) pattern |= 1u << members[static_cast<size_t>(k)];
        if (pattern_forces(s, coalition, pattern, x, y)) return pattern;
    }
    return std::nullopt;
}

std::string coalition_text(Coalition c, int n) {
    std::string t;
    for (int i = 0; i < n; ++i) {
        if (!(c >> i & 1u)) continue;
        if (!t.empty()) t += ",";
        t += std::to_string(i + 1);
    }
    return t.empty() ? "(empty)" : t;
}

std::string pattern_map_text(Coalition c, unsigned pattern, int n) {
    std::string t;
    for (int i = 0; i < n; ++i) {
        if (!(c >> i & 1u)) continue;
        if (!t.empty()) t += ",";
        t += std::to_string(i + 1) + ":" + ((pattern >> i & 1u) ? "1" : "0");
    }
    return t.empty() ? "(empty)" : t;
}

} // namespace

std::optional<ResponsivenessWitness> responsive_pattern(const Rule& rule,
                                                        Coalition coalition, int x, int y) {
    if (x == y) throw ParameterError("responsiveness needs a pair of distinct alternatives");
    const int m = rule.ground()->size();
    if (x < 0 || y < 0 || x >= m || y >= m)
        throw ParameterError("alternative index out of range");
    if (coalition >= (1u << rule.agents()))
        throw ParameterError("coalition mask out of range");
    Scan s = make_scan(rule, resolve_threads(0), true);
    const auto pattern = first_forcing_pattern(s, coalition, x, y);
    if (!pattern) return std::nullopt;
    ResponsivenessWitness w;
    w.coalition = coalition;
    for (int i = 0; i < s.n; ++i)
        if (coalition >> i & 1u) w.pattern[i + 1] = (*pattern >> i & 1u) != 0;
    return w;
}

std::vector<Coalition> responsive_coalitions(const Rule& rule, int x, int y) {
    if (x == y) throw ParameterError("responsiveness needs a pair of distinct alternatives");
    Scan s = make_scan(rule, resolve_threads(0), true);
    std::vector<Coalition> res;
    for (Coalition c = 0; c < (1u << s.n); ++c)
        if (first_forcing_pattern(s, c, x, y)) res.push_back(c);
    return res;
}

CheckReport check_MDR(const Rule& rule, const CheckOptions& opt) {
    const auto t0 = Clock::now();
    const int threads = resolve_threads(opt.threads);
    // Forcing tests are inner universals over all profiles; sampling them
    // would be unsound in both directions, so this checker is always
    // exhaustive within the supported sizes.
    Scan s = make_scan(rule, threads, true);
    CheckReport rep = base_report("MDR", rule, true, s, opt);

    const auto pairs = ordered_pairs(s.m);
    // Hypothesis space: one forcing test per agent, pair, and answer bit,
    // each scanning every profile.
    rep.domain_size = static_cast<long long>(s.n) *
                      static_cast<long long>(pairs.size()) * 2 * s.profiles;
    rep.verdict = "holds";
    bool any_trigger = false;
    for (int i = 0; i < s.n && !rep.fails(); ++i) {
        for (const auto& [x, y] : pairs) {
            const Coalition solo = 1u << i;
            const auto trig = first_forcing_pattern(s, solo, x, y);
            if (!trig) continue;
            // A single agent forces this pair; some coalition avoiding the
            // agent must force one too. The empty coalition counts and is
            // searched first.
            bool covered = false;
            Coalition cover_c = 0;
            unsigned cover_pattern = 0;
            int cover_x = 0, cover_y = 0;
            for (Coalition c = 0; c < (1u << s.n) && !covered; ++c) {
                if (c & solo) continue;
                for (const auto& [v, z] : pairs) {
                    const auto pat = first_forcing_pattern(s, c, v, z);
                    if (pat) {
                        covered = true;
                        cover_c = c;
                        cover_pattern = *pat;
                        cover_x = v;
                        cover_y = z;
                        break;
                    }
                }
            }
            if (!any_trigger) {
                any_trigger = true;
                rep.witness["trigger_agent"] = std::to_string(i + 1);
                rep.witness["trigger_pair"] = s.pair_text(x, y);
                rep.witness["trigger_pattern"] = pattern_map_text(solo, *trig, s.n);
                if (covered) {
                    rep.witness["cover_coalition"] = coalition_text(cover_c, s.n);
                    rep.witness["cover_pair"] = s.pair_text(cover_x, cover_y);
                    rep.witness["cover_pattern"] =
                        pattern_map_text(cover_c, cover_pattern, s.n);
                }
            }
            if (!covered) {
                rep.verdict = "fails";
                rep.witness["agent"] = std::to_string(i + 1);
                rep.witness["pair"] = s.pair_text(x, y);
                rep.witness["pattern"] = pattern_map_text(solo, *trig, s.n);
                rep.witness["note"] =
                    "no coalition avoiding this agent forces any pair";
                break;
            }
        }
    }
    if (!any_trigger)
        rep.witness["note"] = "no single agent forces any pair; holds vacuously";
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

// ---------------------------------------------------------------------------
// Manipulation

namespace {

CheckReport manipulation_check(const char* axiom, const Rule& rule,
                               const CheckOptions& opt, bool strong) {
    const auto t0 = Clock::now();
    const int threads = resolve_threads(opt.threads);
    const bool ex = exhaustive_mode(opt, rule.ground()->size());
    Scan s = make_scan(rule, threads, ex);
    CheckReport rep = base_report(axiom, rule, ex, s, opt);

    // Plain improvement means the deviation outcome sits strictly between the
    // agent's own report (the peak) and the truthful outcome, geodesically:
    // the canonical single-peaked preference at the report then prefers it.
    // The strong variant flags any changed outcome whose truthful counterpart
    // is off the geodesic between report and deviation outcome, since some
    // single-peaked preference at the report then prefers the deviation.
    auto improves = [&](long long p, int agent, int dev) {
        const int truthful = s.agent_id(p, agent);
        if (dev == truthful) return false;
        const int out_t = s.out_id(p);
        const int out_d = s.out_id(s.with_agent(p, agent, dev));
        if (out_d == out_t) return false;
        if (strong)
            return s.lat->distance(truthful, out_t) + s.lat->distance(out_t, out_d) !=
                   s.lat->distance(truthful, out_d);
        return s.lat->distance(truthful, out_d) + s.lat->distance(out_d, out_t) ==
               s.lat->distance(truthful, out_t);
    };
    auto fill_witness = [&](long long p, int agent, int dev) {
        const int out_t = s.out_id(p);
        const int out_d = s.out_id(s.with_agent(p, agent, dev));
        rep.witness["profile"] = s.profile_text(p);
        rep.witness["agent"] = std::to_string(agent + 1);
        rep.witness["deviation"] = s.enc(dev);
        rep.witness["output"] = s.enc(out_t);
        rep.witness["output_deviated"] = s.enc(out_d);
    };

    if (ex) {
        rep.domain_size = s.profiles * s.n * s.count;
        const long long hit = first_hit(rep.domain_size, threads, [&](long long idx) {
            const int dev = static_cast<int>(idx % s.count);
            const long long rest = idx / s.count;
            return improves(rest / s.n, static_cast<int>(rest % s.n), dev);
        });
        rep.verdict = hit < 0 ? "holds" : "fails";
        if (hit >= 0) {
            const int dev = static_cast<int>(hit % s.count);
            const long long rest = hit / s.count;
            fill_witness(rest / s.n, static_cast<int>(rest % s.n), dev);
        }
    } else {
        std::mt19937_64 rng(opt.seed);
        rep.domain_size = opt.samples;
        rep.verdict = "inconclusive-sampled";
        for (long long k = 0; k < opt.samples; ++k) {
            const long long p = rand_below(rng, s.profiles);
            const int agent = static_cast<int>(rand_below(rng, s.n));
            const int dev = static_cast<int>(rand_below(rng, s.count));
            if (improves(p, agent, dev)) {
                rep.verdict = "fails";
                fill_witness(p, agent, dev);
                rep.domain_size = k + 1;
                break;
            }
        }
    }
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

} // namespace

CheckReport check_SP(const Rule& rule, const CheckOptions& opt) {
    return manipulation_check("SP", rule, opt, false);
}

CheckReport check_SP_strong(const Rule& rule, const CheckOptions& opt) {
    return manipulation_check("SPstrong", rule, opt, true);
}

CheckReport check_monotone_M_independence(const Rule& rule, const CheckOptions& opt) {
    const auto t0 = Clock::now();
    const int threads = resolve_threads(opt.threads);
    const bool ex = exhaustive_mode(opt, rule.ground()->size());
    Scan s = make_scan(rule, threads, ex);
    CheckReport rep = base_report("MI", rule, ex, s, opt);

    const auto& irr = s.lat->irreducible_ids();
    // below[j][e]: element e lies below bipartition j.
    std::vector<std::vector<bool>> below(irr.size());
    for (size_t j = 0; j < irr.size(); ++j) {
        below[j].resize(static_cast<size_t>(s.count));
        for (int e = 0; e < s.count; ++e)
            below[j][static_cast<size_t>(e)] = s.lat->leq(e, irr[j]);
    }
    auto coalition_below = [&](long long p, size_t j) {
        unsigned T = 0;
        for (int i = 0; i < s.n; ++i)
            if (below[j][static_cast<size_t>(s.agent_id(p, i))]) T |= 1u << i;
        return T;
    };

    if (ex) {
        rep.domain_size =
            static_cast<long long>(irr.size()) * s.profiles * s.profiles;
        rep.verdict = "holds";
        for (size_t j = 0; j < irr.size() && !rep.fails(); ++j) {
            const unsigned coalitions = 1u << s.n;
            std::vector<long long> ok_first(coalitions, -1), bad_first(coalitions, -1);
            for (long long p = 0; p < s.profiles; ++p) {
                const unsigned T = coalition_below(p, j);
                const bool out_below = below[j][static_cast<size_t>(s.out_id(p))];
                auto& slot = out_below ? ok_first : bad_first;
                if (slot[T] < 0) slot[T] = p;
            }
            for (unsigned T = 0; T < coalitions && !rep.fails(); ++T) {
                if (ok_first[T] < 0) continue;
                for (unsigned U = 0; U < coalitions; ++U) {
                    if ((T & ~U) != 0 || bad_first[U] < 0) continue;
                    rep.verdict = "fails";
                    rep.witness["bipartition"] = s.enc(irr[j]);
                    rep.witness["profile"] = s.profile_text(ok_first[T]);
                    rep.witness["profile2"] = s.profile_text(bad_first[U]);
                    rep.witness["output"] = s.enc(s.out_id(ok_first[T]));
                    rep.witness["output2"] = s.enc(s.out_id(bad_first[U]));
                    break;
                }
            }
        }
    } else {
        std::mt19937_64 rng(opt.seed);
        rep.domain_size = opt.samples;
        rep.verdict = "inconclusive-sampled";
        for (long long k = 0; k < opt.samples; ++k) {
            const size_t j = static_cast<size_t>(
                rand_below(rng, static_cast<long long>(irr.size())));
            const long long p = rand_below(rng, s.profiles);
            const long long q = rand_below(rng, s.profiles);
            const unsigned T = coalition_below(p, j);
            const unsigned U = coalition_below(q, j);
            if ((T & ~U) == 0 && below[j][static_cast<size_t>(s.out_id(p))] &&
                !below[j][static_cast<size_t>(s.out_id(q))]) {
                rep.verdict = "fails";
                rep.witness["bipartition"] = s.enc(irr[j]);
                rep.witness["profile"] = s.profile_text(p);
                rep.witness["profile2"] = s.profile_text(q);
                rep.witness["output"] = s.enc(s.out_id(p));
                rep.witness["output2"] = s.enc(s.out_id(q));
                rep.domain_size = k + 1;
                break;
            }
        }
    }
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

// ---------------------------------------------------------------------------
// Structural detectors

namespace {

CheckReport containment_detector(const char* axiom, bool inverse, const Rule& rule,
                                 const CheckOptions& opt) {
    const auto t0 = Clock::now();
    const int threads = resolve_threads(opt.threads);
    const bool ex = exhaustive_mode(opt, rule.ground()->size());
    Scan s = make_scan(rule, threads, ex);
    CheckReport rep = base_report(axiom, rule, ex, s, opt);

    auto bound = [&](long long p, int i) {
        const Mask r = s.rel[static_cast<size_t>(s.agent_id(p, i))];
        return inverse ? bits::converse(r, s.m) : r;
    };
    auto viol_mask = [&](long long p, int i) { return s.out_rel(p) & ~bound(p, i); };

    std::string dictators;
    bool inconclusive = false;
    const std::string key = "agent";
    for (int i = 0; i < s.n; ++i) {
        long long hit = -1;
        if (ex) {
            hit = first_hit(s.profiles, threads,
                            [&](long long p) { return viol_mask(p, i) != 0; });
        } else {
            std::mt19937_64 rng(opt.seed + static_cast<std::uint64_t>(i));
            bool refuted = false;
            for (long long k = 0; k < opt.samples; ++k) {
                const long long p = rand_below(rng, s.profiles);
                if (viol_mask(p, i) != 0) {
                    hit = p;
                    refuted = true;
                    break;
                }
            }
            if (!refuted) inconclusive = true; // cannot certify by sampling
        }
        if (hit < 0) {
            if (!dictators.empty()) dictators += ",";
            dictators += std::to_string(i + 1);
        } else {
            const std::string tag = key + std::to_string(i + 1);
            int x = 0, y = 0;
            lowest_pair(viol_mask(hit, i), s.m, &x, &y);
            rep.witness[tag + "_profile"] = s.profile_text(hit);
            rep.witness[tag + "_pair"] = s.pair_text(x, y);
            rep.witness[tag + "_output"] = s.enc(s.out_id(hit));
        }
    }
    rep.domain_size = ex ? static_cast<long long>(s.n) * s.profiles : opt.samples * s.n;
    rep.witness["dictators"] = dictators;
    if (!dictators.empty() && !ex) {
        // A sampled scan can refute agents but never certify one.
        rep.verdict = "inconclusive-sampled";
        rep.witness.erase("dictators");
    } else if (!dictators.empty()) {
        rep.verdict = "holds";
    } else {
        rep.verdict = inconclusive ? "inconclusive-sampled" : "fails";
    }
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

} // namespace

CheckReport detect_dictator(const Rule& rule, const CheckOptions& opt) {
    return containment_detector("dictator", false, rule, opt);
}

CheckReport detect_inverse_dictator(const Rule& rule, const CheckOptions& opt) {
    return containment_detector("invdictator", true, rule, opt);
}

CheckReport detect_stalemate(const Rule& rule, const CheckOptions& opt) {
    const auto t0 = Clock::now();
    const int threads = resolve_threads(opt.threads);
    const bool ex = exhaustive_mode(opt, rule.ground()->size());
    Scan s = make_scan(rule, threads, ex);
    CheckReport rep = base_report("stalemate", rule, ex, s, opt);

    auto viol_mask = [&](long long p) {
        Mask unanimous = ~Mask{0};
        for (int i = 0; i < s.n; ++i)
            unanimous &= s.strict[static_cast<size_t>(s.agent_id(p, i))];
        const Mask o = s.out_rel(p);
        return unanimous & o & bits::converse(o, s.m);
    };
    auto fill_witness = [&](long long p) {
        int x = 0, y = 0;
        lowest_pair(viol_mask(p), s.m, &x, &y);
        rep.witness["profile"] = s.profile_text(p);
        rep.witness["pair"] = s.pair_text(x, y);
        rep.witness["output"] = s.enc(s.out_id(p));
    };

    if (ex) {
        rep.domain_size = s.profiles * s.m * s.m;
        const long long hit =
            first_hit(s.profiles, threads, [&](long long p) { return viol_mask(p) != 0; });
        rep.verdict = hit < 0 ? "fails" : "holds"; // holds = a stalemate exists
        if (hit >= 0)
            fill_witness(hit);
        else
            rep.witness["note"] = "no profile stalls a unanimously strict pair";
    } else {
        std::mt19937_64 rng(opt.seed);
        rep.domain_size = opt.samples;
        rep.verdict = "inconclusive-sampled";
        for (long long k = 0; k < opt.samples; ++k) {
            const long long p = rand_below(rng, s.profiles);
            if (viol_mask(p) != 0) {
                rep.verdict = "holds"; // an existence verdict is certified
                fill_witness(p);
                rep.domain_size = k + 1;
                break;
            }
        }
    }
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

DecisiveReport decisive_coalitions(const Rule& rule, const CheckOptions& opt) {
    const auto t0 = Clock::now();
    const int threads = resolve_threads(opt.threads);
    // Decisiveness is an inner universal per coalition; always exhaustive.
    Scan s = make_scan(rule, threads, true);
    DecisiveReport rep;
    rep.rule = rule.name();

    const Mask offdiag = bits::full_relation(s.m) & ~bits::diagonal(s.m);
    const unsigned all = (1u << s.n) - 1u;
    std::vector<bool> decisive(static_cast<size_t>(all) + 1, false);
    for (Coalition c = 0; c <= all; ++c) {
        const long long hit = first_hit(s.profiles, threads, [&](long long p) {
            Mask unanimous = offdiag;
            for (int i = 0; i < s.n; ++i)
                if (c >> i & 1u)
                    unanimous &= s.strict[static_cast<size_t>(s.agent_id(p, i))];
            const Mask o = s.out_rel(p);
            return (unanimous & ~(o & ~bits::converse(o, s.m))) != 0;
        });
        decisive[c] = hit < 0;
        if (decisive[c]) rep.decisive.push_back(c);
    }
    rep.domain_size = (static_cast<long long>(all) + 1) * s.profiles;

    rep.intersection_closed = true;
    rep.upward_closed = true;
    rep.complement_dichotomy = true;
    for (Coalition c = 0; c <= all; ++c) {
        if (decisive[c]) {
            for (Coalition d = 0; d <= all; ++d) {
                if (decisive[d] && !decisive[c & d]) rep.intersection_closed = false;
                if ((c & ~d) == 0 && !decisive[d]) rep.upward_closed = false;
            }
        }
        if (!decisive[c] && !decisive[all & ~c]) rep.complement_dichotomy = false;
    }
    rep.is_ultrafilter = !rep.decisive.empty() && !decisive[0] &&
                         rep.intersection_closed && rep.complement_dichotomy;
    for (int i = 0; i < s.n && !rep.principal_agent; ++i) {
        bool principal = true;
        for (Coalition c = 0; c <= all && principal; ++c)
            if (decisive[c] != ((c >> i & 1u) != 0)) principal = false;
        if (principal) rep.principal_agent = i + 1;
    }
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
}

// ---------------------------------------------------------------------------
// Dispatch

CheckReport run_axiom_check(const Rule& rule, const std::string& axiom,
                            const CheckOptions& options) {
    using Fn = CheckReport (*)(const Rule&, const CheckOptions&);
    static const std::vector<std::pair<std::string, Fn>> table = {
        {"AN", check_AN},
        {"ID", check_ID},
        {"NT", check_NT},
        {"WNT", check_WNT},
        {"WP", check_WP},
        {"BP", check_BP},
        {"LS", check_LS},
        {"WS", check_WS},
        {"S", check_S},
        {"IIA", check_IIA},
        {"IIAP", check_IIAP},
        {"MDR", check_MDR},
        {"SP", check_SP},
        {"SPstrong", check_SP_strong},
        {"MI", check_monotone_M_independence},
        {"dictator", detect_dictator},
        {"invdictator", detect_inverse_dictator},
        {"stalemate", detect_stalemate},
    };
    for (const auto& [name, fn] : table)
        if (name == axiom) return fn(rule, options);
    throw ParseError("unknown axiom '" + axiom + "'");
}

const std::vector<std::string>& axiom_names() {
    static const std::vector<std::string> names = {
        "AN", "ID", "NT",  "WNT",  "WP",  "BP",       "LS",
        "WS", "S",  "IIA", "IIAP", "MDR", "SP",       "SPstrong",
        "MI", "dictator", "invdictator", "stalemate"};
    return names;
}

} // namespace medvote
