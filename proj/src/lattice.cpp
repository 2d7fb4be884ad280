#include "medvote/lattice.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <queue>
#include <random>
#include <sstream>

#include "medvote/detail/validate.hpp"

namespace medvote {

TotalPreorder OrderedBipartition::as_preorder(const GroundPtr& ground) const {
    if (top.empty() || bottom.empty())
        throw ParameterError("ordered bipartition needs two nonempty parts");
    OrderedPartition part;
    std::vector<int> t, b;
    for (const auto& l : top)
        t.push_back(ground->index(l));
    for (const auto& l : bottom)
        b.push_back(ground->index(l));
    std::sort(t.begin(), t.end());
    std::sort(b.begin(), b.end());
    part.blocks = {t, b};
    return from_partition(ground, part);
}

Lattice::Lattice(GroundPtr ground) : ground_(std::move(ground)) {
    const int m = ground_->size();
    elems_ = enumerate_preorders(ground_);
    const int n = count();
    for (int i = 0; i < n; ++i)
        id_by_mask_[elems_[static_cast<size_t>(i)].mask()] = i;
    top_ = id_by_mask_.at(bits::full_relation(m));

    join_tab_.assign(static_cast<size_t>(n) * n, -1);
    meet_tab_.assign(static_cast<size_t>(n) * n, -1);
    for (int a = 0; a < n; ++a) {
        const Mask ma = elems_[static_cast<size_t>(a)].mask();
        for (int b = 0; b < n; ++b) {
            const Mask mb = elems_[static_cast<size_t>(b)].mask();
            const Mask j = bits::closure(ma | mb, m);
            auto it = id_by_mask_.find(j);
            if (it == id_by_mask_.end())
                throw InternalError("closure of a union left the structure");
            join_tab_[static_cast<size_t>(a) * n + b] = it->second;
        }
    }
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            std::optional<int> mt = meet_all({a, b});
            // meet_all falls back to the generic glb scan below; store it
            meet_tab_[static_cast<size_t>(a) * n + b] =
                meet_tab_[static_cast<size_t>(b) * n + a] = mt ? *mt : -1;
        }

    up_.assign(static_cast<size_t>(n), {});
    down_.assign(static_cast<size_t>(n), {});
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b || !leq(a, b))
                continue;
            bool covered = true;
            for (int c = 0; c < n && covered; ++c)
                if (c != a && c != b && leq(a, c) && leq(c, b))
                    covered = false;
            if (covered) {
                up_[static_cast<size_t>(a)].push_back(b);
                down_[static_cast<size_t>(b)].push_back(a);
            }
        }
    coatoms_ = down_[static_cast<size_t>(top_)];
    std::sort(coatoms_.begin(), coatoms_.end());
    for (int a = 0; a < n; ++a)
        if (down_[static_cast<size_t>(a)].empty())
            minimal_.push_back(a);

    // longest chain up from a minimal element; covers only add pairs, so
    // processing by popcount is a topological order
    rank_.assign(static_cast<size_t>(n), 0);
    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return std::popcount(elems_[static_cast<size_t>(x)].mask()) <
               std::popcount(elems_[static_cast<size_t>(y)].mask());
    });
    for (int x : order)
        for (int d : down_[static_cast<size_t>(x)])
            rank_[static_cast<size_t>(x)] =
                std::max(rank_[static_cast<size_t>(x)], rank_[static_cast<size_t>(d)] + 1);

    bfs_.assign(static_cast<size_t>(n) * n, -1);
    for (int src = 0; src < n; ++src) {
        auto* row = &bfs_[static_cast<size_t>(src) * n];
        std::queue<int> q;
        row[src] = 0;
        q.push(src);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            auto visit = [&](int w) {
                if (row[w] < 0) {
                    row[w] = static_cast<std::int16_t>(row[v] + 1);
                    q.push(w);
                }
            };
            for (int w : up_[static_cast<size_t>(v)])
                visit(w);
            for (int w : down_[static_cast<size_t>(v)])
                visit(w);
        }
    }

    // canonical meet-irreducible order: ascending top-part size, then
    // lexicographic on the top part's member indices
    std::vector<unsigned> tops;
    for (unsigned s = 1; s + 1 < (1u << m); ++s)
        tops.push_back(s);
    std::vector<std::vector<int>> keys;
    for (unsigned s : tops) {
        std::vector<int> k;
        for (int i = 0; i < m; ++i)
            if (s & (1u << i))
                k.push_back(i);
        keys.push_back(std::move(k));
    }
    std::vector<size_t> ord(tops.size());
    for (size_t i = 0; i < ord.size(); ++i)
        ord[i] = i;
    std::sort(ord.begin(), ord.end(), [&](size_t x, size_t y) {
        if (keys[x].size() != keys[y].size())
            return keys[x].size() < keys[y].size();
        return keys[x] < keys[y];
    });
    for (size_t i : ord) {
        OrderedBipartition bp;
        for (int k = 0; k < m; ++k) {
            if (tops[i] & (1u << k))
                bp.top.push_back(ground_->label(k));
            else
                bp.bottom.push_back(ground_->label(k));
        }
        irr_ids_.push_back(id_of(bp.as_preorder(ground_)));
        irreducibles_.push_back(std::move(bp));
    }
}

const Lattice& Lattice::of(const GroundPtr& ground) {
    static std::map<std::vector<std::string>, std::unique_ptr<Lattice>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(ground->labels());
    if (it == cache.end())
        it = cache.emplace(ground->labels(),
                           std::unique_ptr<Lattice>(new Lattice(ground))).first;
    return *it->second;
}

int Lattice::id_of(const TotalPreorder& r) const {
    if (*r.ground() != *ground_)
        throw ParameterError("preorder belongs to a different ground set");
    return id_by_mask_.at(r.mask());
}

int Lattice::id_of_mask(Mask rel) const {
    auto it = id_by_mask_.find(rel);
    return it == id_by_mask_.end() ? -1 : it->second;
}

bool Lattice::leq(int a, int b) const {
    return (elems_[static_cast<size_t>(a)].mask() & ~elems_[static_cast<size_t>(b)].mask()) == 0;
}

int Lattice::join(int a, int b) const {
    return join_tab_[static_cast<size_t>(a) * count() + b];
}

int Lattice::join_all(const std::vector<int>& ids) const {
    if (ids.empty())
        throw ParameterError("join of an empty set is not defined");
    int acc = ids.front();
    for (size_t i = 1; i < ids.size(); ++i)
        acc = join(acc, ids[i]);
    return acc;
}

std::optional<int> Lattice::meet(int a, int b) const {
    int v = meet_tab_[static_cast<size_t>(a) * count() + b];
    if (v < 0)
        return std::nullopt;
    return v;
}

std::optional<int> Lattice::meet_all(const std::vector<int>& ids) const {
    if (ids.empty())
        return top_;
    Mask acc = elems_[static_cast<size_t>(ids.front())].mask();
    for (size_t i = 1; i < ids.size(); ++i)
        acc &= elems_[static_cast<size_t>(ids[i])].mask();
    // the intersection of total preorders is reflexive and transitive; if it
    // is also total it is itself the greatest lower bound
    const int m = ground_->size();
    if (bits::is_total(acc, m)) {
        auto it = id_by_mask_.find(acc);
        if (it == id_by_mask_.end())
            throw InternalError("total intersection of preorders is not an element");
        return it->second;
    }
    // otherwise search the elements inside the intersection for a greatest one
    int best = -1;
    int best_bits = -1;
    for (int e = 0; e < count(); ++e) {
        const Mask me = elems_[static_cast<size_t>(e)].mask();
        if ((me & ~acc) != 0)
            continue;
        int pc = std::popcount(me);
        if (pc > best_bits) {
            best = e;
            best_bits = pc;
        }
    }
    if (best < 0)
        return std::nullopt;
    const Mask mb = elems_[static_cast<size_t>(best)].mask();
    for (int e = 0; e < count(); ++e) {
        const Mask me = elems_[static_cast<size_t>(e)].mask();
        if ((me & ~acc) == 0 && (me & ~mb) != 0)
            return std::nullopt; // two maximal lower bounds, no greatest
    }
    return best;
}

int Lattice::distance(int a, int b) const {
    return 2 * rank_[static_cast<size_t>(join(a, b))] - rank_[static_cast<size_t>(a)] -
           rank_[static_cast<size_t>(b)];
}

int Lattice::bfs_distance(int a, int b) const {
    return bfs_[static_cast<size_t>(a) * count() + b];
}

int Lattice::median(int a, int b, int c) const {
    auto mt = meet_all({join(a, b), join(b, c), join(a, c)});
    if (!mt)
        throw InternalError("median meet undefined on the preorder semilattice");
    return *mt;
}

bool Lattice::between(int a, int z, int b) const {
    return median(a, b, z) == z;
}

bool Lattice::metric_between(int a, int z, int b) const {
    return bfs_distance(a, z) + bfs_distance(z, b) == bfs_distance(a, b);
}

TotalPreorder join(const TotalPreorder& x, const TotalPreorder& y) {
    if (*x.ground() != *y.ground())
        throw ParameterError("join requires a shared ground set");
    return TotalPreorder(x.ground(), bits::closure(x.mask() | y.mask(), x.size()));
}

std::optional<TotalPreorder> meet(const std::vector<TotalPreorder>& xs, const GroundPtr& ground) {
    const Lattice& lat = Lattice::of(ground);
    std::vector<int> ids;
    ids.reserve(xs.size());
    for (const auto& x : xs)
        ids.push_back(lat.id_of(x));
    auto mt = lat.meet_all(ids);
    if (!mt)
        return std::nullopt;
    return lat.element(*mt);
}

std::vector<OrderedBipartition> meet_irreducibles(const GroundPtr& ground) {
    return Lattice::of(ground).irreducibles();
}

int rank(const TotalPreorder& r) {
    const Lattice& lat = Lattice::of(r.ground());
    return lat.rank(lat.id_of(r));
}

int distance(const TotalPreorder& x, const TotalPreorder& y) {
    const Lattice& lat = Lattice::of(x.ground());
    return lat.distance(lat.id_of(x), lat.id_of(y));
}

TotalPreorder median(const TotalPreorder& x, const TotalPreorder& y, const TotalPreorder& z) {
    const Lattice& lat = Lattice::of(x.ground());
    return lat.element(lat.median(lat.id_of(x), lat.id_of(y), lat.id_of(z)));
}

bool between(const TotalPreorder& x, const TotalPreorder& z, const TotalPreorder& y) {
    const Lattice& lat = Lattice::of(x.ground());
    return lat.between(lat.id_of(x), lat.id_of(z), lat.id_of(y));
}

std::string lattice_dot(const GroundPtr& ground) {
    const Lattice& lat = Lattice::of(ground);
    std::ostringstream out;
    out << "digraph preorders {\n  rankdir=BT;\n  node [shape=box];\n";
    for (int i = 0; i < lat.count(); ++i)
        out << "  \"" << render_preorder(lat.element(i)) << "\";\n";
    for (int i = 0; i < lat.count(); ++i) {
        auto ups = lat.upper_covers()[static_cast<size_t>(i)];
        std::sort(ups.begin(), ups.end());
        for (int j : ups)
            out << "  \"" << render_preorder(lat.element(i)) << "\" -> \""
                << render_preorder(lat.element(j)) << "\";\n";
    }
    out << "}\n";
    return out.str();
}

bool ValidationReport::all_pass() const {
    return order_sane && joins_are_lubs && meets_are_glbs && mu1 && mu2 && helly &&
           betweenness && rank_distance && (!coatomistic_checked || coatomistic);
}

// ---------------------------------------------------------------------------
// generic model validator

namespace detail {

ModelGraph build_graph(const FiniteModel& model) {
    const int n = model.n;
    ModelGraph g;
    g.up.assign(static_cast<size_t>(n), {});
    g.down.assign(static_cast<size_t>(n), {});
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b || !model.leq(a, b) || model.leq(b, a))
                continue;
            bool cover = true;
            for (int c = 0; c < n && cover; ++c)
                if (c != a && c != b && model.leq(a, c) && !model.leq(c, a) &&
                    model.leq(c, b) && !model.leq(b, c))
                    cover = false;
            if (cover) {
                g.up[static_cast<size_t>(a)].push_back(b);
                g.down[static_cast<size_t>(b)].push_back(a);
            }
        }
    for (int a = 0; a < n; ++a) {
        if (g.up[static_cast<size_t>(a)].empty())
            g.maximal.push_back(a);
        if (g.down[static_cast<size_t>(a)].empty())
            g.minimal.push_back(a);
    }
    if (g.maximal.size() == 1)
        g.top = g.maximal.front();

    g.rank.assign(static_cast<size_t>(n), -1);
    // longest chain from below, computed by iterating to a fixed point
    // (the cover relation is acyclic, so this terminates)
    for (int a : g.minimal)
        g.rank[static_cast<size_t>(a)] = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < n; ++a) {
            int best = g.down[static_cast<size_t>(a)].empty() ? 0 : -1;
            for (int d : g.down[static_cast<size_t>(a)]) {
                if (g.rank[static_cast<size_t>(d)] < 0) {
                    best = -1;
                    break;
                }
                best = std::max(best, g.rank[static_cast<size_t>(d)] + 1);
            }
            if (best >= 0 && best != g.rank[static_cast<size_t>(a)]) {
                g.rank[static_cast<size_t>(a)] = best;
                changed = true;
            }
        }
    }

    g.dist.assign(static_cast<size_t>(n) * n, -1);
    for (int src = 0; src < n; ++src) {
        auto* row = &g.dist[static_cast<size_t>(src) * n];
        std::queue<int> q;
        row[src] = 0;
        q.push(src);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            auto visit = [&](int w) {
                if (row[w] < 0) {
                    row[w] = static_cast<std::int16_t>(row[v] + 1);
                    q.push(w);
                }
            };
            for (int w : g.up[static_cast<size_t>(v)])
                visit(w);
            for (int w : g.down[static_cast<size_t>(v)])
                visit(w);
        }
    }
    return g;
}

std::optional<int> scan_lub(const FiniteModel& model, int a, int b) {
    int best = -1;
    for (int c = 0; c < model.n; ++c) {
        if (!model.leq(a, c) || !model.leq(b, c))
            continue;
        if (best < 0 || model.leq(c, best))
            best = c;
    }
    if (best < 0)
        return std::nullopt;
    for (int c = 0; c < model.n; ++c)
        if (model.leq(a, c) && model.leq(b, c) && !model.leq(best, c))
            return std::nullopt; // incomparable minimal upper bounds
    return best;
}

std::optional<int> scan_glb(const FiniteModel& model, const std::vector<int>& xs) {
    auto below_all = [&](int c) {
        for (int x : xs)
            if (!model.leq(c, x))
                return false;
        return true;
    };
    int best = -1;
    for (int c = 0; c < model.n; ++c) {
        if (!below_all(c))
            continue;
        if (best < 0 || model.leq(best, c))
            best = c;
    }
    if (best < 0)
        return std::nullopt;
    for (int c = 0; c < model.n; ++c)
        if (below_all(c) && !model.leq(c, best))
            return std::nullopt;
    return best;
}

namespace {

// Visits either every k-tuple over {0..n-1} or `samples` seeded random ones.
template <typename Fn>
void for_tuples(int k, int n, bool exhaustive, int samples, std::mt19937_64& rng, Fn&& fn) {
    std::vector<int> t(static_cast<size_t>(k), 0);
    if (exhaustive) {
        while (true) {
            if (!fn(t))
                return;
            int pos = k - 1;
            while (pos >= 0 && ++t[static_cast<size_t>(pos)] == n) {
                t[static_cast<size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0)
                return;
        }
    }
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < k; ++i)
            t[static_cast<size_t>(i)] = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        if (!fn(t))
            return;
    }
}

double pow_count(int n, int k) {
    double v = 1;
    for (int i = 0; i < k; ++i)
        v *= n;
    return v;
}

} // namespace

ValidationReport run_model_validation(const FiniteModel& model, const ModelGraph& graph,
                                      const ValidationOptions& opt, bool exhaustive) {
    ValidationReport rep;
    rep.structure = model.name;
    const int n = model.n;
    std::mt19937_64 rng(opt.seed);

    auto exhaustive_for = [&](int arity) {
        return exhaustive && pow_count(n, arity) <= 12e6;
    };
    bool fully_exhaustive = exhaustive_for(2) && exhaustive_for(3) && exhaustive_for(5);
    rep.mode = (exhaustive && fully_exhaustive)
                   ? "exhaustive"
                   : "sampled(seed=" + std::to_string(opt.seed) +
                         ",samples=" + std::to_string(opt.samples) + ")";
    if (exhaustive && !fully_exhaustive)
        rep.notes["mode"] = "pair and triple scans exhaustive where cheap, wider tuples sampled";

    auto issue = [&](const std::string& check, const std::string& detail) {
        rep.issues.push_back({check, detail});
    };

    // order sanity
    for (int a = 0; a < n && rep.order_sane; ++a) {
        if (!model.leq(a, a)) {
            rep.order_sane = false;
            issue("order", "not reflexive at " + model.render(a));
        }
        for (int b = 0; b < n && rep.order_sane; ++b)
            if (a != b && model.leq(a, b) && model.leq(b, a)) {
                rep.order_sane = false;
                issue("order", "antisymmetry fails at " + model.render(a) + " / " + model.render(b));
            }
    }
    for_tuples(3, n, exhaustive_for(3), opt.samples, rng, [&](const std::vector<int>& t) {
        if (model.leq(t[0], t[1]) && model.leq(t[1], t[2]) && !model.leq(t[0], t[2])) {
            rep.order_sane = false;
            issue("order", "transitivity fails at " + model.render(t[0]) + " <= " +
                               model.render(t[1]) + " <= " + model.render(t[2]));
            return false;
        }
        return true;
    });
    if (graph.top < 0) {
        rep.order_sane = false;
        issue("order", "no unique maximum element");
    }

    // joins
    for_tuples(2, n, exhaustive_for(2), opt.samples, rng, [&](const std::vector<int>& t) {
        auto lub = scan_lub(model, t[0], t[1]);
        int prod = model.prod_join ? model.prod_join(t[0], t[1]) : (lub ? *lub : -1);
        if (!lub) {
            rep.joins_are_lubs = false;
            issue("join", "no least upper bound for " + model.render(t[0]) + " and " +
                              model.render(t[1]));
            return false;
        }
        if (prod != *lub) {
            rep.joins_are_lubs = false;
            issue("join", "production join of " + model.render(t[0]) + " and " +
                              model.render(t[1]) + " is not the least upper bound");
            return false;
        }
        return true;
    });

    // meets
    for_tuples(2, n, exhaustive_for(2), opt.samples, rng, [&](const std::vector<int>& t) {
        auto glb = scan_glb(model, {t[0], t[1]});
        if (model.prod_meet) {
            int prod = model.prod_meet(t[0], t[1]);
            if ((prod < 0) != !glb || (glb && prod != *glb)) {
                rep.meets_are_glbs = false;
                issue("meet", "production meet disagrees with the scanned bound for " +
                                  model.render(t[0]) + " and " + model.render(t[1]));
                return false;
            }
        }
        return true;
    });

    const bool mask_mode = static_cast<bool>(model.median_mask);
    auto med_elem = [&](int a, int b, int c) -> std::optional<int> {
        return model.median_elem(a, b, c);
    };

    // (mu1) median(x,x,y) == x
    for_tuples(2, n, exhaustive_for(2), opt.samples, rng, [&](const std::vector<int>& t) {
        bool ok;
        if (mask_mode)
            ok = model.median_mask(model.key(t[0]), model.key(t[0]), model.key(t[1])) ==
                 model.key(t[0]);
        else {
            auto m = med_elem(t[0], t[0], t[1]);
            ok = m && *m == t[0];
        }
        if (!ok) {
            rep.mu1 = false;
            issue("mu1", "median(" + model.render(t[0]) + ", same, " + model.render(t[1]) +
                             ") is not the repeated argument");
            return false;
        }
        return true;
    });

    // (mu2) median(median(x,y,v), median(x,y,w), z) == median(median(v,w,z), x, y)
    for_tuples(5, n, exhaustive_for(5), opt.samples, rng, [&](const std::vector<int>& t) {
        const int x = t[0], y = t[1], v = t[2], w = t[3], z = t[4];
        bool ok;
        if (mask_mode) {
            const Mask kx = model.key(x), ky = model.key(y);
            Mask lhs = model.median_mask(model.median_mask(kx, ky, model.key(v)),
                                         model.median_mask(kx, ky, model.key(w)), model.key(z));
            Mask rhs = model.median_mask(
                model.median_mask(model.key(v), model.key(w), model.key(z)), kx, ky);
            ok = lhs == rhs;
        } else {
            auto i1 = med_elem(x, y, v), i2 = med_elem(x, y, w), i3 = med_elem(v, w, z);
            if (!i1 || !i2 || !i3)
                ok = false;
            else {
                auto lhs = med_elem(*i1, *i2, z);
                auto rhs = med_elem(*i3, x, y);
                ok = lhs && rhs && *lhs == *rhs;
            }
        }
        if (!ok) {
            rep.mu2 = false;
            issue("mu2", "median exchange identity fails at (" + model.render(x) + ", " +
                             model.render(y) + ", " + model.render(v) + ", " + model.render(w) +
                             ", " + model.render(z) + ")");
            return false;
        }
        return true;
    });

    // Helly: pairwise meets exist => triple meet exists.  Pairwise meets come
    // from the production operation when there is one (the meets pass above
    // already checked it against the scan), keeping the triple loop cheap.
    auto pair_meet_defined = [&](int a, int b) {
        if (model.prod_meet)
            return model.prod_meet(a, b) >= 0;
        return scan_glb(model, {a, b}).has_value();
    };
    for_tuples(3, n, exhaustive_for(3), opt.samples, rng, [&](const std::vector<int>& t) {
        bool m01 = pair_meet_defined(t[0], t[1]);
        bool m12 = pair_meet_defined(t[1], t[2]);
        bool m02 = pair_meet_defined(t[0], t[2]);
        if (m01 && m12 && m02) {
            auto m3 = model.prod_meet_set ? [&]() -> std::optional<int> {
                int v = model.prod_meet_set({t[0], t[1], t[2]});
                if (v < 0)
                    return std::nullopt;
                return v;
            }()
                                          : scan_glb(model, {t[0], t[1], t[2]});
            if (!m3) {
                rep.helly = false;
                issue("helly", "pairwise meets exist but no triple meet at (" +
                                   model.render(t[0]) + ", " + model.render(t[1]) + ", " +
                                   model.render(t[2]) + ")");
                return false;
            }
        }
        return true;
    });

    // median betweenness == metric betweenness
    for_tuples(3, n, exhaustive_for(3), opt.samples, rng, [&](const std::vector<int>& t) {
        const int x = t[0], z = t[1], y = t[2];
        bool med_between;
        if (mask_mode)
            med_between =
                model.median_mask(model.key(x), model.key(y), model.key(z)) == model.key(z);
        else {
            auto m = med_elem(x, y, z);
            med_between = m && *m == z;
        }
        bool metric = graph.dist_at(x, z, n) >= 0 && graph.dist_at(z, y, n) >= 0 &&
                      graph.dist_at(x, y, n) >= 0 &&
                      graph.dist_at(x, z, n) + graph.dist_at(z, y, n) == graph.dist_at(x, y, n);
        if (med_between != metric) {
            rep.betweenness = false;
            issue("betweenness", "median and metric betweenness disagree at (" + model.render(x) +
                                     ", " + model.render(z) + ", " + model.render(y) + ")");
            return false;
        }
        return true;
    });

    // rank-formula distance == BFS distance (where the join exists)
    int skipped_pairs = 0;
    for_tuples(2, n, exhaustive_for(2), opt.samples, rng, [&](const std::vector<int>& t) {
        int formula;
        if (model.prod_distance)
            formula = model.prod_distance(t[0], t[1]);
        else {
            auto lub = scan_lub(model, t[0], t[1]);
            if (!lub) {
                ++skipped_pairs;
                return true;
            }
            formula = 2 * graph.rank[static_cast<size_t>(*lub)] -
                      graph.rank[static_cast<size_t>(t[0])] - graph.rank[static_cast<size_t>(t[1])];
        }
        if (formula != graph.dist_at(t[0], t[1], n)) {
            rep.rank_distance = false;
            issue("rank-distance", "rank formula and BFS disagree for " + model.render(t[0]) +
                                       " and " + model.render(t[1]));
            return false;
        }
        return true;
    });
    if (skipped_pairs > 0)
        rep.notes["rank-distance"] =
            std::to_string(skipped_pairs) + " pair(s) skipped (no join to feed the formula)";

    // coatomisticity: claimed irreducibles == co-atoms == single-upper-cover
    // elements, and every element is the meet of the irreducibles above it
    if (!model.claimed_irreducibles.empty() && graph.top >= 0) {
        rep.coatomistic_checked = true;
        std::vector<int> claimed = model.claimed_irreducibles;
        std::sort(claimed.begin(), claimed.end());
        std::vector<int> coat = graph.down[static_cast<size_t>(graph.top)];
        std::sort(coat.begin(), coat.end());
        std::vector<int> single;
        for (int a = 0; a < n; ++a)
            if (graph.up[static_cast<size_t>(a)].size() == 1)
                single.push_back(a);
        if (claimed != coat) {
            rep.coatomistic = false;
            issue("coatomistic", "claimed irreducibles differ from the co-atoms");
        } else if (claimed != single) {
            rep.coatomistic = false;
            issue("coatomistic", "claimed irreducibles differ from the single-upper-cover elements");
        } else {
            for (int x = 0; x < n && rep.coatomistic; ++x) {
                std::vector<int> above;
                for (int irr : claimed)
                    if (model.leq(x, irr))
                        above.push_back(irr);
                std::optional<int> g =
                    above.empty() ? std::optional<int>(graph.top) : scan_glb(model, above);
                if (!g || *g != x) {
                    rep.coatomistic = false;
                    issue("coatomistic", model.render(x) +
                                             " is not the meet of the irreducibles above it");
                }
            }
        }
    }

    return rep;
}

} // namespace detail

// ---------------------------------------------------------------------------
// concrete validators

ValidationReport validate_preorder_lattice(const GroundPtr& ground, const ValidationOptions& opt) {
    const Lattice& lat = Lattice::of(ground);
    detail::FiniteModel model;
    model.name = "preorders(m=" + std::to_string(ground->size()) + ")";
    model.n = lat.count();
    model.render = [&lat](int id) { return render_preorder(lat.element(id)); };
    model.leq = [&lat](int a, int b) {
        return (lat.element(a).mask() & ~lat.element(b).mask()) == 0;
    };
    model.prod_join = [&lat](int a, int b) { return lat.join(a, b); };
    model.prod_meet = [&lat](int a, int b) {
        auto m = lat.meet(a, b);
        return m ? *m : -1;
    };
    model.prod_meet_set = [&lat](const std::vector<int>& xs) {
        auto m = lat.meet_all(xs);
        return m ? *m : -1;
    };
    model.median_elem = [&lat](int a, int b, int c) -> std::optional<int> {
        try {
            return lat.median(a, b, c);
        } catch (const InternalError&) {
            return std::nullopt;
        }
    };
    model.prod_distance = [&lat](int a, int b) { return lat.distance(a, b); };
    model.claimed_irreducibles = lat.irreducible_ids();

    auto graph = detail::build_graph(model);
    return detail::run_model_validation(model, graph, opt, ground->size() <= 3);
}

ValidationReport validate_powerset_lattice(const GroundPtr& ground, const ValidationOptions& opt) {
    const int m = ground->size();
    const int n = 1 << m;
    detail::FiniteModel model;
    model.name = "powerset(m=" + std::to_string(m) + ")";
    model.n = n;
    model.render = [ground, m](int s) {
        std::string out = "{";
        bool first = true;
        for (int i = 0; i < m; ++i)
            if (s & (1 << i)) {
                if (!first)
                    out += ",";
                out += ground->label(i);
                first = false;
            }
        return out + "}";
    };
    model.leq = [](int a, int b) { return (a & ~b) == 0; };
    model.prod_join = [](int a, int b) { return a | b; };
    model.prod_meet = [](int a, int b) { return a & b; };
    model.prod_meet_set = [n](const std::vector<int>& xs) {
        int acc = n - 1;
        for (int x : xs)
            acc &= x;
        return acc;
    };
    model.median_elem = [](int a, int b, int c) -> std::optional<int> {
        // the join/meet median formula, written with the Boolean operations
        return ((a | b) & (b | c)) & (a | c);
    };
    model.prod_distance = [](int a, int b) {
        return 2 * std::popcount(static_cast<unsigned>(a | b)) -
               std::popcount(static_cast<unsigned>(a)) - std::popcount(static_cast<unsigned>(b));
    };
    for (int i = 0; i < m; ++i)
        model.claimed_irreducibles.push_back((n - 1) & ~(1 << i));

    auto graph = detail::build_graph(model);
    return detail::run_model_validation(model, graph, opt, true);
}

} // namespace medvote
