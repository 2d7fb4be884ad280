#include "medvote/sum.hpp"

#include <algorithm>
#include <bit>
#include <memory>
#include <mutex>
#include <queue>

#include "medvote/detail/validate.hpp"

namespace medvote {

namespace {

// Lift a relation over a sub-ground (indices 0..k-1) into parent coordinates
// given the parent indices of the kept labels.
Mask lift(Mask sub, const std::vector<int>& keep, int m) {
    Mask out = 0;
    const int k = static_cast<int>(keep.size());
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (sub & bits::pair_bit(i, j, k))
                out |= bits::pair_bit(keep[static_cast<size_t>(i)],
                                      keep[static_cast<size_t>(j)], m);
    return out;
}

} // namespace

bool is_sum_element(unsigned agenda, Mask rel, int m) {
    if (agenda == 0 || agenda >= (1u << m))
        return false;
    for (int i = 0; i < m; ++i) {
        const bool in = (agenda >> i) & 1u;
        if (in != static_cast<bool>(rel & bits::pair_bit(i, i, m)))
            return false;
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (!(rel & bits::pair_bit(i, j, m)))
                continue;
            if (!((agenda >> i) & 1u) || !((agenda >> j) & 1u))
                return false; // pair sticking out of the agenda
        }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (!((agenda >> i) & 1u) || !((agenda >> j) & 1u))
                continue;
            if (!(rel & bits::pair_bit(i, j, m)) && !(rel & bits::pair_bit(j, i, m)))
                return false; // not total on the agenda
        }
    return bits::closure(rel, m) == rel;
}

SumElement sum_median(const SumElement& x, const SumElement& y, const SumElement& z, int m) {
    const Mask xy = bits::closure(x.rel | y.rel, m);
    const Mask yz = bits::closure(y.rel | z.rel, m);
    const Mask xz = bits::closure(x.rel | z.rel, m);
    SumElement out;
    out.rel = xy & yz & xz;
    for (int i = 0; i < m; ++i)
        if (out.rel & bits::pair_bit(i, i, m))
            out.agenda |= 1u << i;
    return out;
}

SumStructure::SumStructure(GroundPtr ground) : ground_(std::move(ground)) {
    const int m = ground_->size();
    for (unsigned agenda = 1; agenda < (1u << m); ++agenda) {
        std::vector<int> keep;
        for (int i = 0; i < m; ++i)
            if (agenda & (1u << i))
                keep.push_back(i);
        auto sub = ground_->subset(keep);
        for (const auto& r : enumerate_preorders(sub))
            elems_.push_back({agenda, lift(r.mask(), keep, m)});
    }
    std::sort(elems_.begin(), elems_.end(), [this, m](const SumElement& a, const SumElement& b) {
        int pa = std::popcount(a.agenda), pb = std::popcount(b.agenda);
        if (pa != pb)
            return pa < pb;
        if (a.agenda != b.agenda)
            return a.agenda < b.agenda;
        return a.rel < b.rel;
    });
    const int n = count();
    for (int i = 0; i < n; ++i)
        id_of_[elems_[static_cast<size_t>(i)]] = i;

    up_.assign(static_cast<size_t>(n), {});
    down_.assign(static_cast<size_t>(n), {});
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b || !leq(a, b))
                continue;
            bool cover = true;
            for (int c = 0; c < n && cover; ++c)
                if (c != a && c != b && leq(a, c) && leq(c, b))
                    cover = false;
            if (cover) {
                up_[static_cast<size_t>(a)].push_back(b);
                down_[static_cast<size_t>(b)].push_back(a);
            }
        }

    rank_.assign(static_cast<size_t>(n), 0);
    std::vector<int> order(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [this](int x, int y) {
        return std::popcount(elems_[static_cast<size_t>(x)].rel) <
               std::popcount(elems_[static_cast<size_t>(y)].rel);
    });
    for (int x : order)
        for (int d : down_[static_cast<size_t>(x)])
            rank_[static_cast<size_t>(x)] =
                std::max(rank_[static_cast<size_t>(x)], rank_[static_cast<size_t>(d)] + 1);

    dist_.assign(static_cast<size_t>(n) * n, -1);
    for (int src = 0; src < n; ++src) {
        auto* row = &dist_[static_cast<size_t>(src) * n];
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
}

const SumStructure& SumStructure::of(const GroundPtr& ground) {
    static std::map<std::vector<std::string>, std::unique_ptr<SumStructure>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(ground->labels());
    if (it == cache.end())
        it = cache.emplace(ground->labels(),
                           std::unique_ptr<SumStructure>(new SumStructure(ground))).first;
    return *it->second;
}

int SumStructure::id_of(const SumElement& e) const {
    auto it = id_of_.find(e);
    if (it == id_of_.end())
        throw ParameterError("not an element of the agenda sum");
    return it->second;
}

int SumStructure::id_of(const TotalPreorder& r) const {
    const int m = ground_->size();
    std::vector<int> keep;
    for (const auto& label : r.ground()->labels())
        keep.push_back(ground_->index(label));
    SumElement e;
    for (int i : keep)
        e.agenda |= 1u << i;
    e.rel = lift(r.mask(), keep, m);
    return id_of(e);
}

bool SumStructure::leq(int a, int b) const {
    return (elems_[static_cast<size_t>(a)].rel & ~elems_[static_cast<size_t>(b)].rel) == 0;
}

std::optional<int> SumStructure::join(int a, int b) const {
    const int m = ground_->size();
    const auto& ea = elems_[static_cast<size_t>(a)];
    const auto& eb = elems_[static_cast<size_t>(b)];
    SumElement cand;
    cand.agenda = ea.agenda | eb.agenda;
    cand.rel = bits::closure(ea.rel | eb.rel, m);
    // any upper bound contains the closure of the union, so the closure is
    // the least upper bound exactly when it is itself an element
    if (!is_sum_element(cand.agenda, cand.rel, m))
        return std::nullopt;
    return id_of(cand);
}

std::optional<int> SumStructure::meet(int a, int b) const {
    const Mask common = elems_[static_cast<size_t>(a)].rel & elems_[static_cast<size_t>(b)].rel;
    int best = -1;
    for (int c = 0; c < count(); ++c) {
        if ((elems_[static_cast<size_t>(c)].rel & ~common) != 0)
            continue;
        if (best < 0 || leq(best, c))
            best = c;
    }
    if (best < 0)
        return std::nullopt;
    for (int c = 0; c < count(); ++c)
        if ((elems_[static_cast<size_t>(c)].rel & ~common) == 0 && !leq(c, best))
            return std::nullopt;
    return best;
}

std::optional<int> SumStructure::median(int a, int b, int c) const {
    const int m = ground_->size();
    SumElement e = sum_median(elems_[static_cast<size_t>(a)], elems_[static_cast<size_t>(b)],
                              elems_[static_cast<size_t>(c)], m);
    if (!is_sum_element(e.agenda, e.rel, m))
        return std::nullopt;
    return id_of(e);
}

int SumStructure::distance(int a, int b) const {
    return dist_[static_cast<size_t>(a) * count() + b];
}

TotalPreorder SumStructure::as_preorder(int id) const {
    const auto& e = elems_[static_cast<size_t>(id)];
    const int m = ground_->size();
    std::vector<int> keep;
    for (int i = 0; i < m; ++i)
        if (e.agenda & (1u << i))
            keep.push_back(i);
    return TotalPreorder(ground_->subset(keep),
                         bits::compress(e.rel, e.agenda, m));
}

std::string SumStructure::render(int id) const {
    return render_preorder(as_preorder(id));
}

ValidationReport validate_sum_structure(const GroundPtr& ground, const ValidationOptions& opt) {
    const SumStructure& sum = SumStructure::of(ground);
    const int m = ground->size();
    detail::FiniteModel model;
    model.name = "agenda-sum(m=" + std::to_string(m) + ")";
    model.n = sum.count();
    model.render = [&sum](int id) {
        return sum.render(id) + " on {" + [&sum, id]() {
            std::string s;
            const auto& e = sum.element(id);
            for (int i = 0; i < sum.ground()->size(); ++i)
                if (e.agenda & (1u << i)) {
                    if (!s.empty())
                        s += ",";
                    s += sum.ground()->label(i);
                }
            return s;
        }() + "}";
    };
    // raw rel masks, captured by value so the lambdas do plain mask work
    auto rels = std::make_shared<std::vector<Mask>>();
    for (int i = 0; i < sum.count(); ++i)
        rels->push_back(sum.element(i).rel);
    model.leq = [rels](int a, int b) {
        return ((*rels)[static_cast<size_t>(a)] & ~(*rels)[static_cast<size_t>(b)]) == 0;
    };

    // pairwise join/meet tables once, so the triple scans stay cheap
    const int n = sum.count();
    auto join_tab = std::make_shared<std::vector<int>>(static_cast<size_t>(n) * n, -1);
    auto meet_tab = std::make_shared<std::vector<int>>(static_cast<size_t>(n) * n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            auto j = sum.join(a, b);
            auto mt = sum.meet(a, b);
            (*join_tab)[static_cast<size_t>(a) * n + b] =
                (*join_tab)[static_cast<size_t>(b) * n + a] = j ? *j : -1;
            (*meet_tab)[static_cast<size_t>(a) * n + b] =
                (*meet_tab)[static_cast<size_t>(b) * n + a] = mt ? *mt : -1;
        }
    model.prod_join = [join_tab, n](int a, int b) {
        return (*join_tab)[static_cast<size_t>(a) * n + b];
    };
    model.prod_meet = [meet_tab, n](int a, int b) {
        return (*meet_tab)[static_cast<size_t>(a) * n + b];
    };
    model.prod_meet_set = [rels, n](const std::vector<int>& xs) {
        Mask common = ~Mask(0);
        for (int x : xs)
            common &= (*rels)[static_cast<size_t>(x)];
        int best = -1;
        for (int c = 0; c < n; ++c) {
            const Mask mc = (*rels)[static_cast<size_t>(c)];
            if ((mc & ~common) != 0)
                continue;
            if (best < 0 || ((*rels)[static_cast<size_t>(best)] & ~mc) == 0)
                best = c;
        }
        if (best < 0)
            return -1;
        const Mask mb = (*rels)[static_cast<size_t>(best)];
        for (int c = 0; c < n; ++c) {
            const Mask mc = (*rels)[static_cast<size_t>(c)];
            if ((mc & ~common) == 0 && (mc & ~mb) != 0)
                return -1;
        }
        return best;
    };
    model.median_mask = [m](Mask x, Mask y, Mask z) {
        return bits::closure(x | y, m) & bits::closure(y | z, m) & bits::closure(x | z, m);
    };
    model.key = [rels](int id) { return (*rels)[static_cast<size_t>(id)]; };

    auto graph = detail::build_graph(model);
    return detail::run_model_validation(model, graph, opt, m <= 3);
}

} // namespace medvote
