#include "medvote/relation.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <sstream>

namespace medvote {

namespace bits {

Mask full_relation(int m) {
    Mask r = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            r |= pair_bit(i, j, m);
    return r;
}

Mask diagonal(int m) {
    Mask r = 0;
    for (int i = 0; i < m; ++i)
        r |= pair_bit(i, i, m);
    return r;
}

bool is_reflexive(Mask rel, int m) {
    return (rel & diagonal(m)) == diagonal(m);
}

bool is_total(Mask rel, int m) {
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
            if (!(rel & pair_bit(i, j, m)) && !(rel & pair_bit(j, i, m)))
                return false;
    return true;
}

bool is_transitive(Mask rel, int m) {
    for (int i = 0; i < m; ++i) {
        Mask ri = row(rel, i, m);
        for (int j = 0; j < m; ++j)
            if (ri & (Mask{1} << j))
                if ((row(rel, j, m) & ~ri) != 0)
                    return false;
    }
    return true;
}

bool is_total_preorder(Mask rel, int m) {
    return is_reflexive(rel, m) && is_total(rel, m) && is_transitive(rel, m);
}

Mask closure(Mask rel, int m) {
    // Floyd-Warshall over bit rows; rows are m-bit slices of the mask.
    Mask rows[GroundSet::kMaxSize];
    for (int i = 0; i < m; ++i)
        rows[i] = row(rel, i, m);
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            if (rows[i] & (Mask{1} << k))
                rows[i] |= rows[k];
    Mask out = 0;
    for (int i = 0; i < m; ++i)
        out |= rows[i] << (i * m);
    return out;
}

Mask converse(Mask rel, int m) {
    Mask out = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (rel & pair_bit(i, j, m))
                out |= pair_bit(j, i, m);
    return out;
}

Mask restrict_pairs(Mask rel, unsigned keep, int m) {
    Mask out = 0;
    for (int i = 0; i < m; ++i) {
        if (!(keep & (1u << i)))
            continue;
        for (int j = 0; j < m; ++j)
            if ((keep & (1u << j)) && (rel & pair_bit(i, j, m)))
                out |= pair_bit(i, j, m);
    }
    return out;
}

Mask compress(Mask rel, unsigned keep, int m) {
    std::vector<int> idx;
    for (int i = 0; i < m; ++i)
        if (keep & (1u << i))
            idx.push_back(i);
    const int k = static_cast<int>(idx.size());
    Mask out = 0;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            if (rel & pair_bit(idx[static_cast<size_t>(a)], idx[static_cast<size_t>(b)], m))
                out |= pair_bit(a, b, k);
    return out;
}

} // namespace bits

int OrderedPartition::block_of(int element) const {
    for (size_t b = 0; b < blocks.size(); ++b)
        for (int e : blocks[b])
            if (e == element)
                return static_cast<int>(b);
    throw ParameterError("element not present in ordered partition");
}

TotalPreorder::TotalPreorder(GroundPtr ground, Mask rel)
    : ground_(std::move(ground)), rel_(rel) {
    if (!ground_)
        throw InternalError("total preorder needs a ground set");
    if (!bits::is_total_preorder(rel_, ground_->size()))
        throw InternalError("relation mask is not a total preorder");
}

bool TotalPreorder::geq(int i, int j) const {
    const int m = size();
    if (i < 0 || j < 0 || i >= m || j >= m)
        throw ParameterError("alternative index out of range");
    return (rel_ & bits::pair_bit(i, j, m)) != 0;
}

bool TotalPreorder::geq(const std::string& x, const std::string& y) const {
    return geq(ground_->index(x), ground_->index(y));
}

bool TotalPreorder::strictly(int i, int j) const {
    return geq(i, j) && !geq(j, i);
}

bool TotalPreorder::strictly(const std::string& x, const std::string& y) const {
    return strictly(ground_->index(x), ground_->index(y));
}

bool TotalPreorder::indifferent(int i, int j) const {
    return geq(i, j) && geq(j, i);
}

bool TotalPreorder::indifferent(const std::string& x, const std::string& y) const {
    return indifferent(ground_->index(x), ground_->index(y));
}

bool TotalPreorder::contained_in(const TotalPreorder& other) const {
    if (*ground_ != *other.ground_)
        throw ParameterError("containment requires a shared ground set");
    return (rel_ & ~other.rel_) == 0;
}

OrderedPartition TotalPreorder::blocks() const {
    // i and j tie exactly when their weakly-below sets coincide; a strictly
    // better alternative has a strictly larger weakly-below set.
    const int m = size();
    std::vector<int> score(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i)
        score[static_cast<size_t>(i)] = std::popcount(bits::row(rel_, i, m));
    std::vector<int> order(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i)
        order[static_cast<size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return score[static_cast<size_t>(a)] > score[static_cast<size_t>(b)]; });
    OrderedPartition part;
    for (int i : order) {
        if (!part.blocks.empty() &&
            score[static_cast<size_t>(part.blocks.back().front())] == score[static_cast<size_t>(i)])
            part.blocks.back().push_back(i);
        else
            part.blocks.push_back({i});
    }
    return part;
}

int TotalPreorder::block_count() const {
    return static_cast<int>(blocks().blocks.size());
}

bool TotalPreorder::is_linear() const {
    const int m = size();
    return std::popcount(rel_) == m * (m + 1) / 2;
}

TotalPreorder TotalPreorder::converse() const {
    return TotalPreorder(ground_, bits::converse(rel_, size()));
}

bool TotalPreorder::operator==(const TotalPreorder& other) const {
    return rel_ == other.rel_ &&
           (ground_ == other.ground_ || *ground_ == *other.ground_);
}

TotalPreorder from_partition(const GroundPtr& ground, const OrderedPartition& part) {
    const int m = ground->size();
    std::vector<int> block_of(static_cast<size_t>(m), -1);
    int covered = 0;
    for (size_t b = 0; b < part.blocks.size(); ++b) {
        if (part.blocks[b].empty())
            throw ParseError("empty indifference class");
        for (int e : part.blocks[b]) {
            if (e < 0 || e >= m)
                throw ParameterError("partition element out of range");
            if (block_of[static_cast<size_t>(e)] != -1)
                throw ParseError("alternative appears in two indifference classes");
            block_of[static_cast<size_t>(e)] = static_cast<int>(b);
            ++covered;
        }
    }
    if (covered != m)
        throw ParseError("ordered partition does not cover the ground set");
    Mask rel = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (block_of[static_cast<size_t>(i)] <= block_of[static_cast<size_t>(j)])
                rel |= bits::pair_bit(i, j, m);
    return TotalPreorder(ground, rel);
}

std::string render_preorder(const TotalPreorder& r) {
    const auto part = r.blocks();
    const auto& g = *r.ground();
    std::string out;
    for (size_t b = 0; b < part.blocks.size(); ++b) {
        if (b)
            out += '|';
        // blocks() already lists members in ground-set order
        for (size_t k = 0; k < part.blocks[b].size(); ++k) {
            if (k)
                out += ' ';
            out += g.label(part.blocks[b][k]);
        }
    }
    return out;
}

TotalPreorder parse_preorder(const GroundPtr& ground, const std::string& text) {
    if (text.empty())
        throw ParseError("empty preorder encoding");
    OrderedPartition part;
    std::vector<std::string> segments;
    size_t start = 0;
    while (true) {
        size_t bar = text.find('|', start);
        segments.push_back(text.substr(start, bar - start));
        if (bar == std::string::npos)
            break;
        start = bar + 1;
    }
    for (const std::string& block : segments) {
        std::vector<int> members;
        std::istringstream bin(block);
        std::string label;
        while (bin >> label)
            members.push_back(ground->index(label));
        if (members.empty())
            throw ParseError("empty indifference class in '" + text + "'");
        std::sort(members.begin(), members.end());
        part.blocks.push_back(std::move(members));
    }
    return from_partition(ground, part);
}

namespace {

void gen_partitions(unsigned remaining, int m, OrderedPartition& acc,
                    std::vector<OrderedPartition>& out) {
    if (remaining == 0) {
        out.push_back(acc);
        return;
    }
    // choose the next (best remaining) indifference class: any nonempty subset
    for (unsigned sub = remaining; sub; sub = (sub - 1) & remaining) {
        std::vector<int> block;
        for (int i = 0; i < m; ++i)
            if (sub & (1u << i))
                block.push_back(i);
        acc.blocks.push_back(std::move(block));
        gen_partitions(remaining & ~sub, m, acc, out);
        acc.blocks.pop_back();
    }
}

} // namespace

const std::vector<TotalPreorder>& enumerate_preorders(const GroundPtr& ground) {
    static std::map<std::vector<std::string>, std::vector<TotalPreorder>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(ground->labels());
    if (it != cache.end())
        return it->second;

    const int m = ground->size();
    std::vector<OrderedPartition> parts;
    OrderedPartition acc;
    gen_partitions((1u << m) - 1, m, acc, parts);
    std::vector<TotalPreorder> elems;
    elems.reserve(parts.size());
    for (const auto& p : parts)
        elems.push_back(from_partition(ground, p));
    std::sort(elems.begin(), elems.end(), [](const TotalPreorder& a, const TotalPreorder& b) {
        return render_preorder(a) < render_preorder(b);
    });
    return cache.emplace(ground->labels(), std::move(elems)).first->second;
}

TotalPreorder restrict_indexed(const TotalPreorder& r, const std::vector<int>& keep) {
    if (keep.empty())
        throw EmptyAgenda("restriction to an empty agenda");
    const int m = r.size();
    unsigned keep_mask = 0;
    for (int i : keep) {
        if (i < 0 || i >= m)
            throw ParameterError("restriction index out of range");
        keep_mask |= 1u << i;
    }
    auto sub = r.ground()->subset(keep);
    return TotalPreorder(sub, bits::compress(r.mask(), keep_mask, m));
}

TotalPreorder restrict(const TotalPreorder& r, const std::vector<std::string>& agenda) {
    std::vector<int> keep;
    keep.reserve(agenda.size());
    for (const auto& l : agenda)
        keep.push_back(r.ground()->index(l));
    return restrict_indexed(r, keep);
}

} // namespace medvote
