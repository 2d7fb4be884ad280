#include "medvote/ground.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace medvote {

GroundSet::GroundSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty())
        throw EmptyAgenda("ground set must contain at least one alternative");
    if (static_cast<int>(labels_.size()) > kMaxSize)
        throw GroundTooLarge("ground set larger than " + std::to_string(kMaxSize) +
                             " alternatives is not supported");
    std::set<std::string> seen;
    for (const auto& l : labels_) {
        if (l.empty())
            throw ParseError("empty alternative label");
        if (l.find('|') != std::string::npos || l.find(' ') != std::string::npos ||
            l.find(',') != std::string::npos)
            throw ParseError("label '" + l + "' contains a reserved character");
        if (!seen.insert(l).second)
            throw ParseError("duplicate alternative label '" + l + "'");
    }
}

int GroundSet::index(const std::string& label) const {
    for (size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label)
            return static_cast<int>(i);
    throw ParseError("unknown alternative label '" + label + "'");
}

bool GroundSet::contains(const std::string& label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::shared_ptr<const GroundSet> GroundSet::subset(const std::vector<int>& keep) const {
    if (keep.empty())
        throw EmptyAgenda("cannot build an empty sub-ground");
    std::vector<std::string> sub;
    std::vector<int> sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i] == sorted[i + 1])
            throw ParameterError("duplicate index in sub-ground selection");
    for (int idx : sorted) {
        if (idx < 0 || idx >= size())
            throw ParameterError("sub-ground index out of range");
        sub.push_back(labels_[static_cast<size_t>(idx)]);
    }
    return std::make_shared<const GroundSet>(std::move(sub));
}

std::shared_ptr<const GroundSet> GroundSet::parse(const std::string& text) {
    std::vector<std::string> labels;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        // trim surrounding whitespace
        size_t b = item.find_first_not_of(" \t");
        size_t e = item.find_last_not_of(" \t");
        if (b == std::string::npos)
            throw ParseError("empty label in ground set '" + text + "'");
        labels.push_back(item.substr(b, e - b + 1));
    }
    if (labels.empty())
        throw ParseError("empty ground set specification");
    return std::make_shared<const GroundSet>(std::move(labels));
}

GroundPtr make_ground(std::vector<std::string> labels) {
    return std::make_shared<const GroundSet>(std::move(labels));
}

} // namespace medvote
