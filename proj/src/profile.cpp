#include "medvote/profile.hpp"

#include <fstream>
#include <sstream>

namespace medvote {

Profile::Profile(GroundPtr ground, std::vector<TotalPreorder> prefs)
    : ground_(std::move(ground)), prefs_(std::move(prefs)) {
    if (!ground_)
        throw InternalError("profile needs a ground set");
    if (prefs_.size() < 3)
        throw ParameterError("profiles require at least three agents");
    for (const auto& p : prefs_)
        if (*p.ground() != *ground_)
            throw ParameterError("profile preferences must share one ground set");
}

const TotalPreorder& Profile::pref(int agent) const {
    if (agent < 0 || agent >= agents())
        throw ParameterError("agent index out of range");
    return prefs_[static_cast<size_t>(agent)];
}

Profile Profile::with_replaced(int agent, TotalPreorder pref) const {
    if (agent < 0 || agent >= agents())
        throw ParameterError("agent index out of range");
    auto copy = prefs_;
    copy[static_cast<size_t>(agent)] = std::move(pref);
    return Profile(ground_, std::move(copy));
}

Profile Profile::restricted(const std::vector<std::string>& agenda) const {
    std::vector<TotalPreorder> sub;
    sub.reserve(prefs_.size());
    for (const auto& p : prefs_)
        sub.push_back(restrict(p, agenda));
    // Re-point every restricted preorder at one shared sub-ground object.
    GroundPtr g = sub.front().ground();
    std::vector<TotalPreorder> shared;
    shared.reserve(sub.size());
    for (const auto& p : sub)
        shared.emplace_back(g, p.mask());
    return Profile(g, std::move(shared));
}

bool Profile::operator==(const Profile& other) const {
    if (agents() != other.agents() || *ground_ != *other.ground_)
        return false;
    for (int i = 0; i < agents(); ++i)
        if (!(prefs_[static_cast<size_t>(i)] == other.prefs_[static_cast<size_t>(i)]))
            return false;
    return true;
}

Profile parse_profile(const GroundPtr& ground, std::istream& in, int expected_agents) {
    std::vector<TotalPreorder> prefs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos)
            continue;
        if (line[b] == '#')
            continue;
        size_t e = line.find_last_not_of(" \t\r");
        try {
            prefs.push_back(parse_preorder(ground, line.substr(b, e - b + 1)));
        } catch (const ParseError& err) {
            throw ParseError("line " + std::to_string(lineno) + ": " + err.what());
        }
    }
    if (expected_agents > 0 && static_cast<int>(prefs.size()) != expected_agents)
        throw ParseError("profile has " + std::to_string(prefs.size()) + " agents, expected " +
                         std::to_string(expected_agents));
    return Profile(ground, std::move(prefs));
}

Profile load_profile(const GroundPtr& ground, const std::string& path, int expected_agents) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open profile file '" + path + "'");
    return parse_profile(ground, in, expected_agents);
}

} // namespace medvote
