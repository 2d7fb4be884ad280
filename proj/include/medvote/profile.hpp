#pragma once

#include <iosfwd>
#include <vector>

#include "medvote/relation.hpp"

namespace medvote {

// Preference profile: one total preorder per agent over a shared ground set.
class Profile {
  public:
    Profile(GroundPtr ground, std::vector<TotalPreorder> prefs);

    const GroundPtr& ground() const { return ground_; }
    int agents() const { return static_cast<int>(prefs_.size()); }
    const TotalPreorder& pref(int agent) const;
    const std::vector<TotalPreorder>& prefs() const { return prefs_; }

    Profile with_replaced(int agent, TotalPreorder pref) const;

    // Agent-wise restriction to a sub-agenda.
    Profile restricted(const std::vector<std::string>& agenda) const;

    bool operator==(const Profile& other) const;

  private:
    GroundPtr ground_;
    std::vector<TotalPreorder> prefs_;
};

// File format: one preorder encoding per line, in agent order; lines starting
// with '#' and blank lines are skipped. The ground set and the expected agent
// count always come from the caller, never from the file.
Profile parse_profile(const GroundPtr& ground, std::istream& in, int expected_agents);
Profile load_profile(const GroundPtr& ground, const std::string& path, int expected_agents);

} // namespace medvote
