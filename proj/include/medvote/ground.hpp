#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "medvote/errors.hpp"

namespace medvote {

// Ordered set of alternative labels. Relations are bit-packed over the label
// indices, so the size cap keeps an m*m incidence matrix inside 64 bits with
// room to spare; everything in this library is desk-scale by design.
//
// Ground sets of size 1 and 2 exist only as restriction targets (sub-agendas);
// profiles, rules and enumeration-based checks require size >= 3 and enforce
// that where they are defined.
class GroundSet {
  public:
    static constexpr int kMaxSize = 5;

    explicit GroundSet(std::vector<std::string> labels);

    int size() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int i) const { return labels_.at(static_cast<size_t>(i)); }

    // Index of a label; throws ParseError if unknown.
    int index(const std::string& label) const;
    bool contains(const std::string& label) const;

    bool operator==(const GroundSet& other) const { return labels_ == other.labels_; }
    bool operator!=(const GroundSet& other) const { return !(*this == other); }

    // Sub-ground keeping the given indices in this ground set's order.
    // Throws EmptyAgenda when the selection is empty.
    std::shared_ptr<const GroundSet> subset(const std::vector<int>& keep) const;

    // Parse a comma-separated label list ("a,b,c").
    static std::shared_ptr<const GroundSet> parse(const std::string& text);

  private:
    std::vector<std::string> labels_;
};

using GroundPtr = std::shared_ptr<const GroundSet>;

// Convenience factory for the common case.
GroundPtr make_ground(std::vector<std::string> labels);

} // namespace medvote
