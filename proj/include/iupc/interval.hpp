#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace iupc {

// Closed integer interval; an absent bound is unbounded on that side.
struct Interval {
    std::optional<std::int64_t> lo;
    std::optional<std::int64_t> hi;

    bool operator==(const Interval&) const = default;
};

// A normalized union of disjoint, non-adjacent closed integer intervals,
// ordered ascending. Supports the set algebra needed for guard/condition
// coverage analysis.
class IntervalSet {
public:
    IntervalSet() = default;

    static IntervalSet all();
    static IntervalSet none();
    static IntervalSet single(std::int64_t v);
    static IntervalSet range(std::int64_t lo, std::int64_t hi);  // empty when lo > hi
    static IntervalSet at_least(std::int64_t lo);
    static IntervalSet at_most(std::int64_t hi);

    IntervalSet unite(const IntervalSet& other) const;
    IntervalSet intersect(const IntervalSet& other) const;
    IntervalSet complement() const;
    IntervalSet difference(const IntervalSet& other) const;

    bool empty() const { return parts_.empty(); }
    bool is_all() const;
    bool contains(std::int64_t v) const;
    bool subset_of(const IntervalSet& other) const;
    bool disjoint_with(const IntervalSet& other) const;
    bool operator==(const IntervalSet&) const = default;

    const std::vector<Interval>& parts() const { return parts_; }

    std::string to_string() const;

private:
    static IntervalSet from_parts(std::vector<Interval> parts);

    std::vector<Interval> parts_;
};

}  // namespace iupc
