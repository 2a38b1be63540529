#include "iupc/interval.hpp"

#include <algorithm>
#include <limits>

namespace iupc {

namespace {

constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

std::int64_t lo_of(const Interval& i) { return i.lo.value_or(kMin); }
std::int64_t hi_of(const Interval& i) { return i.hi.value_or(kMax); }

std::optional<std::int64_t> to_lo(std::int64_t v) {
    return v == kMin ? std::nullopt : std::optional<std::int64_t>(v);
}
std::optional<std::int64_t> to_hi(std::int64_t v) {
    return v == kMax ? std::nullopt : std::optional<std::int64_t>(v);
}

}  // namespace

IntervalSet IntervalSet::from_parts(std::vector<Interval> parts) {
    std::erase_if(parts, [](const Interval& i) { return lo_of(i) > hi_of(i); });
    std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
        return lo_of(a) != lo_of(b) ? lo_of(a) < lo_of(b) : hi_of(a) < hi_of(b);
    });
    std::vector<Interval> merged;
    for (const Interval& part : parts) {
        if (!merged.empty()) {
            Interval& last = merged.back();
            // merge overlapping or adjacent integer intervals
            std::int64_t last_hi = hi_of(last);
            bool adjacent = last_hi != kMax && last_hi + 1 == lo_of(part);
            if (lo_of(part) <= last_hi || adjacent) {
                if (hi_of(part) > last_hi) last.hi = part.hi;
                continue;
            }
        }
        merged.push_back(part);
    }
    IntervalSet r;
    r.parts_ = std::move(merged);
    return r;
}

IntervalSet IntervalSet::all() { return from_parts({Interval{}}); }
IntervalSet IntervalSet::none() { return IntervalSet{}; }
IntervalSet IntervalSet::single(std::int64_t v) { return from_parts({Interval{v, v}}); }
IntervalSet IntervalSet::range(std::int64_t lo, std::int64_t hi) {
    return from_parts({Interval{lo, hi}});
}
IntervalSet IntervalSet::at_least(std::int64_t lo) {
    return from_parts({Interval{lo, std::nullopt}});
}
IntervalSet IntervalSet::at_most(std::int64_t hi) {
    return from_parts({Interval{std::nullopt, hi}});
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
    std::vector<Interval> parts = parts_;
    parts.insert(parts.end(), other.parts_.begin(), other.parts_.end());
    return from_parts(std::move(parts));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
    std::vector<Interval> parts;
    for (const Interval& a : parts_) {
        for (const Interval& b : other.parts_) {
            std::int64_t lo = std::max(lo_of(a), lo_of(b));
            std::int64_t hi = std::min(hi_of(a), hi_of(b));
            if (lo <= hi) parts.push_back(Interval{to_lo(lo), to_hi(hi)});
        }
    }
    return from_parts(std::move(parts));
}

IntervalSet IntervalSet::complement() const {
    std::vector<Interval> parts;
    std::int64_t cursor = kMin;
    bool open = true;  // cursor marks the start of an uncovered region
    for (const Interval& p : parts_) {
        std::int64_t lo = lo_of(p);
        if (lo > cursor) parts.push_back(Interval{to_lo(cursor), to_hi(lo - 1)});
        std::int64_t hi = hi_of(p);
        if (hi == kMax) {
            open = false;
            break;
        }
        cursor = hi + 1;
    }
    if (open) parts.push_back(Interval{to_lo(cursor), std::nullopt});
    return from_parts(std::move(parts));
}

IntervalSet IntervalSet::difference(const IntervalSet& other) const {
    return intersect(other.complement());
}

bool IntervalSet::is_all() const {
    return parts_.size() == 1 && !parts_[0].lo && !parts_[0].hi;
}

bool IntervalSet::contains(std::int64_t v) const {
    for (const Interval& p : parts_)
        if (lo_of(p) <= v && v <= hi_of(p)) return true;
    return false;
}

bool IntervalSet::subset_of(const IntervalSet& other) const {
    return difference(other).empty();
}

bool IntervalSet::disjoint_with(const IntervalSet& other) const {
    return intersect(other).empty();
}

std::string IntervalSet::to_string() const {
    if (parts_.empty()) return "{}";
    std::string out;
    for (const Interval& p : parts_) {
        if (!out.empty()) out += " u ";
        out += "[";
        out += p.lo ? std::to_string(*p.lo) : "-inf";
        out += ", ";
        out += p.hi ? std::to_string(*p.hi) : "+inf";
        out += "]";
    }
    return out;
}

}  // namespace iupc
