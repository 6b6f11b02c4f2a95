#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "snets/volume.hpp"

namespace snets {

enum class LookupStrategy : std::uint8_t { Single, Linear, Logarithmic };

/// Sets with more members than this use binary search instead of a linear scan.
inline constexpr std::size_t kLinearLookupMax = 16;

/// The selected labels; every other scalar classifies as background.
class SelectedLabelSet {
public:
    /// Deduplicates and sorts. Throws std::invalid_argument on empty input or the reserved value.
    explicit SelectedLabelSet(std::span<const Label> values);

    const std::vector<Label>& labels() const { return labels_; }
    std::size_t size() const { return labels_.size(); }
    LookupStrategy strategy() const { return strategy_; }

    bool contains(Label s) const { return contains(s, strategy_); }
    bool contains(Label s, LookupStrategy strategy) const;

private:
    std::vector<Label> labels_;
    LookupStrategy strategy_;
};

SelectedLabelSet build_label_set(std::span<const Label> values);

/// Per-thread classifier: remembers the last selected label hit and the last background value
/// seen, so runs of equal scalars skip the set lookup. Never share one between threads.
class LabelClassifier {
public:
    explicit LabelClassifier(const SelectedLabelSet& set) : set_(&set) {}

    /// Returns `s` if selected, otherwise kBackground.
    Label operator()(Label s) {
        if (s == last_hit_) return s;
        if (s == last_background_) return kBackground;
        if (set_->contains(s)) {
            last_hit_ = s;
            return s;
        }
        last_background_ = s;
        return kBackground;
    }

private:
    const SelectedLabelSet* set_;
    // kBackground is never selected, so it is a safe "empty" marker for both slots.
    Label last_hit_ = kBackground;
    Label last_background_ = kBackground;
};

/// Cold-cache classification.
inline Label classify(const SelectedLabelSet& set, Label s) {
    return set.contains(s) ? s : kBackground;
}

/// Boundary test on classified endpoint labels.
constexpr bool edge_intersects(Label c0, Label c1) {
    return c0 != c1;  // equal covers both-background; any difference involves a selected label
}

/// Parses `all`, `v1,v2,...`, `v1-v2` (inclusive), or comma-separated mixes of values and ranges.
/// `all` selects every distinct nonzero scalar present in `vol`. Throws std::invalid_argument.
std::vector<Label> parse_label_selection(std::string_view text, const LabeledVolume& vol);

} // namespace snets
