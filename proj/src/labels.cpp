#include "snets/labels.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <string>

namespace snets {

SelectedLabelSet::SelectedLabelSet(std::span<const Label> values)
    : labels_(values.begin(), values.end()) {
    if (labels_.empty()) throw std::invalid_argument("label set must not be empty");
    if (std::find(labels_.begin(), labels_.end(), kBackground) != labels_.end()) {
        throw std::invalid_argument("label 0xFFFFFFFF is reserved for background");
    }
    std::sort(labels_.begin(), labels_.end());
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
    if (labels_.size() == 1) {
        strategy_ = LookupStrategy::Single;
    } else if (labels_.size() <= kLinearLookupMax) {
        strategy_ = LookupStrategy::Linear;
    } else {
        strategy_ = LookupStrategy::Logarithmic;
    }
}

bool SelectedLabelSet::contains(Label s, LookupStrategy strategy) const {
    switch (strategy) {
    case LookupStrategy::Single:
        if (labels_.size() == 1) return s == labels_.front();
        [[fallthrough]];
    case LookupStrategy::Linear:
        for (Label v : labels_) {
            if (v == s) return true;
        }
        return false;
    case LookupStrategy::Logarithmic:
        return std::binary_search(labels_.begin(), labels_.end(), s);
    }
    return false;
}

SelectedLabelSet build_label_set(std::span<const Label> values) { return SelectedLabelSet(values); }

namespace {

Label parse_label(std::string_view tok) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size() || tok.empty()) {
        throw std::invalid_argument("bad label '" + std::string(tok) + "'");
    }
    if (v >= kBackground) throw std::invalid_argument("label out of range: " + std::string(tok));
    return static_cast<Label>(v);
}

} // namespace

std::vector<Label> parse_label_selection(std::string_view text, const LabeledVolume& vol) {
    if (text == "all") {
        std::vector<Label> out;
        std::vector<Label> sorted = vol.scalars();
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (Label v : sorted) {
            if (v != 0) out.push_back(v);
        }
        return out;
    }
    if (text.empty()) throw std::invalid_argument("empty label selection");

    std::vector<Label> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto tok = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        const auto dash = tok.find('-');
        if (dash == std::string_view::npos) {
            out.push_back(parse_label(tok));
        } else {
            const Label lo = parse_label(tok.substr(0, dash));
            const Label hi = parse_label(tok.substr(dash + 1));
            if (hi < lo) throw std::invalid_argument("descending label range '" + std::string(tok) + "'");
            if (hi - lo > (1u << 24)) throw std::invalid_argument("label range too large");
            for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(static_cast<Label>(v));
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

} // namespace snets
