#include "snets/volume.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

#include "binary_io.hpp"

namespace snets {

namespace fs = std::filesystem;

std::size_t scalar_width(ScalarType type) {
    switch (type) {
    case ScalarType::U8: return 1;
    case ScalarType::U16: return 2;
    case ScalarType::U32: return 4;
    }
    return 0;
}

std::string_view scalar_type_name(ScalarType type) {
    switch (type) {
    case ScalarType::U8: return "u8";
    case ScalarType::U16: return "u16";
    case ScalarType::U32: return "u32";
    }
    return "?";
}

ScalarType parse_scalar_type(std::string_view name) {
    if (name == "u8") return ScalarType::U8;
    if (name == "u16") return ScalarType::U16;
    if (name == "u32") return ScalarType::U32;
    throw Error("unsupported dtype '" + std::string(name) + "' (expected u8, u16 or u32)");
}

namespace {

Label type_max(ScalarType type) {
    switch (type) {
    case ScalarType::U8: return 0xFFu;
    case ScalarType::U16: return 0xFFFFu;
    case ScalarType::U32: return kBackground - 1;
    }
    return 0;
}

std::size_t checked_count(const std::array<std::int64_t, 3>& dims) {
    for (auto d : dims) {
        if (d < 2) throw std::invalid_argument("volume dimensions must each be >= 2");
    }
    return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
           static_cast<std::size_t>(dims[2]);
}

} // namespace

LabeledVolume::LabeledVolume(std::array<std::int64_t, 3> dims, std::array<double, 3> spacing,
                             std::array<double, 3> origin, ScalarType type)
    : dims_(dims), spacing_(spacing), origin_(origin), type_(type),
      scalars_(checked_count(dims), 0) {
    validate();
}

LabeledVolume::LabeledVolume(std::array<std::int64_t, 3> dims, std::array<double, 3> spacing,
                             std::array<double, 3> origin, ScalarType type,
                             std::vector<Label> scalars)
    : dims_(dims), spacing_(spacing), origin_(origin), type_(type), scalars_(std::move(scalars)) {
    if (scalars_.size() != checked_count(dims_)) {
        throw std::invalid_argument("scalar count does not match dimensions");
    }
    validate();
    const Label limit = type_max(type_);
    for (Label v : scalars_) {
        if (v > limit) throw std::invalid_argument("scalar value exceeds element type range");
    }
}

void LabeledVolume::validate() const {
    checked_count(dims_);
    for (double s : spacing_) {
        if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("spacing must be > 0");
    }
    for (double o : origin_) {
        if (!std::isfinite(o)) throw std::invalid_argument("origin must be finite");
    }
}

Index3 LabeledVolume::coord(std::size_t idx) const {
    const auto m = static_cast<std::size_t>(dims_[0]);
    const auto n = static_cast<std::size_t>(dims_[1]);
    return {static_cast<std::int64_t>(idx % m), static_cast<std::int64_t>((idx / m) % n),
            static_cast<std::int64_t>(idx / (m * n))};
}

void LabeledVolume::set(std::int64_t i, std::int64_t j, std::int64_t k, Label v) {
    if (v > type_max(type_)) throw std::invalid_argument("scalar value exceeds element type range");
    scalars_[index(i, j, k)] = v;
}

std::array<double, 3> LabeledVolume::point_position(std::int64_t i, std::int64_t j,
                                                    std::int64_t k) const {
    return {origin_[0] + static_cast<double>(i) * spacing_[0],
            origin_[1] + static_cast<double>(j) * spacing_[1],
            origin_[2] + static_cast<double>(k) * spacing_[2]};
}

std::array<double, 3> LabeledVolume::voxel_center(std::int64_t i, std::int64_t j,
                                                  std::int64_t k) const {
    return {origin_[0] + (static_cast<double>(i) + 0.5) * spacing_[0],
            origin_[1] + (static_cast<double>(j) + 0.5) * spacing_[1],
            origin_[2] + (static_cast<double>(k) + 0.5) * spacing_[2]};
}

Label LabeledVolume::max_value() const {
    return scalars_.empty() ? 0 : *std::max_element(scalars_.begin(), scalars_.end());
}

// ---------------------------------------------------------------------------------------------
// Header + raw file I/O

namespace {

std::string_view trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

template <class T>
std::array<T, 3> parse_triple(std::string_view key, std::string_view value) {
    std::array<T, 3> out{};
    const char* p = value.data();
    const char* end = value.data() + value.size();
    for (int a = 0; a < 3; ++a) {
        while (p < end && (*p == ' ' || *p == '\t' || *p == ',')) ++p;
        auto [next, ec] = std::from_chars(p, end, out[a]);
        if (ec != std::errc{}) throw Error("malformed '" + std::string(key) + "' in volume header");
        p = next;
    }
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    if (p != end) throw Error("trailing characters in '" + std::string(key) + "'");
    return out;
}

template <class T>
std::string format_triple(const std::array<T, 3>& v) {
    std::ostringstream os;
    os << std::setprecision(17) << v[0] << ' ' << v[1] << ' ' << v[2];
    return os.str();
}

} // namespace

LabeledVolume load_volume(const fs::path& header) {
    std::ifstream in(header);
    if (!in) throw Error("cannot open volume header " + header.string());

    std::map<std::string, std::string, std::less<>> kv;
    std::string line;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) throw Error("malformed header line: " + std::string(t));
        kv[std::string(trim(t.substr(0, eq)))] = std::string(trim(t.substr(eq + 1)));
    }
    auto need = [&](std::string_view key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw Error("volume header missing '" + std::string(key) + "'");
        return it->second;
    };

    const auto dims = parse_triple<std::int64_t>("dims", need("dims"));
    const auto spacing = parse_triple<double>("spacing", need("spacing"));
    const auto origin = parse_triple<double>("origin", need("origin"));
    const ScalarType type = parse_scalar_type(need("dtype"));
    const fs::path raw = header.parent_path() / need("data");
    for (auto d : dims) {
        if (d < 2) throw Error("volume header dims must each be >= 2");
    }

    const std::size_t count = checked_count(dims);
    const std::size_t width = scalar_width(type);
    std::error_code ec;
    const auto actual = fs::file_size(raw, ec);
    if (ec) throw Error("cannot stat raw file " + raw.string());
    if (actual != count * width) {
        throw Error("raw file " + raw.string() + " has " + std::to_string(actual) +
                    " bytes, expected " + std::to_string(count * width));
    }

    std::ifstream rin(raw, std::ios::binary);
    if (!rin) throw Error("cannot open raw file " + raw.string());
    std::vector<Label> scalars(count);
    switch (type) {
    case ScalarType::U8: {
        std::vector<std::uint8_t> buf(count);
        detail::read_le_span<std::uint8_t>(rin, buf);
        std::copy(buf.begin(), buf.end(), scalars.begin());
        break;
    }
    case ScalarType::U16: {
        std::vector<std::uint16_t> buf(count);
        detail::read_le_span<std::uint16_t>(rin, buf);
        std::copy(buf.begin(), buf.end(), scalars.begin());
        break;
    }
    case ScalarType::U32:
        detail::read_le_span<std::uint32_t>(rin, scalars);
        if (std::find(scalars.begin(), scalars.end(), kBackground) != scalars.end()) {
            throw Error("raw file contains the reserved value 0xFFFFFFFF");
        }
        break;
    }
    try {
        return LabeledVolume(dims, spacing, origin, type, std::move(scalars));
    } catch (const std::invalid_argument& e) {
        throw Error(std::string("invalid volume header: ") + e.what());
    }
}

void save_volume(const LabeledVolume& vol, const fs::path& header) {
    fs::path raw = header;
    raw.replace_extension(".raw");
    {
        std::ofstream out(raw, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write raw file " + raw.string());
        const auto& s = vol.scalars();
        switch (vol.type()) {
        case ScalarType::U8: {
            std::vector<std::uint8_t> buf(s.begin(), s.end());
            detail::write_le_span<std::uint8_t>(out, buf);
            break;
        }
        case ScalarType::U16: {
            std::vector<std::uint16_t> buf(s.begin(), s.end());
            detail::write_le_span<std::uint16_t>(out, buf);
            break;
        }
        case ScalarType::U32:
            detail::write_le_span<std::uint32_t>(out, s);
            break;
        }
        if (!out) throw Error("failed writing " + raw.string());
    }
    std::ofstream out(header, std::ios::trunc);
    if (!out) throw Error("cannot write volume header " + header.string());
    out << "# snets labeled volume\n"
        << "dims=" << format_triple(vol.dims()) << '\n'
        << "spacing=" << format_triple(vol.spacing()) << '\n'
        << "origin=" << format_triple(vol.origin()) << '\n'
        << "dtype=" << scalar_type_name(vol.type()) << '\n'
        << "data=" << raw.filename().string() << '\n';
    if (!out) throw Error("failed writing " + header.string());
}

// ---------------------------------------------------------------------------------------------
// Synthetic data

namespace {

double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

LabeledVolume gen_spheres(std::array<std::int64_t, 3> dims, std::array<double, 3> spacing,
                          const SphereSpec& spec, ScalarType type) {
    if (spec.count < 1) throw std::invalid_argument("sphere count must be >= 1");
    if (!(spec.radius_min > 0.0) || spec.radius_max < spec.radius_min) {
        throw std::invalid_argument("sphere radius range must satisfy 0 < min <= max");
    }
    const std::uint64_t last = std::uint64_t{spec.label_start} + static_cast<std::uint64_t>(spec.count) - 1;
    if (last > type_max(type)) throw std::invalid_argument("sphere labels exceed element type range");

    LabeledVolume vol(dims, spacing, {0.0, 0.0, 0.0}, type);
    std::vector<Label> scalars(vol.size(), 0);
    std::mt19937_64 rng(spec.seed);

    for (int n = 0; n < spec.count; ++n) {
        std::array<double, 3> c{};
        for (int a = 0; a < 3; ++a) c[a] = unit_draw(rng) * static_cast<double>(dims[a] - 1);
        const double r = spec.radius_min + unit_draw(rng) * (spec.radius_max - spec.radius_min);
        const double r2 = r * r;
        const Label label = spec.label_start + static_cast<Label>(n);

        std::array<std::int64_t, 3> lo{}, hi{};
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(c[a] - r)));
            hi[a] = std::min<std::int64_t>(dims[a] - 1, static_cast<std::int64_t>(std::floor(c[a] + r)));
        }
        for (std::int64_t k = lo[2]; k <= hi[2]; ++k) {
            const double dz = static_cast<double>(k) - c[2];
            for (std::int64_t j = lo[1]; j <= hi[1]; ++j) {
                const double dy = static_cast<double>(j) - c[1];
                for (std::int64_t i = lo[0]; i <= hi[0]; ++i) {
                    const double dx = static_cast<double>(i) - c[0];
                    if (dx * dx + dy * dy + dz * dz <= r2) scalars[vol.index(i, j, k)] = label;
                }
            }
        }
    }
    return LabeledVolume(dims, spacing, {0.0, 0.0, 0.0}, type, std::move(scalars));
}

std::vector<std::pair<Label, std::uint64_t>> label_histogram(const LabeledVolume& vol) {
    std::map<Label, std::uint64_t> counts;
    for (Label v : vol.scalars()) ++counts[v];
    return {counts.begin(), counts.end()};
}

} // namespace snets
