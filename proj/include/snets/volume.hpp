#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace snets {

/// Raised for malformed inputs and I/O failures (headers, raw files, mesh files).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Label = std::uint32_t;

/// Reserved for "not a selected label"; never a legal stored scalar.
inline constexpr Label kBackground = 0xFFFFFFFFu;

enum class ScalarType : std::uint8_t { U8, U16, U32 };

std::size_t scalar_width(ScalarType type);
std::string_view scalar_type_name(ScalarType type);
ScalarType parse_scalar_type(std::string_view name);

struct Index3 {
    std::int64_t i = 0;
    std::int64_t j = 0;
    std::int64_t k = 0;
    friend bool operator==(const Index3&, const Index3&) = default;
};

/// A 3D lattice of integer labels. Scalars are x-fastest: index = i + M*(j + N*k).
///
/// Labels are held widened to 32 bits; `type` records the on-disk element width so that
/// save/load round-trips the file layout exactly.
class LabeledVolume {
public:
    LabeledVolume() = default;
    LabeledVolume(std::array<std::int64_t, 3> dims, std::array<double, 3> spacing,
                  std::array<double, 3> origin, ScalarType type);
    LabeledVolume(std::array<std::int64_t, 3> dims, std::array<double, 3> spacing,
                  std::array<double, 3> origin, ScalarType type, std::vector<Label> scalars);

    const std::array<std::int64_t, 3>& dims() const { return dims_; }
    std::int64_t nx() const { return dims_[0]; }
    std::int64_t ny() const { return dims_[1]; }
    std::int64_t nz() const { return dims_[2]; }
    const std::array<double, 3>& spacing() const { return spacing_; }
    const std::array<double, 3>& origin() const { return origin_; }
    ScalarType type() const { return type_; }

    std::size_t size() const { return scalars_.size(); }
    std::size_t index(std::int64_t i, std::int64_t j, std::int64_t k) const {
        return static_cast<std::size_t>(i + dims_[0] * (j + dims_[1] * k));
    }
    Index3 coord(std::size_t idx) const;

    Label at(std::int64_t i, std::int64_t j, std::int64_t k) const { return scalars_[index(i, j, k)]; }
    void set(std::int64_t i, std::int64_t j, std::int64_t k, Label v);

    const std::vector<Label>& scalars() const { return scalars_; }
    /// Pointer to the start of grid row (j, k).
    const Label* row(std::int64_t j, std::int64_t k) const { return scalars_.data() + index(0, j, k); }

    std::array<double, 3> point_position(std::int64_t i, std::int64_t j, std::int64_t k) const;
    std::array<double, 3> voxel_center(std::int64_t i, std::int64_t j, std::int64_t k) const;

    Label max_value() const;

    friend bool operator==(const LabeledVolume&, const LabeledVolume&) = default;

private:
    void validate() const;

    std::array<std::int64_t, 3> dims_{2, 2, 2};
    std::array<double, 3> spacing_{1.0, 1.0, 1.0};
    std::array<double, 3> origin_{0.0, 0.0, 0.0};
    ScalarType type_ = ScalarType::U16;
    std::vector<Label> scalars_ = std::vector<Label>(8, 0);
};

/// Reads a key=value volume header and the raw file it references (relative to the header).
LabeledVolume load_volume(const std::filesystem::path& header);

/// Writes `header` plus a raw file next to it (header stem + ".raw").
void save_volume(const LabeledVolume& vol, const std::filesystem::path& header);

struct SphereSpec {
    int count = 1;
    double radius_min = 1.0;
    double radius_max = 1.0;
    Label label_start = 1;
    std::uint64_t seed = 0;
};

/// Deterministic overlapping-sphere label map.
///
/// Draws come from std::mt19937_64 seeded with `spec.seed`; every draw is one raw 64-bit output
/// mapped to [0,1) as (x >> 11) * 2^-53, so the sequence is portable across standard libraries.
/// Per sphere n the draws are, in order: center x, y, z (uniform over [0, dim-1] in index units)
/// and radius (uniform over [radius_min, radius_max], index units). A grid point p is inside when
/// |p - center|^2 <= radius^2; later spheres overwrite earlier ones. Everything else is 0.
LabeledVolume gen_spheres(std::array<std::int64_t, 3> dims, std::array<double, 3> spacing,
                          const SphereSpec& spec, ScalarType type = ScalarType::U16);

/// Sorted (value, count) pairs over all scalars.
std::vector<std::pair<Label, std::uint64_t>> label_histogram(const LabeledVolume& vol);

} // namespace snets
