#pragma once

// Little-endian field I/O shared by the raw-volume and mesh writers.

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <type_traits>

#include "snets/volume.hpp"

namespace snets::detail {

template <class T>
T byteswap_if_big(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        for (std::size_t a = 0, z = sizeof(T) - 1; a < z; ++a, --z) std::swap(b[a], b[z]);
        std::memcpy(&v, b, sizeof(T));
    }
    return v;
}

template <class T>
void write_le(std::ostream& os, T v) {
    v = byteswap_if_big(v);
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void write_le_span(std::ostream& os, std::span<const T> values) {
    if constexpr (std::endian::native == std::endian::little) {
        os.write(reinterpret_cast<const char*>(values.data()),
                 static_cast<std::streamsize>(values.size_bytes()));
    } else {
        for (const T& v : values) write_le(os, v);
    }
}

template <class T>
T read_le(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw Error("unexpected end of file");
    return byteswap_if_big(v);
}

template <class T>
void read_le_span(std::istream& is, std::span<T> out) {
    is.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(out.size_bytes()));
    if (!is) throw Error("unexpected end of file");
    if constexpr (std::endian::native == std::endian::big) {
        for (T& v : out) v = byteswap_if_big(v);
    }
}

} // namespace snets::detail
