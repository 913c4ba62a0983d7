#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "mapstat/error.hpp"
#include "mapstat/mapping.hpp"

namespace mapstat {

// Reproducible stream of 64-bit words keyed by (seed, stream_id).
//
// The engine is std::mt19937_64 seeded through std::seed_seq from the four
// 32-bit halves of seed and stream_id. Both are fully specified by the
// standard, so a (seed, stream_id, position) triple names the same word on
// every conforming platform. Bounded integers use Lemire's multiply-and-reject
// method rather than std::uniform_int_distribution, whose algorithm is
// implementation-defined.
class RandomStream {
public:
    static constexpr std::string_view kGenerator =
        "mt19937_64 seeded by seed_seq{seed_lo,seed_hi,stream_lo,stream_hi}; "
        "Lemire bounded rejection";

    RandomStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream_id),
                          static_cast<std::uint32_t>(stream_id >> 32)};
        engine_.seed(seq);
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }
    std::uint64_t position() const noexcept { return position_; }

    std::uint64_t next() {
        ++position_;
        return engine_();
    }

    // Uniform on [0, bound). bound must be positive.
    std::uint64_t uniform_below(std::uint64_t bound) {
        unsigned __int128 product = static_cast<unsigned __int128>(next()) * bound;
        auto low = static_cast<std::uint64_t>(product);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                product = static_cast<unsigned __int128>(next()) * bound;
                low = static_cast<std::uint64_t>(product);
            }
        }
        return static_cast<std::uint64_t>(product >> 64);
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t position_ = 0;
    std::mt19937_64 engine_;
};

// Step one of the two-step experiment: every image drawn independently and
// uniformly, so each of the n^n mappings has probability n^-n.
inline Mapping sample_mapping(std::size_t n, RandomStream& rs) {
    if (n == 0) throw InvalidSize("sample_mapping: n must be positive");
    std::vector<Vertex> images(n);
    for (auto& image : images) image = static_cast<Vertex>(rs.uniform_below(n));
    return Mapping(std::move(images));
}

// Uniform vertex, 0-indexed.
inline Vertex sample_vertex(std::size_t n, RandomStream& rs) {
    if (n == 0) throw InvalidSize("sample_vertex: n must be positive");
    return static_cast<Vertex>(rs.uniform_below(n));
}

// Uniform unordered pair {u, v}, u < v, 0-indexed.
inline std::pair<Vertex, Vertex> sample_vertex_pair(std::size_t n, RandomStream& rs) {
    if (n < 2) throw InvalidSize("sample_vertex_pair: n must be at least 2");
    auto u = static_cast<Vertex>(rs.uniform_below(n));
    auto v = static_cast<Vertex>(rs.uniform_below(n - 1));
    if (v >= u) ++v;
    return u < v ? std::pair{u, v} : std::pair{v, u};
}

} // namespace mapstat
