#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mapstat/error.hpp"

namespace mapstat {

using Vertex = std::uint32_t;

// A mapping T : [n] -> [n]. Vertices are stored 0-indexed; every external
// format (files, JSON, CLI) is 1-indexed.
class Mapping {
public:
    // Takes 0-indexed images. Throws EmptyMapping / OutOfRange (1-indexed
    // position) on invalid input.
    explicit Mapping(std::vector<Vertex> images) : images_(std::move(images)) {
        if (images_.empty()) throw EmptyMapping();
        const auto n = images_.size();
        for (std::size_t i = 0; i < n; ++i)
            if (images_[i] >= n) throw OutOfRange(i + 1);
    }

    std::size_t size() const noexcept { return images_.size(); }
    Vertex operator()(Vertex v) const noexcept { return images_[v]; }
    std::span<const Vertex> images() const noexcept { return images_; }

    bool operator==(const Mapping&) const = default;

private:
    std::vector<Vertex> images_;
};

// Builds a Mapping from 1-indexed images (the external convention).
inline Mapping validate_mapping(std::span<const std::int64_t> raw) {
    if (raw.empty()) throw EmptyMapping();
    const auto n = static_cast<std::int64_t>(raw.size());
    std::vector<Vertex> images(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] < 1 || raw[i] > n) throw OutOfRange(i + 1);
        images[i] = static_cast<Vertex>(raw[i] - 1);
    }
    return Mapping(std::move(images));
}

inline Mapping validate_mapping(std::initializer_list<std::int64_t> raw) {
    return validate_mapping(std::span<const std::int64_t>(raw.begin(), raw.size()));
}

inline Mapping identity_mapping(std::size_t n) {
    std::vector<Vertex> images(n);
    for (std::size_t i = 0; i < n; ++i) images[i] = static_cast<Vertex>(i);
    return Mapping(std::move(images));
}

} // namespace mapstat
