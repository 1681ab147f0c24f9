#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace ahr {

using NodeId = uint32_t;
using EdgeId = uint32_t;
constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

constexpr int kMaxNuance = 4;
using Nuance = std::array<uint64_t, kMaxNuance>;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};
// build invariant broken: a bug, not bad input
struct InvariantError : std::logic_error {
    using std::logic_error::logic_error;
};

struct Coord {
    double x = 0;
    double y = 0;
    bool operator==(const Coord&) const = default;
};

// Length first, then nuance components lexicographically. Unused nuance
// components are zero, so comparing all four is the same as comparing k.
struct PathWeight {
    double length = 0;
    Nuance nuance{};
    uint8_t k = 0;

    static PathWeight infinity() {
        PathWeight w;
        w.length = std::numeric_limits<double>::infinity();
        return w;
    }
    bool is_infinite() const { return std::isinf(length); }

    PathWeight& operator+=(const PathWeight& o) {
        length += o.length;
        for (int c = 0; c < kMaxNuance; ++c) nuance[c] += o.nuance[c];
        if (o.k > k) k = o.k;
        return *this;
    }
    friend PathWeight operator+(PathWeight a, const PathWeight& b) { return a += b; }

    friend bool operator<(const PathWeight& a, const PathWeight& b) {
        if (a.length != b.length) return a.length < b.length;
        return a.nuance < b.nuance;
    }
    friend bool operator>(const PathWeight& a, const PathWeight& b) { return b < a; }
    friend bool operator<=(const PathWeight& a, const PathWeight& b) { return !(b < a); }
    friend bool operator>=(const PathWeight& a, const PathWeight& b) { return !(a < b); }
    friend bool operator==(const PathWeight& a, const PathWeight& b) {
        return a.length == b.length && a.nuance == b.nuance;
    }
    friend bool operator!=(const PathWeight& a, const PathWeight& b) { return !(a == b); }
};

std::string to_string(const PathWeight& w);

// Unbiased bounded draw; std::uniform_int_distribution is implementation
// defined, which would break byte-identical snapshots across toolchains.
inline uint64_t draw_below(std::mt19937_64& rng, uint64_t bound) {
    if (bound <= 1) return 0;
    uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % bound;
    uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % bound;
}

inline double draw_unit(std::mt19937_64& rng) {
    return double(rng() >> 11) * (1.0 / 9007199254740992.0);
}

constexpr uint64_t kDefaultSeed = 20130826;

}  // namespace ahr
