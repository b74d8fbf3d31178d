#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpg {

// Row/column index of a composed matrix. Component orders are small, but
// their product grows multiplicatively with the number of components, so a
// plain 64-bit index overflows long before the reachable part does.
using BigIndex = unsigned __int128;

inline std::string to_decimal(BigIndex v) {
    if (v == 0) return "0";
    std::string digits;
    while (v != 0) {
        digits.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
        v /= 10;
    }
    return {digits.rbegin(), digits.rend()};
}

struct BigIndexHash {
    std::size_t operator()(BigIndex v) const noexcept {
        const auto lo = static_cast<std::uint64_t>(v);
        const auto hi = static_cast<std::uint64_t>(v >> 64);
        std::uint64_t x = lo ^ (hi + 0x9e3779b97f4a7c15ULL + (lo << 6) + (lo >> 2));
        x ^= x >> 33;
        x *= 0xff51afd7ed558ccdULL;
        x ^= x >> 33;
        return static_cast<std::size_t>(x);
    }
};

// Multiplies two indices, refusing to wrap around. Composition of matrices
// whose order product exceeds 128 bits is not representable here.
inline BigIndex checked_index_mul(BigIndex a, BigIndex b) {
    if (a != 0 && b > std::numeric_limits<BigIndex>::max() / a) {
        throw std::overflow_error("composed matrix order exceeds the 128-bit index range");
    }
    return a * b;
}

// Unsigned arbitrary-precision counter. Only what statistics reporting
// needs: multiply by a machine word and exact decimal rendering.
class BigCount {
public:
    BigCount() : limbs_{0} {}
    explicit BigCount(std::uint64_t v) {
        limbs_.push_back(static_cast<std::uint32_t>(v % kBase));
        if (v >= kBase) limbs_.push_back(static_cast<std::uint32_t>(v / kBase));
    }

    BigCount& operator*=(std::uint64_t factor) {
        std::uint64_t carry = 0;
        for (auto& limb : limbs_) {
            const std::uint64_t cur = static_cast<std::uint64_t>(limb) * factor + carry;
            limb = static_cast<std::uint32_t>(cur % kBase);
            carry = cur / kBase;
        }
        while (carry != 0) {
            limbs_.push_back(static_cast<std::uint32_t>(carry % kBase));
            carry /= kBase;
        }
        return *this;
    }

    bool operator==(const BigCount& other) const = default;

    std::string str() const {
        std::string out = std::to_string(limbs_.back());
        for (auto it = limbs_.rbegin() + 1; it != limbs_.rend(); ++it) {
            std::string part = std::to_string(*it);
            out += std::string(9 - part.size(), '0') + part;
        }
        return out;
    }

    // Exact only while the value fits; callers guard with fits_u64().
    bool fits_u64() const {
        if (limbs_.size() > 3) return false;
        BigIndex v = 0;
        for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it) v = v * kBase + *it;
        return v <= std::numeric_limits<std::uint64_t>::max();
    }

    std::uint64_t as_u64() const {
        std::uint64_t v = 0;
        for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it)
            v = v * kBase + *it;
        return v;
    }

private:
    static constexpr std::uint64_t kBase = 1'000'000'000;
    std::vector<std::uint32_t> limbs_;  // little-endian, base 1e9
};

}  // namespace cpg
