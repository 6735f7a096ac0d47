#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "palstream/fingerprint.hpp"

namespace palstream {
namespace oracle {

/// Exact arm lengths for every even-parity midpoint. arms[m-1] holds l(m) for
/// the gap after position m, m in 1..n-1, so arms.size() == n-1.
struct ArmProfile {
    std::size_t n = 0;
    std::vector<u64> arms;

    u64 arm(u64 m) const {
        if (m < 1 || m > arms.size()) throw std::out_of_range("ArmProfile: midpoint out of range");
        return arms[m - 1];
    }
};

/// Even-parity Manacher in O(n): arm(m) is the largest l with
/// s[m-i+1] == s[m+i] for all i <= l (1-based).
inline ArmProfile all_arms(std::span<const Symbol> s) {
    const std::size_t n = s.size();
    if (n < 1) throw std::invalid_argument("all_arms: empty input");
    ArmProfile out;
    out.n = n;
    if (n == 1) return out;
    out.arms.assign(n - 1, 0);
    // arms over gap g (0-based, between s[g] and s[g+1])
    std::size_t center = 0, right = 0;  // palindrome [center-k, center+k) ... tracked via gap indices
    for (std::size_t g = 0; g + 1 < n; ++g) {
        std::size_t k = 0;
        if (g < right) {
            std::size_t mirror = 2 * center - g;  // center - (g - center)
            k = std::min<std::size_t>(out.arms[mirror], right - g);
        }
        while (k <= g && g + 1 + k < n && s[g - k] == s[g + 1 + k]) ++k;
        out.arms[g] = k;
        if (g + k > right) {
            center = g;
            right = g + k;
        }
    }
    return out;
}

/// Quadratic independent verifier: direct outward expansion at one midpoint.
inline u64 naive_arm(std::span<const Symbol> s, u64 m) {
    const u64 n = s.size();
    if (m < 1 || m >= n) throw std::out_of_range("naive_arm: midpoint out of range");
    u64 l = 0;
    while (l + 1 <= m && m + l + 1 <= n && s[m - l - 1] == s[m + l]) ++l;
    return l;
}

/// Complementary-arm expansion: s[m-i+1] == f(s[m+i]) with an involution f.
template <typename MapFn>
inline u64 naive_complementary_arm(std::span<const Symbol> s, u64 m, MapFn&& f) {
    const u64 n = s.size();
    if (m < 1 || m >= n) throw std::out_of_range("naive_complementary_arm: midpoint out of range");
    u64 l = 0;
    while (l + 1 <= m && m + l + 1 <= n && s[m - l - 1] == f(s[m + l])) ++l;
    return l;
}

/// Odd-parity naive arm around character center c: largest a with
/// s[c-i] == s[c+i] for all i <= a. Full odd length is 2a+1.
inline u64 naive_odd_arm(std::span<const Symbol> s, u64 c) {
    const u64 n = s.size();
    if (c < 1 || c > n) throw std::out_of_range("naive_odd_arm: center out of range");
    u64 a = 0;
    while (a + 1 < c && c + a + 1 <= n && s[c - a - 2] == s[c + a]) ++a;
    return a;
}

struct LongestSet {
    u64 l_max = 0;
    std::vector<u64> midpoints;  // ascending; empty when l_max == 0
};

/// All midpoints attaining the maximal arm. When no even palindrome exists
/// (l_max == 0) the midpoint list is empty rather than every gap.
inline LongestSet longest_set(std::span<const Symbol> s) {
    if (s.size() < 2) throw std::invalid_argument("longest_set: need |s| >= 2");
    ArmProfile prof = all_arms(s);
    LongestSet out;
    out.l_max = *std::max_element(prof.arms.begin(), prof.arms.end());
    if (out.l_max == 0) return out;
    for (u64 m = 1; m <= prof.arms.size(); ++m)
        if (prof.arms[m - 1] == out.l_max) out.midpoints.push_back(m);
    return out;
}

inline ArmProfile all_arms(const std::vector<Symbol>& s) { return all_arms(std::span<const Symbol>(s)); }
inline u64 naive_arm(const std::vector<Symbol>& s, u64 m) { return naive_arm(std::span<const Symbol>(s), m); }
inline LongestSet longest_set(const std::vector<Symbol>& s) { return longest_set(std::span<const Symbol>(s)); }

}  // namespace oracle
}  // namespace palstream
