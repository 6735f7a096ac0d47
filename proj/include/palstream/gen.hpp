#pragma once

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "palstream/fingerprint.hpp"
#include "palstream/oracle.hpp"

namespace palstream {
namespace gen {

/// Seed-reproducible i.i.d. uniform stream over symbols 1..sigma.
inline std::vector<Symbol> gen_random(u64 n, u64 sigma, u64 seed) {
    if (n < 1) throw std::invalid_argument("gen_random: n must be >= 1");
    if (sigma < 2) throw std::invalid_argument("gen_random: alphabet size must be >= 2");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Symbol> dist(1, Symbol(sigma));
    std::vector<Symbol> out(n);
    for (auto& s : out) s = dist(rng);
    return out;
}

inline std::vector<Symbol> gen_unary(u64 n, Symbol sym = 1) {
    if (n < 1) throw std::invalid_argument("gen_unary: n must be >= 1");
    check_symbol(sym);
    return std::vector<Symbol>(n, sym);
}

struct RunInstance {
    std::vector<Symbol> stream;
    u64 m1 = 0;      // first run midpoint (1-based)
    u64 d = 0;       // midpoint gap == |w|
    u64 h = 0;       // member count
    u64 l_star = 0;  // floor(sqrt(n)) of the final stream
};

/// Embed an alternating (w w^R)* block core in palindrome-free padding so
/// that exactly h equally spaced midpoints carry arms >= floor(sqrt(n)).
/// w must not be self-degenerate (e.g. unary w of length > 1 collapses the
/// gap); callers pass primitive words like "ab". pad is a minimum per-side
/// padding length and may be nudged upward to reach a consistent sizing.
inline RunInstance gen_run(const std::vector<Symbol>& w, u64 h, u64 pad, u64 seed) {
    if (w.empty()) throw std::invalid_argument("gen_run: |w| >= 1 required");
    if (h < 3) throw std::invalid_argument("gen_run: h >= 3 required");
    const u64 d = w.size();
    std::mt19937_64 rng(seed);

    for (u64 pad_try = pad;; ++pad_try) {
        // fixpoint: band width q depends on l* = isqrt(n), n depends on block count
        u64 q = 1;
        bool converged = false;
        u64 b = 0, n = 0, l_star = 0;
        for (int iter = 0; iter < 64; ++iter) {
            b = h + 2 * q - 1;
            n = b * d + 2 * pad_try;
            l_star = u64(std::sqrt(double(n)));
            while ((l_star + 1) * (l_star + 1) <= n) ++l_star;
            while (l_star * l_star > n) --l_star;
            u64 q2 = std::max<u64>(1, (l_star + d - 1) / d);
            if (q2 == q) { converged = true; break; }
            q = q2;
        }
        if (!converged) continue;
        if (2 * d > l_star) throw std::invalid_argument("gen_run: |w| exceeds floor(sqrt(n))/2 gap bound");

        // disjoint padding alphabet above w's symbols
        Symbol wmax = *std::max_element(w.begin(), w.end());
        std::uniform_int_distribution<Symbol> pdist(wmax + 1, wmax + 16);

        for (int attempt = 0; attempt < 200; ++attempt) {
            std::vector<Symbol> s;
            s.reserve(n);
            for (u64 i = 0; i < pad_try; ++i) s.push_back(pdist(rng));
            for (u64 t = 1; t <= b; ++t) {
                if (t % 2 == 1)
                    s.insert(s.end(), w.begin(), w.end());
                else
                    s.insert(s.end(), w.rbegin(), w.rend());
            }
            for (u64 i = 0; i < pad_try; ++i) s.push_back(pdist(rng));

            // accept iff the l*-palindrome midpoints are exactly the intended band
            auto prof = oracle::all_arms(s);
            u64 off = pad_try;
            bool ok = true;
            std::vector<u64> expected;
            for (u64 t = q; t + q <= b; ++t) expected.push_back(off + t * d);
            std::size_t ei = 0;
            for (u64 m = 1; m <= prof.arms.size() && ok; ++m) {
                bool is_long = prof.arms[m - 1] >= l_star;
                bool should = ei < expected.size() && expected[ei] == m;
                if (is_long != should) ok = false;
                if (should) ++ei;
            }
            if (ok && ei == expected.size()) {
                RunInstance out;
                out.stream = std::move(s);
                out.m1 = off + q * d;
                out.d = d;
                out.h = h;
                out.l_star = l_star;
                return out;
            }
        }
    }
}

/// Hard-instance family for the additive-error space lower bound: 2m free
/// payload symbols in ramp-delimited slots around a ramp pair at the center.
/// Every mirror-matched payload pair (a_j, a_{2m+1-j}), taken inward-out,
/// extends the central palindrome by exactly 2*e_r symbols of full length, so
/// a fully mirrored assignment yields full length (m+1)*2*e_r and breaking
/// the mirror at slot j yields (m-j+1)*2*e_r.
inline std::vector<Symbol> gen_lower_bound(u64 m, u64 e_r, const std::vector<u64>& assignments) {
    if (e_r < 1) throw std::invalid_argument("gen_lower_bound: e_r >= 1 required");
    if (m < 1) throw std::invalid_argument("gen_lower_bound: m >= 1 required");
    if (assignments.size() != 2 * m)
        throw std::invalid_argument("gen_lower_bound: need exactly 2m assignments");
    for (u64 a : assignments)
        if (a < 1) throw std::invalid_argument("gen_lower_bound: assignments must be positive");

    const u64 e = e_r;
    std::vector<Symbol> s;
    s.reserve(2 * e * (m + 1));
    auto payload = [&](u64 j) { return Symbol(e + assignments[j - 1]); };  // disjoint from ramp 1..e
    for (u64 j = 1; j <= m; ++j) {                 // first half: ramp then payload
        for (u64 t = 1; t + 1 <= e; ++t) s.push_back(Symbol(t));
        s.push_back(payload(j));
    }
    for (u64 t = 1; t <= e; ++t) s.push_back(Symbol(t));   // center ramp up
    for (u64 t = e; t >= 1; --t) s.push_back(Symbol(t));   // center ramp down
    for (u64 j = m + 1; j <= 2 * m; ++j) {         // second half: payload then reversed ramp
        s.push_back(payload(j));
        for (u64 t = e; t >= 2; --t) s.push_back(Symbol(t - 1));
    }
    if (s.size() != 2 * e * (m + 1))
        throw std::logic_error("gen_lower_bound: length mismatch");
    return s;
}

/// Canonical mirrored assignment (1, 2, ..., m, m, ..., 2, 1).
inline std::vector<u64> mirrored_assignments(u64 m) {
    std::vector<u64> a(2 * m);
    for (u64 j = 1; j <= m; ++j) {
        a[j - 1] = j;
        a[2 * m - j] = j;
    }
    return a;
}

}  // namespace gen
}  // namespace palstream
