#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace palstream {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Stream symbol. Must be a positive integer wherever it is fingerprinted;
/// byte inputs are mapped to value+1 at the ingestion layer.
using Symbol = std::uint32_t;

/// A polynomial fingerprint value together with the length of the string it
/// was taken over. The pair is what makes the concat/split algebra total:
/// the length decides the power of r used to shift the other operand.
struct Fp {
    u64 value = 0;
    u64 len = 0;

    friend bool operator==(const Fp&, const Fp&) = default;
};

enum class PrimePolicy {
    mersenne61,  // fixed p = 2^61 - 1, fast 128-bit reduction
    strict,      // random prime in [n^4, n^5], n <= 2^12
};

namespace detail {

inline constexpr u64 kMersenne61 = (u64(1) << 61) - 1;

inline u64 mulmod_m61(u64 a, u64 b) {
    u128 t = u128(a) * b;
    // value < 2^122, two-step Mersenne fold
    u64 lo = u64(t & kMersenne61);
    u64 hi = u64(t >> 61);
    u64 s = lo + hi;
    if (s >= kMersenne61) s -= kMersenne61;
    return s;
}

inline u64 mulmod_generic(u64 a, u64 b, u64 p) {
    return u64(u128(a) * b % p);
}

inline u64 powmod(u64 base, u64 exp, u64 p) {
    u64 acc = 1;
    base %= p;
    while (exp > 0) {
        if (exp & 1) acc = mulmod_generic(acc, base, p);
        base = mulmod_generic(base, base, p);
        exp >>= 1;
    }
    return acc;
}

inline bool miller_rabin(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_generic(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

}  // namespace detail

/// Modulus + base shared by every fingerprint taken over one stream.
/// Immutable after construction; safe to share across threads.
class FpContext {
public:
    /// Seeded context. The default policy uses p = 2^61 - 1 with r drawn
    /// uniformly from [1, p-1]. The strict policy samples a random prime in
    /// [n^4, n^5] (requires n_hint <= 4096 so that n^5 fits 64 bits).
    FpContext(u64 seed, u64 n_hint, PrimePolicy policy = PrimePolicy::mersenne61) : policy_(policy) {
        if (n_hint < 1) throw std::invalid_argument("FpContext: n_hint must be >= 1");
        std::mt19937_64 rng(seed);
        if (policy == PrimePolicy::mersenne61) {
            p_ = detail::kMersenne61;
        } else {
            if (n_hint > 4096) throw std::invalid_argument("FpContext: strict policy requires n_hint <= 4096");
            u64 lo = n_hint * n_hint;
            lo = lo * lo;                 // n^4
            u64 hi = lo * n_hint;        // n^5
            if (lo < 5) lo = 5;
            std::uniform_int_distribution<u64> dist(lo, hi);
            for (;;) {
                u64 cand = dist(rng) | 1;
                if (cand >= lo && cand <= hi && detail::miller_rabin(cand)) { p_ = cand; break; }
            }
        }
        std::uniform_int_distribution<u64> rdist(1, p_ - 1);
        r_ = rdist(rng);
        r_inv_ = pow_r_exact(p_ - 2);
    }

    /// Fixed (p, r) constructor for worked examples and tests.
    static FpContext with_params(u64 p, u64 r) {
        FpContext ctx;
        ctx.p_ = p;
        ctx.r_ = r % p;
        ctx.policy_ = PrimePolicy::strict;
        ctx.r_inv_ = ctx.pow_r_exact(p - 2);
        return ctx;
    }

    u64 p() const { return p_; }
    u64 r() const { return r_; }
    u64 r_inv() const { return r_inv_; }
    PrimePolicy policy() const { return policy_; }

    u64 mul(u64 a, u64 b) const {
        return p_ == detail::kMersenne61 ? detail::mulmod_m61(a, b) : detail::mulmod_generic(a, b, p_);
    }
    u64 add(u64 a, u64 b) const {
        u64 s = a + b;  // both < p <= 2^61-1, no overflow
        return s >= p_ ? s - p_ : s;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p_ - b; }

    u64 pow_r(u64 e) const { return detail::powmod(r_, e, p_); }
    u64 pow_r_inv(u64 e) const { return detail::powmod(r_inv_, e, p_); }

private:
    FpContext() = default;
    u64 pow_r_exact(u64 e) const { return detail::powmod(r_, e, p_); }

    u64 p_ = 0;
    u64 r_ = 0;
    u64 r_inv_ = 0;
    PrimePolicy policy_ = PrimePolicy::mersenne61;
};

inline void check_symbol(Symbol s) {
    if (s == 0) throw std::invalid_argument("fingerprint: symbols must be positive integers");
}

/// Forward fingerprint: sum of s[i] * r^i over 1-based i.
inline Fp fp_forward(std::span<const Symbol> s, const FpContext& ctx) {
    Fp f;
    u64 rp = 1;
    for (Symbol sym : s) {
        check_symbol(sym);
        rp = ctx.mul(rp, ctx.r());
        f.value = ctx.add(f.value, ctx.mul(sym % ctx.p(), rp));
    }
    f.len = s.size();
    return f;
}

/// Reverse fingerprint: sum of s[i] * r^(l-i+1); equals fp_forward of the
/// reversed string.
inline Fp fp_reverse(std::span<const Symbol> s, const FpContext& ctx) {
    Fp f;
    u64 rp = 1;
    for (std::size_t k = s.size(); k-- > 0;) {
        check_symbol(s[k]);
        rp = ctx.mul(rp, ctx.r());
        f.value = ctx.add(f.value, ctx.mul(s[k] % ctx.p(), rp));
    }
    f.len = s.size();
    return f;
}

inline Fp fp_forward(const std::vector<Symbol>& s, const FpContext& ctx) {
    return fp_forward(std::span<const Symbol>(s), ctx);
}
inline Fp fp_reverse(const std::vector<Symbol>& s, const FpContext& ctx) {
    return fp_reverse(std::span<const Symbol>(s), ctx);
}

/// Running prefix fingerprints F^F(1,i), F^R(1,i) plus the r powers needed to
/// extend them in O(1) per symbol.
struct MasterPair {
    Fp fwd;
    Fp rev;
    u64 i = 0;
    u64 r_pow_i = 1;      // r^i
    u64 r_inv_pow_i = 1;  // r^{-i}
};

/// Append one symbol: fwd gains sym*r^{i+1}, rev becomes rev*r + sym*r.
inline MasterPair extend_master(const MasterPair& mp, Symbol sym, const FpContext& ctx) {
    check_symbol(sym);
    MasterPair out = mp;
    out.i = mp.i + 1;
    out.r_pow_i = ctx.mul(mp.r_pow_i, ctx.r());
    out.r_inv_pow_i = ctx.mul(mp.r_inv_pow_i, ctx.r_inv());
    u64 v = sym % ctx.p();
    out.fwd.value = ctx.add(mp.fwd.value, ctx.mul(v, out.r_pow_i));
    out.fwd.len = out.i;
    out.rev.value = ctx.add(ctx.mul(mp.rev.value, ctx.r()), ctx.mul(v, ctx.r()));
    out.rev.len = out.i;
    return out;
}

/// F^F(i,j) from the prefix fingerprints ending at j and i-1.
inline Fp sub_forward(const Fp& master_j, const Fp& master_i1, u64 i, const FpContext& ctx) {
    if (i < 1 || i > master_j.len + 1 || master_i1.len != i - 1)
        throw std::invalid_argument("sub_forward: index order violation");
    Fp out;
    out.value = ctx.mul(ctx.sub(master_j.value, master_i1.value), ctx.pow_r_inv(i - 1));
    out.len = master_j.len - (i - 1);
    return out;
}

/// F^R(i,j) from the reverse prefix fingerprints ending at j and i-1.
inline Fp sub_reverse(const Fp& master_j, const Fp& master_i1, u64 i, u64 j, const FpContext& ctx) {
    if (i < 1 || i > j + 1 || master_j.len != j || master_i1.len != i - 1)
        throw std::invalid_argument("sub_reverse: index order violation");
    Fp out;
    out.value = ctx.sub(master_j.value, ctx.mul(ctx.pow_r(j - i + 1), master_i1.value));
    out.len = j - (i - 1);
    return out;
}

/// F^F(i,j) = F^F(i,k) + r^{k-i+1} * F^F(k+1,j).
inline Fp concat_forward(const Fp& left, const Fp& right, const FpContext& ctx) {
    Fp out;
    out.value = ctx.add(left.value, ctx.mul(ctx.pow_r(left.len), right.value));
    out.len = left.len + right.len;
    return out;
}

/// Reverse-fingerprint concatenation: phi^R(a b) = r^{|b|} * phi^R(a) + phi^R(b).
inline Fp concat_reverse(const Fp& left, const Fp& right, const FpContext& ctx) {
    Fp out;
    out.value = ctx.add(ctx.mul(ctx.pow_r(right.len), left.value), right.value);
    out.len = left.len + right.len;
    return out;
}

/// Inverse of concat_forward on the right operand.
inline Fp split_right(const Fp& whole, const Fp& left, const FpContext& ctx) {
    if (left.len > whole.len) throw std::invalid_argument("split_right: length underflow");
    Fp out;
    out.value = ctx.mul(ctx.sub(whole.value, left.value), ctx.pow_r_inv(left.len));
    out.len = whole.len - left.len;
    return out;
}

/// Inverse of concat_forward on the left operand.
inline Fp split_left(const Fp& whole, const Fp& right, const FpContext& ctx) {
    if (right.len > whole.len) throw std::invalid_argument("split_left: length underflow");
    Fp out;
    out.value = ctx.sub(whole.value, ctx.mul(ctx.pow_r(whole.len - right.len), right.value));
    out.len = whole.len - right.len;
    return out;
}

}  // namespace palstream
