#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "palstream/fingerprint.hpp"

namespace palstream {

/// Ring buffer over the last `capacity` stream symbols with 1-based absolute
/// indexing. After push(i-th symbol), S[k] is accessible iff
/// abs_start() <= k <= last_index().
class Window {
public:
    explicit Window(u64 capacity) : cap_(capacity), buf_(capacity) {
        if (capacity < 1) throw std::invalid_argument("Window: capacity must be >= 1");
    }

    /// Push the next symbol; returns the evicted oldest symbol once full.
    std::optional<Symbol> push(Symbol s) {
        std::optional<Symbol> evicted;
        if (count_ == cap_) evicted = buf_[head_];
        buf_[head_] = s;
        head_ = (head_ + 1) % cap_;
        if (count_ < cap_) ++count_;
        ++last_;
        return evicted;
    }

    u64 capacity() const { return cap_; }
    u64 size() const { return count_; }
    u64 last_index() const { return last_; }
    u64 abs_start() const { return last_ - count_ + 1; }

    bool contains(u64 k) const { return k >= abs_start() && k <= last_ && k >= 1; }

    Symbol at(u64 k) const {
        if (!contains(k)) throw std::out_of_range("Window: index outside retained range");
        u64 back = last_ - k;  // 0 == newest
        u64 idx = (head_ + cap_ - 1 - back) % cap_;
        return buf_[idx];
    }

private:
    u64 cap_;
    std::vector<Symbol> buf_;
    u64 head_ = 0;
    u64 count_ = 0;
    u64 last_ = 0;
};

/// Sliding record of the prefix fingerprints (F^F(1,t), F^R(1,t), r^{-t}) for
/// the last `capacity` positions t, including t = current index. Any
/// substring fingerprint whose endpoints fall in the retained span is then a
/// couple of multiplications away.
class PrefixRing {
public:
    struct Slot {
        u64 fwd = 0;
        u64 rev = 0;
        u64 r_inv_pow = 1;
    };

    PrefixRing(u64 capacity, const FpContext& ctx) : cap_(capacity + 1), ctx_(&ctx), buf_(cap_) {
        // slot for position 0 (empty prefix) starts resident
        buf_[0] = Slot{0, 0, 1};
        count_ = 1;
        head_ = 1;
    }

    /// Record prefix state at position mp.i (call right after extend_master).
    void push(const MasterPair& mp) { push_raw(mp.fwd.value, mp.rev.value, mp.r_inv_pow_i, mp.i); }

    void push_raw(u64 fwd, u64 rev, u64 r_inv_pow, u64 i) {
        buf_[head_] = Slot{fwd, rev, r_inv_pow};
        head_ = (head_ + 1) % cap_;
        if (count_ < cap_) ++count_;
        last_ = i;
    }

    u64 last_index() const { return last_; }
    u64 min_index() const { return last_ + 1 >= count_ ? last_ + 1 - count_ : 0; }
    bool contains(u64 t) const { return t >= min_index() && t <= last_; }

    const Slot& slot(u64 t) const {
        if (!contains(t)) throw std::out_of_range("PrefixRing: position outside retained span");
        u64 back = last_ - t;
        u64 idx = (head_ + cap_ - 1 - back) % cap_;
        return buf_[idx];
    }

    /// F^F(a+1, b): forward fingerprint of S[a+1, b], both endpoints retained.
    Fp fwd_sub(u64 a, u64 b) const {
        const Slot& sa = slot(a);
        const Slot& sb = slot(b);
        return Fp{ctx_->mul(ctx_->sub(sb.fwd, sa.fwd), sa.r_inv_pow), b - a};
    }

    /// F^R(a+1, b): reverse fingerprint of S[a+1, b]. The exponent b-a is
    /// window-bounded, served from a small precomputed table.
    Fp rev_sub(u64 a, u64 b) const {
        const Slot& sa = slot(a);
        const Slot& sb = slot(b);
        return Fp{ctx_->sub(sb.rev, ctx_->mul(rpow_small(b - a), sa.rev)), b - a};
    }

private:
    u64 rpow_small(u64 e) const {
        if (rpow_.empty()) {
            rpow_.resize(cap_ + 1);
            rpow_[0] = 1;
            for (u64 i = 1; i <= cap_; ++i) rpow_[i] = ctx_->mul(rpow_[i - 1], ctx_->r());
        }
        return e < rpow_.size() ? rpow_[e] : ctx_->pow_r(e);
    }

    u64 cap_;
    const FpContext* ctx_;
    std::vector<Slot> buf_;
    mutable std::vector<u64> rpow_;
    u64 head_ = 0;
    u64 count_ = 0;
    u64 last_ = 0;
};

}  // namespace palstream
