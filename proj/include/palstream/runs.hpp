#pragma once

#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "palstream/fingerprint.hpp"

namespace palstream {

/// Explicit palindrome record: midpoint, current estimate, and the prefix
/// fingerprints up to the midpoint.
struct RsEntry {
    u64 m = 0;
    u64 est = 0;
    Fp fwd;  // F^F(1,m)
    Fp rev;  // F^R(1,m)
};

/// Open run of >= 3 equally spaced overlapping palindromes. Stores the first
/// midpoint's record plus the period word's fingerprints; member midpoints
/// and their estimates are reconstructed arithmetically.
struct RnfEntry {
    u64 m1 = 0;
    u64 d = 0;  // common midpoint gap
    u64 h = 0;  // member count, >= 3
    u64 est1 = 0;
    Fp fwd1, rev1;  // F^F/F^R(1, m1)
    Fp fwdw, revw;  // F^F/F^R(m1+1, m1+d), the period word w

    u64 last_midpoint() const { return m1 + (h - 1) * d; }
    u64 next_expected() const { return m1 + h * d; }
};

/// Finalized run: an RnfEntry plus estimates at the one or two middle
/// midpoints and the last midpoint.
struct RfEntry {
    RnfEntry run;
    u64 estMidFloor = 0;
    u64 estMidCeil = 0;
    u64 estLast = 0;
};

inline u64 midpoint_at(const RnfEntry& run, u64 j) {
    if (j < 1 || j > run.h) throw std::out_of_range("midpoint_at: j out of range");
    return run.m1 + (j - 1) * run.d;
}

/// Indices of the one or two central midpoints (floor/ceil of (h+1)/2);
/// equal when h is odd.
inline std::pair<u64, u64> middle_indices(u64 h) {
    return {(h + 1) / 2, (h + 2) / 2};
}

inline std::pair<u64, u64> middle_midpoints(const RnfEntry& run) {
    auto [jf, jc] = middle_indices(run.h);
    return {midpoint_at(run, jf), midpoint_at(run, jc)};
}

/// Extend an open run by one midpoint iff it continues the arithmetic
/// progression.
inline bool try_append(RnfEntry& run, u64 m) {
    if (m != run.next_expected()) return false;
    ++run.h;
    return true;
}

/// Fuse three equally spaced explicit entries into an open run. The period
/// word's fingerprints are recovered from the first two members' prefix
/// fingerprints via the split identities.
inline RnfEntry form_run(const RsEntry& e1, const RsEntry& e2, const RsEntry& e3, const FpContext& ctx) {
    if (e2.m <= e1.m || e3.m <= e2.m || e2.m - e1.m != e3.m - e2.m)
        throw std::invalid_argument("form_run: midpoints not equally spaced");
    RnfEntry run;
    run.m1 = e1.m;
    run.d = e2.m - e1.m;
    run.h = 3;
    run.est1 = e1.est;
    run.fwd1 = e1.fwd;
    run.rev1 = e1.rev;
    run.fwdw = split_right(e2.fwd, e1.fwd, ctx);                       // F^F(m1+1, m2)
    run.revw = sub_reverse(e2.rev, e1.rev, e1.m + 1, e2.m, ctx);       // F^R(m1+1, m2)
    return run;
}

inline RfEntry finalize_run(const RnfEntry& run, u64 estMidFloor, u64 estMidCeil, u64 estLast) {
    auto [jf, jc] = middle_indices(run.h);
    if (jf == jc && estMidFloor != estMidCeil)
        throw std::invalid_argument("finalize_run: odd h requires equal middle estimates");
    return RfEntry{run, estMidFloor, estMidCeil, estLast};
}

/// Estimate of member j per the run length pattern: anchored at m1 for the
/// first half, at m_h for the second half, stored verbatim in the middle.
inline u64 estimate_at(const RfEntry& rf, u64 j) {
    const RnfEntry& run = rf.run;
    if (j < 1 || j > run.h) throw std::out_of_range("estimate_at: j out of range");
    auto [jf, jc] = middle_indices(run.h);
    if (j == jf) return rf.estMidFloor;
    if (j == jc) return rf.estMidCeil;
    if (j < jf) return run.est1 + (j - 1) * run.d;
    return rf.estLast + (run.h - j) * run.d;
}

/// First-half estimate for an open run (middle and last are unknown until
/// finalization).
inline u64 estimate_at(const RnfEntry& run, u64 j) {
    if (j < 1 || j > run.h) throw std::out_of_range("estimate_at: j out of range");
    if (2 * j >= run.h + 1) throw std::invalid_argument("estimate_at: open run holds only first-half estimates");
    return run.est1 + (j - 1) * run.d;
}

namespace detail {

/// Walk the (w w^R)* block structure, yielding prefix fingerprints at every
/// member midpoint in one linear pass.
template <typename Visit>
inline void walk_run_prefixes(const RnfEntry& run, const FpContext& ctx, Visit&& visit) {
    Fp fwd = run.fwd1;
    Fp rev = run.rev1;
    visit(u64(1), fwd, rev);
    for (u64 j = 2; j <= run.h; ++j) {
        bool odd_block = ((j - 2) % 2) == 0;  // blocks alternate w, w^R starting with w
        const Fp& bf = odd_block ? run.fwdw : run.revw;  // phi^F of block
        const Fp& br = odd_block ? run.revw : run.fwdw;  // phi^R of block
        fwd = concat_forward(fwd, bf, ctx);
        rev = concat_reverse(rev, br, ctx);
        visit(j, fwd, rev);
    }
}

}  // namespace detail

/// Lossless decompression: the h explicit entries the run stands for.
inline std::vector<RsEntry> decompress(const RfEntry& rf, const FpContext& ctx) {
    std::vector<RsEntry> out;
    out.reserve(rf.run.h);
    detail::walk_run_prefixes(rf.run, ctx, [&](u64 j, const Fp& fwd, const Fp& rev) {
        out.push_back(RsEntry{midpoint_at(rf.run, j), estimate_at(rf, j), fwd, rev});
    });
    return out;
}

/// Prefix fingerprints (F^F(1,m_j), F^R(1,m_j)) of one member midpoint.
inline std::pair<Fp, Fp> member_prefix_fps(const RnfEntry& run, u64 j, const FpContext& ctx) {
    if (j < 1 || j > run.h) throw std::out_of_range("member_prefix_fps: j out of range");
    std::pair<Fp, Fp> got;
    detail::walk_run_prefixes(run, ctx, [&](u64 jj, const Fp& fwd, const Fp& rev) {
        if (jj == j) got = {fwd, rev};
    });
    return got;
}

/// Test-facing structural check (Cor. run structure): midpoints equally
/// spaced and S[m1+1, m_h] matches the alternating (w w^R) pattern with
/// w = S[m1+1, m2].
inline bool run_structure_check(std::span<const Symbol> s, const RnfEntry& run, u64 l_star) {
    if (run.h < 3 || run.d < 1) return false;
    if (2 * run.d > l_star) return false;  // gap bound of an l*-run
    u64 mh = run.last_midpoint();
    if (mh > s.size()) return false;
    for (u64 j = 2; j <= run.h; ++j) {
        u64 block_start = run.m1 + (j - 2) * run.d;  // S[block_start+1 .. block_start+d]
        bool odd_block = ((j - 2) % 2) == 0;
        for (u64 t = 1; t <= run.d; ++t) {
            Symbol expect = odd_block ? s[run.m1 + t - 1]                  // w[t]
                                      : s[run.m1 + run.d - t];             // w^R[t]
            if (s[block_start + t - 1] != expect) return false;
        }
    }
    return true;
}

inline std::string dump_entry(const RsEntry& e) {
    std::ostringstream os;
    os << "RS m=" << e.m << " est=" << e.est << " ff=" << e.fwd.value << " fr=" << e.rev.value;
    return os.str();
}

inline std::string dump_entry(const RnfEntry& e) {
    std::ostringstream os;
    os << "RNF m1=" << e.m1 << " d=" << e.d << " h=" << e.h << " est1=" << e.est1;
    return os.str();
}

inline std::string dump_entry(const RfEntry& e) {
    std::ostringstream os;
    os << "RF m1=" << e.run.m1 << " d=" << e.run.d << " h=" << e.run.h << " est1=" << e.run.est1
       << " estMidF=" << e.estMidFloor << " estMidC=" << e.estMidCeil << " estLast=" << e.estLast;
    return os.str();
}

}  // namespace palstream
