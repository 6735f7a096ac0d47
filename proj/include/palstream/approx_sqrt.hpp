#pragma once

#include <cmath>
#include <deque>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "palstream/fingerprint.hpp"
#include "palstream/metering.hpp"
#include "palstream/runs.hpp"
#include "palstream/source.hpp"
#include "palstream/window.hpp"

namespace palstream {

inline u64 isqrt(u64 n) {
    u64 r = u64(std::sqrt(double(n)));
    while ((r + 1) * (r + 1) <= n) ++r;
    while (r * r > n) --r;
    return r;
}

enum class SqrtMode { simple, compressed };

struct SqrtConfig {
    u64 n = 0;
    double eps = 1.0;
    SqrtMode mode = SqrtMode::compressed;
    ComplementMap const* complement = nullptr;  // forward masters use f(S[i]) when set
    u64 meter_stride = 0;
};

/// One palindrome report: arm estimate est with the guarantee
/// est <= l(m) < upper_exclusive.
struct SqrtReport {
    u64 m = 0;
    u64 est = 0;
    u64 upper_exclusive = 0;
    bool exact = false;

    friend bool operator==(const SqrtReport&, const SqrtReport&) = default;
};

/// Masters that may diverge between forward (complement-mapped) and reverse
/// symbol streams.
struct StreamMasters {
    u64 i = 0;
    u64 fwd = 0;
    u64 rev = 0;
    u64 r_pow = 1;
    u64 r_inv_pow = 1;

    void extend(Symbol fwd_sym, Symbol rev_sym, const FpContext& ctx) {
        r_pow = ctx.mul(r_pow, ctx.r());
        r_inv_pow = ctx.mul(r_inv_pow, ctx.r_inv());
        fwd = ctx.add(fwd, ctx.mul(fwd_sym % ctx.p(), r_pow));
        rev = ctx.add(ctx.mul(rev, ctx.r()), ctx.mul(rev_sym % ctx.p(), ctx.r()));
        ++i;
    }
};

/// One-pass additive-error palindrome scan. Feed exactly n symbols through
/// step(), then collect the long-palindrome reports from finish(); short
/// palindromes are reported by step() at the iteration their window closes.
class SqrtState {
public:
    struct EntryBox {
        enum class Kind { rs, rnf, rf } kind = Kind::rs;
        bool alive = true;
        u64 gen = 0;  // bumped when the box dies or a member's schedule must stop
        RsEntry rs;
        RnfEntry run;
        u64 estMidFloor = 0, estMidCeil = 0, estLast = 0;

        u64 first_midpoint() const { return kind == Kind::rs ? rs.m : run.m1; }
        u64 last_midpoint() const { return kind == Kind::rs ? rs.m : run.last_midpoint(); }
    };

    SqrtState(const SqrtConfig& cfg, const FpContext& ctx)
        : cfg_(cfg),
          ctx_(&ctx),
          sqrt_n_(isqrt(cfg.n)),
          window_(2 * isqrt(cfg.n)),
          ring_(2 * isqrt(cfg.n), ctx),
          meter_(cfg.meter_stride) {
        if (cfg.n < 1) throw std::invalid_argument("SqrtState: n must be >= 1");
        if (cfg.eps > 1.0 || cfg.eps * double(sqrt_n_) < 1.0)
            throw std::invalid_argument("SqrtState: eps must satisfy 1/sqrt(n) <= eps <= 1");
        spacing_ = u64(cfg.eps * double(sqrt_n_));
        if (spacing_ < 1) spacing_ = 1;  // guarded by the eps check above
        for (u64 j = spacing_; j < sqrt_n_; j += spacing_) pair_sizes_.push_back(j);
        pair_sizes_.push_back(sqrt_n_);
        pair_values_.resize(pair_sizes_.size());

        meter_.account(SpaceCategory::window, std::int64_t(2 * sqrt_n_));            // symbols
        meter_.account(SpaceCategory::window, std::int64_t(3 * (2 * sqrt_n_ + 1)));  // prefix ring
        meter_.account(SpaceCategory::window, std::int64_t(2 * sqrt_n_ + 2));        // r-power table
        meter_.account(SpaceCategory::window, 5);                                    // masters
        meter_.account(SpaceCategory::pairs, std::int64_t(2 * pair_sizes_.size()));
        checkpoints_.push_back(0);  // c = 0, empty reverse prefix
        meter_.account(SpaceCategory::checkpoints, 2);
    }

    u64 sqrt_n() const { return sqrt_n_; }
    u64 spacing() const { return spacing_; }
    u64 iteration() const { return masters_.i; }
    const Window& window() const { return window_; }
    const PrefixRing& ring() const { return ring_; }
    const StreamMasters& masters() const { return masters_; }
    const std::vector<EntryBox>& entries() const { return entries_; }
    const SpaceMeter& meter() const { return meter_; }
    u64 density_violations() const { return density_violations_; }
    u64 collision_diagnostics() const { return collision_diags_; }

    Symbol complemented(Symbol s) const { return cfg_.complement ? cfg_.complement->apply(s) : s; }

    /// Process symbol S[i]; returns the short-palindrome report finalized at
    /// this iteration, if any.
    std::optional<SqrtReport> step(Symbol sym) {
        if (masters_.i >= cfg_.n) throw std::logic_error("SqrtState: stream overrun");
        masters_.extend(complemented(sym), sym, *ctx_);
        const u64 i = masters_.i;
        window_.push(sym);
        ring_.push_raw(masters_.fwd, masters_.rev, masters_.r_inv_pow, i);
        if (i % spacing_ == 0) {
            checkpoints_.push_back(masters_.rev);
            meter_.account(SpaceCategory::checkpoints, 2);
        }

        std::optional<SqrtReport> short_report;
        if (i > sqrt_n_) {
            const u64 m = i - sqrt_n_;
            u64 est = 0;
            for (std::size_t pi = 0; pi < pair_sizes_.size(); ++pi) {
                u64 j = pair_sizes_[pi];
                if (j > m) break;
                Fp rv = ring_.rev_sub(m - j, m);
                Fp fv = ring_.fwd_sub(m, m + j);
                pair_values_[pi] = {rv.value, fv.value};
                if (rv.value == fv.value) est = j;
            }
            if (est < sqrt_n_) {
                short_report = SqrtReport{m, est, est + spacing_, false};
            }
            admit_or_close(m, est == sqrt_n_);
        }

        process_due_checks(i);
        meter_.tick(i);
        return short_report;
    }

    /// Finalize after exactly n symbols: close any open run, expand the
    /// candidate list, and resolve the tail midpoints from the window.
    std::vector<SqrtReport> finish() {
        if (masters_.i != cfg_.n) throw std::logic_error("SqrtState: finish() before the stream ended");
        if (!entries_.empty()) {
            EntryBox& last = entries_.back();
            if (last.alive && last.kind == EntryBox::Kind::rnf) finalize_box(last);
        }
        std::vector<SqrtReport> out;
        for (const EntryBox& box : entries_) {
            if (!box.alive) continue;
            if (box.kind == EntryBox::Kind::rs) {
                out.push_back(SqrtReport{box.rs.m, box.rs.est, box.rs.est + spacing_, false});
            } else {
                RfEntry rf{box.run, box.estMidFloor, box.estMidCeil, box.estLast};
                for (u64 j = 1; j <= box.run.h; ++j) {
                    u64 est = estimate_at(rf, j);
                    out.push_back(SqrtReport{midpoint_at(box.run, j), est, est + spacing_, false});
                }
            }
        }
        // Midpoints in (n - sqrt_n, n-1] never reach the window middle; their
        // arms are < sqrt_n and fully retained, so resolve them exactly.
        const u64 n = cfg_.n;
        for (u64 m = (n > sqrt_n_ ? n - sqrt_n_ + 1 : 1); m + 1 <= n; ++m) {
            u64 l = 0;
            while (m >= l + 1 && m + l + 1 <= n &&
                   window_.at(m - l) == complemented(window_.at(m + l + 1)))
                ++l;
            out.push_back(SqrtReport{m, l, l + 1, true});
        }
        return out;
    }

private:
    struct Schedule {
        u64 due = 0;
        std::size_t box_idx = 0;
        u64 gen = 0;
        enum class Field { est_m1, mid_floor, mid_ceil, last } field = Field::est_m1;
        u64 m = 0;
        u64 fwd = 0, rev = 0, rinv_m = 0;  // prefix fingerprints at m and r^{-m}

        bool operator>(const Schedule& o) const { return due > o.due; }
    };

    void write_est(EntryBox& box, Schedule::Field f, u64 est) {
        switch (f) {
            case Schedule::Field::est_m1:
                if (box.kind == EntryBox::Kind::rs) box.rs.est = est;
                else box.run.est1 = est;
                break;
            case Schedule::Field::mid_floor: box.estMidFloor = est; break;
            case Schedule::Field::mid_ceil: box.estMidCeil = est; break;
            case Schedule::Field::last: box.estLast = est; break;
        }
    }

    void push_schedule(Schedule s) {
        schedule_.push(s);
        meter_.account(SpaceCategory::entries, 6);
    }

    void drop_schedule() { meter_.account(SpaceCategory::entries, -6); }

    /// First checkpoint check for a midpoint: the largest checkpoint at
    /// distance >= sqrt_n, i.e. the due iteration closest above m + sqrt_n.
    std::optional<u64> first_due(u64 m) const {
        if (m < sqrt_n_) return std::nullopt;
        u64 c = ((m - sqrt_n_) / spacing_) * spacing_;
        return 2 * m - c;
    }

    void schedule_entry(std::size_t idx, Schedule::Field f, u64 m, u64 fwd, u64 rev, u64 rinv,
                        std::optional<u64> due) {
        if (!due) return;
        push_schedule(Schedule{*due, idx, entries_[idx].gen, f, m, fwd, rev, rinv});
    }

    void admit_or_close(u64 m, bool admitted) {
        if (cfg_.mode == SqrtMode::simple) {
            if (admitted) append_rs(m);
            return;
        }
        if (!entries_.empty()) {
            EntryBox& last = entries_.back();
            if (last.alive && last.kind == EntryBox::Kind::rnf && m == last.run.next_expected()) {
                if (admitted) {
                    ++last.run.h;  // extend the open run
                    return;
                }
                finalize_box(last);  // the run just became maximal
                return;
            }
        }
        if (!admitted) return;
        // try to fuse the three most recent explicit entries into a run
        std::size_t k = entries_.size();
        if (k >= 2) {
            EntryBox& b1 = entries_[k - 2];
            EntryBox& b2 = entries_[k - 1];
            if (b1.alive && b2.alive && b1.kind == EntryBox::Kind::rs && b2.kind == EntryBox::Kind::rs) {
                u64 d1 = b2.rs.m - b1.rs.m;
                u64 d2 = m - b2.rs.m;
                if (d1 == d2 && 2 * d1 <= sqrt_n_) {
                    RsEntry e3{m, sqrt_n_, Fp{ring_.slot(m).fwd, m}, Fp{ring_.slot(m).rev, m}};
                    RnfEntry run = form_run(b1.rs, b2.rs, e3, *ctx_);
                    b1.kind = EntryBox::Kind::rnf;
                    b1.run = run;  // b1's live schedule keeps driving est1
                    b2.alive = false;
                    ++b2.gen;  // cancels b2's pending checks
                    meter_.account(SpaceCategory::entries, 8 - 4 - 4);  // two RS replaced by one RNF
                    check_density(b1.run.m1 + 2 * d1);
                    return;
                }
            }
        }
        append_rs(m);
    }

    void append_rs(u64 m) {
        const auto& slot = ring_.slot(m);
        EntryBox box;
        box.kind = EntryBox::Kind::rs;
        box.rs = RsEntry{m, sqrt_n_, Fp{slot.fwd, m}, Fp{slot.rev, m}};
        entries_.push_back(box);
        meter_.account(SpaceCategory::entries, 4);
        schedule_entry(entries_.size() - 1, Schedule::Field::est_m1, m, slot.fwd, slot.rev,
                       slot.r_inv_pow, first_due(m));
        check_density(m);
    }

    /// Close an open run: compute the middle/last estimates by scanning the
    /// checkpoints whose aligned check position falls in the retained span,
    /// then keep those midpoints under checkpoint checks from here on.
    void finalize_box(EntryBox& box) {
        auto [jf, jc] = middle_indices(box.run.h);
        const u64 jl = box.run.h;
        Fp fwd_f, rev_f, fwd_c, rev_c, fwd_l, rev_l;
        detail::walk_run_prefixes(box.run, *ctx_, [&](u64 j, const Fp& fwd, const Fp& rev) {
            if (j == jf) { fwd_f = fwd; rev_f = rev; }
            if (j == jc) { fwd_c = fwd; rev_c = rev; }
            if (j == jl) { fwd_l = fwd; rev_l = rev; }
        });
        box.kind = EntryBox::Kind::rf;
        meter_.account(SpaceCategory::entries, 11 - 8);
        std::size_t idx = std::size_t(&box - entries_.data());
        box.estMidFloor = scan_estimate(idx, Schedule::Field::mid_floor, midpoint_at(box.run, jf), fwd_f, rev_f);
        box.estMidCeil = jc == jf ? box.estMidFloor
                                  : scan_estimate(idx, Schedule::Field::mid_ceil, midpoint_at(box.run, jc), fwd_c, rev_c);
        box.estLast = scan_estimate(idx, Schedule::Field::last, midpoint_at(box.run, jl), fwd_l, rev_l);
    }

    /// max { j - m | j in the retained span, 2m - j is a checkpoint, and
    /// S[2m-j+1, m] reversed equals S[m+1, j] } with a sqrt_n floor; also
    /// schedules the follow-up check when the top of the span matched.
    u64 scan_estimate(std::size_t idx, Schedule::Field f, u64 m, const Fp& fwd_m, const Fp& rev_m) {
        const u64 i = masters_.i;
        const u64 rinv_m = ctx_->pow_r_inv(m);
        // largest j <= min(i, 2m) whose mirror 2m - j is a checkpoint index
        u64 j_hi = std::min(i, 2 * m);
        while (j_hi > m && (2 * m - j_hi) % spacing_ != 0) --j_hi;
        u64 j_lo = std::max(ring_.min_index(), m + 1);
        bool top = true;
        for (u64 j = j_hi; j >= j_lo && j > m; j -= spacing_) {
            u64 c = 2 * m - j;
            const auto& slot_j = ring_.slot(j);
            u64 f_right = ctx_->mul(ctx_->sub(slot_j.fwd, fwd_m.value), rinv_m);
            u64 f_left = ctx_->sub(rev_m.value, ctx_->mul(ctx_->pow_r(j - m), checkpoints_[c / spacing_]));
            if (f_left == f_right) {
                u64 est = std::max(j - m, sqrt_n_);
                if (top && c >= spacing_)
                    schedule_entry(idx, f, m, fwd_m.value, rev_m.value, rinv_m,
                                   std::optional<u64>(j + spacing_));
                return est;
            }
            top = false;
            if (j < j_lo + spacing_) break;
        }
        ++collision_diags_;  // unreachable without a fingerprint failure
        return sqrt_n_;
    }

    void process_due_checks(u64 i) {
        while (!schedule_.empty() && schedule_.top().due <= i) {
            Schedule s = schedule_.top();
            schedule_.pop();
            EntryBox& box = entries_[s.box_idx];
            if (!box.alive || box.gen != s.gen) { drop_schedule(); continue; }
            u64 c = 2 * s.m - s.due;
            u64 f_right = ctx_->mul(ctx_->sub(masters_.fwd, s.fwd), s.rinv_m);
            u64 f_left = ctx_->sub(s.rev, ctx_->mul(ctx_->pow_r(s.m - c), checkpoints_[c / spacing_]));
            if (f_left == f_right) {
                write_est(box, s.field, s.due - s.m);
                if (c >= spacing_) {
                    s.due += spacing_;
                    schedule_.push(s);
                    continue;
                }
            }
            drop_schedule();  // first failed span ends the ratchet
        }
    }

    /// Density bound: any sqrt_n-length index interval holds at most two
    /// explicit entries and two compressed runs.
    void check_density(u64 new_last_midpoint) {
        u64 lo = new_last_midpoint > sqrt_n_ ? new_last_midpoint - sqrt_n_ + 1 : 1;
        u64 rs_count = 0, run_count = 0;
        for (std::size_t k = entries_.size(); k-- > 0;) {
            const EntryBox& box = entries_[k];
            if (!box.alive) continue;
            if (box.last_midpoint() < lo && box.first_midpoint() < lo) break;
            if (box.last_midpoint() < lo) continue;
            if (box.kind == EntryBox::Kind::rs) ++rs_count;
            else ++run_count;
        }
        if (rs_count > 2 || run_count > 2) ++density_violations_;
    }

    SqrtConfig cfg_;
    const FpContext* ctx_;
    u64 sqrt_n_;
    u64 spacing_ = 1;
    std::vector<u64> pair_sizes_;
    std::vector<std::pair<u64, u64>> pair_values_;
    Window window_;
    PrefixRing ring_;
    StreamMasters masters_;
    std::vector<u64> checkpoints_;  // checkpoints_[k] = F^R(1, k * spacing)
    std::vector<EntryBox> entries_;
    std::priority_queue<Schedule, std::vector<Schedule>, std::greater<Schedule>> schedule_;
    SpaceMeter meter_;
    u64 density_violations_ = 0;
    u64 collision_diags_ = 0;
};

}  // namespace palstream
