#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "palstream/fingerprint.hpp"

namespace palstream {

/// Word-model space categories. One register holds one index, length, symbol,
/// or fingerprint value. Counting rules used by the algorithms:
///   - window symbol: 1; prefix-ring slot: 3 (fwd, rev, r^{-t})
///   - sqrt checkpoint: 2 (index, reverse prefix fingerprint)
///   - R_S entry: 4 (m, est, F^F(1,m), F^R(1,m)); R_NF: 8; R_F: 11
///   - schedule record: 2 (due index, target)
///   - log checkpoint: 5 (index, level set, fwd, rev, r^{-c}) plus its list;
///     log-mode list entries carry no fingerprints: R_S: 2 (m, verified arm),
///     run: 4 (m1, gap, h, verified-arm floor)
///   - uncertain-interval buffer: 1 per buffered symbol plus 4 per candidate
enum class SpaceCategory : std::size_t {
    window = 0,
    checkpoints,
    pairs,
    entries,
    uncertain,
    kCount,
};

inline const char* to_string(SpaceCategory c) {
    switch (c) {
        case SpaceCategory::window: return "window";
        case SpaceCategory::checkpoints: return "checkpoints";
        case SpaceCategory::pairs: return "pairs";
        case SpaceCategory::entries: return "entries";
        case SpaceCategory::uncertain: return "uncertain";
        default: throw std::invalid_argument("unknown space category");
    }
}

struct SpaceSample {
    u64 iteration = 0;
    u64 total = 0;
};

struct SpaceReport {
    u64 peak_registers = 0;
    std::array<u64, std::size_t(SpaceCategory::kCount)> peak_by_category{};
    std::array<u64, std::size_t(SpaceCategory::kCount)> current_by_category{};
    std::vector<SpaceSample> samples;
};

/// Intrusive register meter. Algorithms call account() at every allocation
/// and release; peaks are event-driven, samples stride-driven.
class SpaceMeter {
public:
    explicit SpaceMeter(u64 sample_stride = 0) : stride_(sample_stride) {}

    void account(SpaceCategory cat, std::int64_t delta) {
        auto idx = std::size_t(cat);
        if (idx >= current_.size()) throw std::invalid_argument("unknown space category");
        if (delta < 0 && current_[idx] < u64(-delta))
            throw std::logic_error("space meter: category balance went negative");
        current_[idx] = u64(std::int64_t(current_[idx]) + delta);
        total_ = u64(std::int64_t(total_) + delta);
        if (current_[idx] > peak_[idx]) peak_[idx] = current_[idx];
        if (total_ > peak_total_) peak_total_ = total_;
    }

    /// Call once per iteration; records a sample every `stride` iterations.
    void tick(u64 iteration) {
        if (stride_ > 0 && iteration % stride_ == 0)
            samples_.push_back(SpaceSample{iteration, total_});
    }

    u64 current(SpaceCategory cat) const { return current_[std::size_t(cat)]; }
    u64 current_total() const { return total_; }
    u64 peak_total() const { return peak_total_; }

    SpaceReport report() const {
        SpaceReport r;
        r.peak_registers = peak_total_;
        r.peak_by_category = peak_;
        r.current_by_category = current_;
        r.samples = samples_;
        return r;
    }

private:
    u64 stride_;
    std::array<u64, std::size_t(SpaceCategory::kCount)> current_{};
    std::array<u64, std::size_t(SpaceCategory::kCount)> peak_{};
    u64 total_ = 0;
    u64 peak_total_ = 0;
    std::vector<SpaceSample> samples_;
};

}  // namespace palstream
