#pragma once

// Kendall rank correlation in O(n log n) (Knight's algorithm).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "semncg/types.hpp"

namespace semncg {

namespace detail {

inline std::int64_t tie_pairs(std::int64_t run) { return run * (run - 1) / 2; }

// Sorts `v` in place and returns the number of strictly inverted pairs.
inline std::int64_t count_swaps(std::vector<double>& v) {
    std::vector<double> buf(v.size());
    std::int64_t swaps = 0;
    for (std::size_t width = 1; width < v.size(); width *= 2) {
        for (std::size_t lo = 0; lo < v.size(); lo += 2 * width) {
            std::size_t mid = std::min(lo + width, v.size());
            std::size_t hi = std::min(lo + 2 * width, v.size());
            std::size_t i = lo, j = mid, out = lo;
            while (i < mid && j < hi) {
                if (v[j] < v[i]) {
                    swaps += static_cast<std::int64_t>(mid - i);
                    buf[out++] = v[j++];
                } else {
                    buf[out++] = v[i++];
                }
            }
            while (i < mid) buf[out++] = v[i++];
            while (j < hi) buf[out++] = v[j++];
        }
        std::swap(v, buf);
    }
    return swaps;
}

}  // namespace detail

// Pair statistics shared by tau-a and tau-b.
struct TauCounts {
    std::int64_t pairs = 0;       // n(n-1)/2
    std::int64_t x_ties = 0;      // pairs tied in x
    std::int64_t y_ties = 0;      // pairs tied in y
    std::int64_t joint_ties = 0;  // pairs tied in both
    std::int64_t discordant = 0;  // pairs ordered oppositely

    std::int64_t concordant() const { return pairs - x_ties - y_ties + joint_ties - discordant; }
    std::int64_t score() const { return concordant() - discordant; }
};

inline TauCounts kendall_counts(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw invalid_input("kendall_tau: length mismatch (" + std::to_string(x.size()) + " vs " +
                            std::to_string(y.size()) + ")");
    if (x.size() < 2) throw invalid_input("kendall_tau: need at least 2 observations");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
            throw invalid_input("kendall_tau: non-finite value");

    const std::size_t n = x.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
    });

    TauCounts c;
    c.pairs = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;

    std::int64_t x_run = 1, xy_run = 1;
    for (std::size_t i = 1; i < n; ++i) {
        const bool same_x = x[idx[i]] == x[idx[i - 1]];
        const bool same_y = y[idx[i]] == y[idx[i - 1]];
        if (same_x) {
            ++x_run;
            if (same_y) {
                ++xy_run;
            } else {
                c.joint_ties += detail::tie_pairs(xy_run);
                xy_run = 1;
            }
        } else {
            c.x_ties += detail::tie_pairs(x_run);
            c.joint_ties += detail::tie_pairs(xy_run);
            x_run = xy_run = 1;
        }
    }
    c.x_ties += detail::tie_pairs(x_run);
    c.joint_ties += detail::tie_pairs(xy_run);

    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = y[idx[i]];
    // Within an x-tie group ys is already ascending, so only pairs with
    // strictly increasing x can register as swaps.
    c.discordant = detail::count_swaps(ys);

    std::int64_t y_run = 1;
    for (std::size_t i = 1; i < n; ++i) {
        if (ys[i] == ys[i - 1]) {
            ++y_run;
        } else {
            c.y_ties += detail::tie_pairs(y_run);
            y_run = 1;
        }
    }
    c.y_ties += detail::tie_pairs(y_run);
    return c;
}

inline std::optional<double> tau_from_counts(const TauCounts& c, TauVariant variant) {
    const std::int64_t untied_x = c.pairs - c.x_ties;
    const std::int64_t untied_y = c.pairs - c.y_ties;
    if (untied_x == 0 || untied_y == 0) return std::nullopt;
    const auto s = static_cast<double>(c.score());
    if (variant == TauVariant::a) return s / static_cast<double>(c.pairs);
    return s / std::sqrt(static_cast<double>(untied_x) * static_cast<double>(untied_y));
}

// Tau-b by default. Constant input on either side yields no value.
inline std::optional<double> kendall_tau(std::span<const double> x, std::span<const double> y,
                                         TauVariant variant = TauVariant::b) {
    return tau_from_counts(kendall_counts(x, y), variant);
}

}  // namespace semncg
