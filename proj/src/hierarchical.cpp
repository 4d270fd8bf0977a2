#include "cpmean/hierarchical.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "cpmean/rng.hpp"

namespace cpmean {

namespace {

void sort_path(std::vector<PathEntry>& entries) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const PathEntry& a, const PathEntry& b) {
                         if (a.cusum != b.cusum) return a.cusum > b.cusum;
                         return a.b < b.b;
                     });
}

// Best break on [s, e] with b restricted to [s + L - 1, e - L];
// ties go to the smallest b. Returns cusum magnitude 0 if no b is feasible.
PathEntry best_break(const TimeSeries& ts, std::size_t s, std::size_t e,
                     std::size_t L) {
    PathEntry best{0, s, e, -1.0};
    if (e < s + 1) return best;
    const std::size_t b_lo = s + L - 1;
    if (e < b_lo + L) return best;
    for (std::size_t b = b_lo; b + L <= e; ++b) {
        const double c = cusum(ts, s, b, e).abs_value;
        if (c > best.cusum) {
            best.cusum = c;
            best.b = b;
        }
    }
    return best;
}

void bs_recurse(const TimeSeries& ts, std::size_t s, std::size_t e, double zeta,
                std::size_t L, std::vector<PathEntry>& out) {
    if (e - s < 1) return;
    const PathEntry top = best_break(ts, s, e, L);
    if (top.cusum < 0.0) return;  // too short for the segment-length floor
    if (top.cusum >= zeta) {
        out.push_back(top);
        bs_recurse(ts, s, top.b, zeta, L, out);
        bs_recurse(ts, top.b + 1, e, zeta, L, out);
    }
}

std::vector<std::pair<std::size_t, std::size_t>> all_intervals(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> iv;
    iv.reserve(n * (n - 1) / 2);
    for (std::size_t s = 1; s < n; ++s) {
        for (std::size_t e = s + 1; e <= n; ++e) iv.emplace_back(s, e);
    }
    return iv;
}

// Equispaced grid of the smallest size K with K(K-1)/2 >= m, mapped onto
// [lo, lo + len - 1].
std::vector<std::pair<std::size_t, std::size_t>> deterministic_intervals(
    std::size_t lo, std::size_t len, std::size_t m) {
    const std::size_t total = len * (len - 1) / 2;
    std::vector<std::pair<std::size_t, std::size_t>> iv;
    if (m >= total) {
        iv = all_intervals(len);
    } else {
        std::size_t k = 2;
        while (k * (k - 1) / 2 < m) ++k;
        std::vector<std::size_t> grid(k);
        for (std::size_t i = 0; i < k; ++i) {
            grid[i] = static_cast<std::size_t>(std::llround(
                          static_cast<double>(len - 1) * static_cast<double>(i) /
                          static_cast<double>(k - 1))) +
                      1;
        }
        iv.reserve(k * (k - 1) / 2);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) iv.emplace_back(grid[i], grid[j]);
        }
    }
    if (lo > 1) {
        for (auto& p : iv) {
            p.first += lo - 1;
            p.second += lo - 1;
        }
    }
    return iv;
}

}  // namespace

Segmentation SolutionPath::model(std::size_t count) const {
    count = std::min(count, entries.size());
    std::vector<std::size_t> cps(count);
    for (std::size_t i = 0; i < count; ++i) cps[i] = entries[i].b;
    std::sort(cps.begin(), cps.end());
    return Segmentation(std::move(cps), n);
}

Segmentation SolutionPath::thresholded(double threshold) const {
    std::size_t count = 0;
    while (count < entries.size() && entries[count].cusum >= threshold) ++count;
    return model(count);
}

SolutionPath binary_segmentation(const TimeSeries& ts, double zeta,
                                 std::size_t min_seg_len) {
    if (zeta < 0.0) throw std::invalid_argument("binary_segmentation: zeta >= 0");
    if (min_seg_len < 1) throw std::invalid_argument("binary_segmentation: min_seg_len >= 1");
    SolutionPath path;
    path.n = ts.size();
    bs_recurse(ts, 1, ts.size(), zeta, min_seg_len, path.entries);
    sort_path(path.entries);
    return path;
}

IntervalGrid make_grid(std::size_t n, GridKind kind, std::size_t m,
                       std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("make_grid: requires n >= 2");
    if (m < 1) throw std::invalid_argument("make_grid: requires M >= 1");
    IntervalGrid grid;
    grid.kind = kind;
    grid.requested_m = m;
    grid.seed = seed;
    const std::size_t total = n * (n - 1) / 2;
    if (kind == GridKind::deterministic || m >= total) {
        grid.intervals = deterministic_intervals(1, n, m);
        return grid;
    }
    Rng rng(seed);
    grid.intervals.reserve(m);
    while (grid.intervals.size() < m) {
        const std::size_t a = 1 + rng.next_u64() % n;
        const std::size_t b = 1 + rng.next_u64() % n;
        if (a == b) continue;
        grid.intervals.emplace_back(std::min(a, b), std::max(a, b));
    }
    return grid;
}

SolutionPath wbs(const TimeSeries& ts, const IntervalGrid& grid, double zeta) {
    if (zeta < 0.0) throw std::invalid_argument("wbs: zeta >= 0");
    SolutionPath path;
    path.n = ts.size();

    // The per-interval maximum never changes; only the surviving set shrinks.
    std::vector<PathEntry> best(grid.intervals.size());
    for (std::size_t i = 0; i < grid.intervals.size(); ++i) {
        const auto [s, e] = grid.intervals[i];
        if (s < 1 || s >= e || e > ts.size()) {
            throw std::invalid_argument("wbs: grid interval outside [1, n]");
        }
        best[i] = best_break(ts, s, e, 1);
    }
    std::vector<bool> alive(grid.intervals.size(), true);
    std::size_t n_alive = grid.intervals.size();
    while (n_alive > 0) {
        std::size_t pick = grid.intervals.size();
        for (std::size_t i = 0; i < grid.intervals.size(); ++i) {
            if (!alive[i]) continue;
            if (pick == grid.intervals.size()) {
                pick = i;
                continue;
            }
            const PathEntry& a = best[i];
            const PathEntry& p = best[pick];
            if (a.cusum > p.cusum ||
                (a.cusum == p.cusum &&
                 std::tie(a.s, a.e, a.b) < std::tie(p.s, p.e, p.b))) {
                pick = i;
            }
        }
        if (best[pick].cusum < zeta) break;
        const std::size_t b = best[pick].b;
        path.entries.push_back(best[pick]);
        for (std::size_t i = 0; i < grid.intervals.size(); ++i) {
            if (alive[i] && grid.intervals[i].first <= b &&
                b < grid.intervals[i].second) {
                alive[i] = false;
                --n_alive;
            }
        }
    }
    sort_path(path.entries);
    return path;
}

namespace {

void wbs2_recurse(const TimeSeries& ts, std::size_t s, std::size_t e,
                  std::size_t m_per_stage, std::vector<PathEntry>& out) {
    if (e - s < 1) return;
    const auto intervals = deterministic_intervals(s, e - s + 1, m_per_stage);
    PathEntry top{0, s, e, -1.0};
    for (const auto& [is, ie] : intervals) {
        const PathEntry cand = best_break(ts, is, ie, 1);
        if (cand.cusum > top.cusum ||
            (cand.cusum == top.cusum &&
             std::tie(cand.s, cand.e, cand.b) < std::tie(top.s, top.e, top.b))) {
            top = cand;
        }
    }
    out.push_back(top);
    wbs2_recurse(ts, s, top.b, m_per_stage, out);
    wbs2_recurse(ts, top.b + 1, e, m_per_stage, out);
}

}  // namespace

SolutionPath wbs2(const TimeSeries& ts, std::size_t m_per_stage) {
    if (m_per_stage < 1) throw std::invalid_argument("wbs2: requires M >= 1");
    SolutionPath path;
    path.n = ts.size();
    if (ts.size() >= 2) wbs2_recurse(ts, 1, ts.size(), m_per_stage, path.entries);
    sort_path(path.entries);
    return path;
}

TguhDecomposition tguh_transform(const TimeSeries& ts, double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("tguh: rho in (0, 1)");
    const std::size_t n = ts.size();
    if (n < 2) throw std::invalid_argument("tguh: requires n >= 2");

    struct Region {
        std::size_t p, r;
        double sum;
    };
    std::vector<Region> regions(n);
    for (std::size_t i = 0; i < n; ++i) regions[i] = {i + 1, i + 1, ts.at(i + 1)};

    TguhDecomposition decomp;
    decomp.n = n;
    decomp.details.reserve(n - 1);

    std::size_t stage = 0;
    while (regions.size() > 1) {
        ++stage;
        const std::size_t alpha = regions.size();
        const std::size_t quota = static_cast<std::size_t>(
            std::ceil(rho * static_cast<double>(alpha)));

        // Scaled difference of each adjacent pair, smallest magnitudes first.
        struct Diff {
            double value;
            std::size_t left;  // index into `regions`
        };
        std::vector<Diff> diffs(alpha - 1);
        for (std::size_t i = 0; i + 1 < alpha; ++i) {
            const Region& a = regions[i];
            const Region& b = regions[i + 1];
            const double la = static_cast<double>(a.r - a.p + 1);
            const double lb = static_cast<double>(b.r - b.p + 1);
            const double d = std::sqrt(lb / ((la + lb) * la)) * a.sum -
                             std::sqrt(la / ((la + lb) * lb)) * b.sum;
            diffs[i] = {d, i};
        }
        std::vector<std::size_t> order(diffs.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double ma = std::abs(diffs[a].value);
            const double mb = std::abs(diffs[b].value);
            if (ma != mb) return ma < mb;
            return diffs[a].left < diffs[b].left;
        });

        std::vector<bool> used(alpha, false);
        std::vector<std::size_t> accepted;
        std::size_t k_in_stage = 0;
        for (std::size_t idx : order) {
            if (accepted.size() >= quota) break;
            const std::size_t i = diffs[idx].left;
            if (used[i] || used[i + 1]) continue;
            used[i] = used[i + 1] = true;
            accepted.push_back(idx);
            decomp.details.push_back({regions[i].p, regions[i].r, regions[i + 1].r,
                                      stage, ++k_in_stage, diffs[idx].value});
        }

        // Rebuild the region list with accepted pairs merged.
        std::vector<Region> next;
        next.reserve(alpha - accepted.size());
        std::vector<bool> merge_left(alpha, false);
        for (std::size_t idx : accepted) merge_left[diffs[idx].left] = true;
        for (std::size_t i = 0; i < alpha;) {
            if (merge_left[i]) {
                next.push_back({regions[i].p, regions[i + 1].r,
                                regions[i].sum + regions[i + 1].sum});
                i += 2;
            } else {
                next.push_back(regions[i]);
                i += 1;
            }
        }
        regions = std::move(next);
    }

    decomp.smooth = regions[0].sum / std::sqrt(static_cast<double>(n));
    return decomp;
}

std::vector<double> tguh_inverse(const TguhDecomposition& decomp, double threshold) {
    // Undo merges in reverse order; the map holds each live region's scaled
    // sum (sum / sqrt(length)).
    std::map<std::pair<std::size_t, std::size_t>, double> value;
    value[{1, decomp.n}] = decomp.smooth;
    for (auto it = decomp.details.rbegin(); it != decomp.details.rend(); ++it) {
        const auto node = value.find({it->p, it->r});
        if (node == value.end()) {
            throw std::invalid_argument("tguh_inverse: malformed merge tree");
        }
        const double s = node->second;
        const double d = std::abs(it->value) > threshold ? it->value : 0.0;
        value.erase(node);
        const double ll = static_cast<double>(it->q - it->p + 1);
        const double lr = static_cast<double>(it->r - it->q);
        const double wl = std::sqrt(ll / (ll + lr));
        const double wr = std::sqrt(lr / (ll + lr));
        value[{it->p, it->q}] = wr * d + wl * s;
        value[{it->q + 1, it->r}] = -wl * d + wr * s;
    }
    std::vector<double> x(decomp.n);
    for (const auto& [span, v] : value) {
        if (span.first != span.second) {
            throw std::invalid_argument("tguh_inverse: malformed merge tree");
        }
        x[span.first - 1] = v;
    }
    return x;
}

Segmentation tguh_detect(const TimeSeries& ts, double rho, double threshold) {
    if (threshold < 0.0) throw std::invalid_argument("tguh_detect: threshold >= 0");
    const TguhDecomposition decomp = tguh_transform(ts, rho);
    std::vector<std::size_t> cps;
    for (const auto& d : decomp.details) {
        if (std::abs(d.value) > threshold) cps.push_back(d.q);
    }
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    return Segmentation(std::move(cps), ts.size());
}

}  // namespace cpmean
