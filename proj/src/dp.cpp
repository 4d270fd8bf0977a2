#include "cpmean/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cpmean {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Segmentation make_segmentation(std::vector<std::size_t> cps, std::size_t n) {
    std::sort(cps.begin(), cps.end());
    return Segmentation(std::move(cps), n);
}

}  // namespace

std::vector<PiecewiseFit> segment_neighbourhood(const TimeSeries& ts,
                                                std::size_t n_max,
                                                std::size_t min_seg_len) {
    const std::size_t n = ts.size();
    if (min_seg_len < 1) throw std::invalid_argument("segment_neighbourhood: min_seg_len >= 1");
    if (n_max > n - 1 || (n_max + 1) * min_seg_len > n) {
        throw std::invalid_argument(
            "segment_neighbourhood: infeasible n_max for this series and min_seg_len");
    }
    const std::size_t L = min_seg_len;

    // q[m][t] = minimal cost of fitting X_{1..t} with exactly m changes.
    std::vector<std::vector<double>> q(n_max + 1, std::vector<double>(n + 1, kInf));
    std::vector<std::vector<std::size_t>> arg(n_max + 1,
                                              std::vector<std::size_t>(n + 1, 0));
    for (std::size_t t = L; t <= n; ++t) q[0][t] = segment_cost(ts, 0, t);
    for (std::size_t m = 1; m <= n_max; ++m) {
        for (std::size_t t = (m + 1) * L; t <= n; ++t) {
            double best = kInf;
            std::size_t best_k = 0;
            // Last change at k: strictly smaller k wins ties.
            for (std::size_t k = m * L; k + L <= t; ++k) {
                if (q[m - 1][k] == kInf) continue;
                const double cand = q[m - 1][k] + segment_cost(ts, k, t);
                if (cand < best) {
                    best = cand;
                    best_k = k;
                }
            }
            q[m][t] = best;
            arg[m][t] = best_k;
        }
    }

    std::vector<PiecewiseFit> fits;
    fits.reserve(n_max + 1);
    for (std::size_t m = 0; m <= n_max; ++m) {
        std::vector<std::size_t> cps(m);
        std::size_t t = n;
        for (std::size_t j = m; j >= 1; --j) {
            t = arg[j][t];
            cps[j - 1] = t;
        }
        fits.push_back(fit_segmentation(ts, make_segmentation(std::move(cps), n)));
    }
    return fits;
}

PiecewiseFit optimal_partitioning(const TimeSeries& ts, double lambda,
                                  std::size_t min_seg_len, bool prune) {
    if (lambda < 0.0) throw std::invalid_argument("optimal_partitioning: negative lambda");
    if (min_seg_len < 1) throw std::invalid_argument("optimal_partitioning: min_seg_len >= 1");
    const std::size_t n = ts.size();
    const std::size_t L = min_seg_len;
    if (L > n) throw std::invalid_argument("optimal_partitioning: min_seg_len > n");

    std::vector<double> q(n + 1, kInf);
    std::vector<std::size_t> back(n + 1, 0);
    q[0] = -lambda;

    // Candidate last-change positions, with delayed removal under a minimum
    // segment length: a candidate failing the prune test at time t may still
    // be optimal for t' < t + L, so it is only dropped from t + L onwards.
    struct Candidate {
        std::size_t k;
        std::size_t dead_from;  // remove for times >= dead_from (0 = alive)
    };
    std::vector<Candidate> cands;
    cands.push_back({0, 0});

    for (std::size_t t = L; t <= n; ++t) {
        if (t >= 2 * L) cands.push_back({t - L, 0});
        double best = kInf;
        std::size_t best_k = 0;
        for (const auto& c : cands) {
            if (c.dead_from != 0 && t >= c.dead_from) continue;
            if (q[c.k] == kInf) continue;
            const double cand = q[c.k] + segment_cost(ts, c.k, t) + lambda;
            if (cand < best) {
                best = cand;
                best_k = c.k;
            }
        }
        q[t] = best;
        back[t] = best_k;
        if (prune) {
            for (auto& c : cands) {
                if (c.dead_from != 0 || q[c.k] == kInf) continue;
                if (q[c.k] + segment_cost(ts, c.k, t) > q[t]) {
                    c.dead_from = L == 1 ? t + 1 : t + L;
                }
            }
            std::erase_if(cands, [t](const Candidate& c) {
                return c.dead_from != 0 && t >= c.dead_from;
            });
        }
    }

    std::vector<std::size_t> cps;
    for (std::size_t t = back[n]; t != 0; t = back[t]) cps.push_back(t);
    return fit_segmentation(ts, make_segmentation(std::move(cps), n));
}

CropsResult crops(const TimeSeries& ts, double lambda_min, double lambda_max,
                  std::size_t min_seg_len) {
    if (lambda_min < 0.0 || lambda_min > lambda_max) {
        throw std::invalid_argument("crops: requires 0 <= lambda_min <= lambda_max");
    }

    struct Solved {
        std::size_t m;
        double cost;
        Segmentation seg;
    };
    std::vector<Solved> found;
    auto solve = [&](double lambda) -> Solved {
        PiecewiseFit fit = optimal_partitioning(ts, lambda, min_seg_len, true);
        Solved s{fit.segmentation.n_changes(), fit.rss, fit.segmentation};
        for (const auto& f : found) {
            if (f.m == s.m) return s;  // already recorded
        }
        found.push_back(s);
        return s;
    };

    const Solved lo = solve(lambda_min);
    const Solved hi = solve(lambda_max);

    // Bisect penalty intervals until the optimal sizes at the ends differ by
    // at most one; each probe either closes an interval or finds a new size.
    struct Range {
        double l0, l1;
        std::size_t m0, m1;
        double c0, c1;
    };
    std::vector<Range> open;
    if (lo.m > hi.m + 1) open.push_back({lambda_min, lambda_max, lo.m, hi.m, lo.cost, hi.cost});
    while (!open.empty()) {
        const Range r = open.back();
        open.pop_back();
        const double lam = (r.c1 - r.c0) / (static_cast<double>(r.m0) - static_cast<double>(r.m1));
        const Solved mid = solve(lam);
        if (mid.m != r.m0 && mid.m != r.m1) {
            if (r.m0 > mid.m + 1) open.push_back({r.l0, lam, r.m0, mid.m, r.c0, mid.cost});
            if (mid.m > r.m1 + 1) open.push_back({lam, r.l1, mid.m, r.m1, mid.cost, r.c1});
        }
    }

    // The optimal cost at penalty lambda is the lower envelope of the lines
    // cost_i + m_i * lambda; every recorded segmentation is optimal at some
    // probed penalty, so sorting by descending m tiles the range.
    std::sort(found.begin(), found.end(), [](const Solved& a, const Solved& b) {
        if (a.m != b.m) return a.m > b.m;
        return a.cost < b.cost;
    });
    found.erase(std::unique(found.begin(), found.end(),
                            [](const Solved& a, const Solved& b) { return a.m == b.m; }),
                found.end());

    CropsResult result;
    double left = lambda_min;
    for (std::size_t i = 0; i < found.size(); ++i) {
        CropsEntry entry;
        entry.segmentation = found[i].seg;
        entry.unpenalized_cost = found[i].cost;
        entry.lambda_lo = left;
        if (i + 1 < found.size()) {
            const double boundary =
                (found[i + 1].cost - found[i].cost) /
                (static_cast<double>(found[i].m) - static_cast<double>(found[i + 1].m));
            entry.lambda_hi = boundary;
            left = boundary;
        } else {
            entry.lambda_hi = lambda_max;
        }
        result.entries.push_back(std::move(entry));
    }
    return result;
}

std::vector<std::pair<std::size_t, double>> rss_vs_n_table(const CropsResult& result) {
    std::vector<std::pair<std::size_t, double>> rows;
    rows.reserve(result.entries.size());
    for (const auto& e : result.entries) {
        rows.emplace_back(e.segmentation.n_changes(), e.unpenalized_cost);
    }
    return rows;
}

std::vector<std::pair<std::size_t, double>> rss_vs_n_table(
    const std::vector<PiecewiseFit>& fits) {
    std::vector<std::pair<std::size_t, double>> rows;
    rows.reserve(fits.size());
    for (const auto& f : fits) rows.emplace_back(f.segmentation.n_changes(), f.rss);
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    return rows;
}

}  // namespace cpmean
