#include "elecmarket/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "elecmarket/stochastic.hpp"

namespace elecmarket::temporal {

namespace {

constexpr std::size_t kFeatureDim = 4 * static_cast<std::size_t>(kHoursPerDay);

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

struct KmeansResult {
    std::vector<int> labels;
    double sse = std::numeric_limits<double>::infinity();
};

KmeansResult kmeans_once(const std::vector<std::vector<double>>& points, int k,
                         stochastic::Rng& rng) {
    const std::size_t n = points.size();
    const std::size_t dim = points.front().size();

    // k-means++ seeding
    std::vector<std::vector<double>> centers;
    centers.reserve(static_cast<std::size_t>(k));
    centers.push_back(points[rng.uniform_index(n)]);
    std::vector<double> d2(n);
    while (centers.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) best = std::min(best, sq_dist(points[i], c));
            d2[i] = best;
            total += best;
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            const double target = rng.uniform01() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.uniform_index(n);
        }
        centers.push_back(points[pick]);
    }

    std::vector<int> labels(n, 0);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = sq_dist(points[i], centers[static_cast<std::size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (labels[i] != best) {
                labels[i] = best;
                changed = true;
            }
        }
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(labels[i])];
        // re-seat any emptied cluster on the point farthest from its centre
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) continue;
            std::size_t farthest = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[static_cast<std::size_t>(labels[i])] <= 1) continue;
                const double d =
                    sq_dist(points[i], centers[static_cast<std::size_t>(labels[i])]);
                if (d > far_d) {
                    far_d = d;
                    farthest = i;
                }
            }
            --counts[static_cast<std::size_t>(labels[farthest])];
            labels[farthest] = c;
            ++counts[static_cast<std::size_t>(c)];
            changed = true;
        }
        for (auto& c : centers) std::fill(c.begin(), c.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            auto& c = centers[static_cast<std::size_t>(labels[i])];
            for (std::size_t j = 0; j < dim; ++j) c[j] += points[i][j];
        }
        for (int c = 0; c < k; ++c) {
            const double m = static_cast<double>(counts[static_cast<std::size_t>(c)]);
            for (double& v : centers[static_cast<std::size_t>(c)]) v /= m;
        }
        if (!changed) break;
    }

    KmeansResult out;
    out.labels = std::move(labels);
    out.sse = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        out.sse += sq_dist(points[i], centers[static_cast<std::size_t>(out.labels[i])]);
    return out;
}

std::vector<int> ward_cluster(const std::vector<std::vector<double>>& points, int k) {
    const std::size_t n = points.size();
    struct Node {
        std::vector<double> center;
        int size = 0;
        bool alive = true;
    };
    std::vector<Node> nodes(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        nodes[i] = {points[i], 1, true};
        labels[i] = static_cast<int>(i);
    }
    int alive = static_cast<int>(n);
    while (alive > k) {
        // Ward merge cost: (|a||b| / (|a|+|b|)) * ||ca - cb||^2
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!nodes[i].alive) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!nodes[j].alive) continue;
                const double na = nodes[i].size, nb = nodes[j].size;
                const double cost =
                    na * nb / (na + nb) * sq_dist(nodes[i].center, nodes[j].center);
                if (cost < best) {
                    best = cost;
                    bi = i;
                    bj = j;
                }
            }
        }
        const double na = nodes[bi].size, nb = nodes[bj].size;
        for (std::size_t d = 0; d < nodes[bi].center.size(); ++d)
            nodes[bi].center[d] =
                (na * nodes[bi].center[d] + nb * nodes[bj].center[d]) / (na + nb);
        nodes[bi].size += nodes[bj].size;
        nodes[bj].alive = false;
        for (std::size_t i = 0; i < n; ++i)
            if (labels[i] == static_cast<int>(bj)) labels[i] = static_cast<int>(bi);
        --alive;
    }
    return labels;
}

// Relabel clusters in first-appearance order so equal partitions compare equal.
std::vector<int> canonical_labels(std::span<const int> raw, int k) {
    std::vector<int> remap(static_cast<std::size_t>(
                               1 + *std::max_element(raw.begin(), raw.end())),
                           -1);
    std::vector<int> out(raw.size());
    int next = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        int& m = remap[static_cast<std::size_t>(raw[i])];
        if (m < 0) m = next++;
        out[i] = m;
    }
    if (next != k) throw std::logic_error("clustering produced an empty cluster");
    return out;
}

double weighted_mean(const WeightedSeries& s) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        num += s.values[i] * s.durations[i];
        den += s.durations[i];
    }
    return num / den;
}

}  // namespace

const char* to_string(SeriesKind k) {
    switch (k) {
        case SeriesKind::demand_mw: return "demand_mw";
        case SeriesKind::onshore_cf: return "onshore_cf";
        case SeriesKind::offshore_cf: return "offshore_cf";
        case SeriesKind::solar_cf: return "solar_cf";
    }
    return "?";
}

void DailySeriesMatrix::validate() const {
    if (days.empty()) throw std::invalid_argument("day matrix: no days");
    for (const auto& day : days) {
        for (double v : day.series(SeriesKind::demand_mw))
            if (!(v > 0.0)) throw std::invalid_argument("day matrix: demand must be > 0");
        for (SeriesKind k : {SeriesKind::onshore_cf, SeriesKind::offshore_cf,
                             SeriesKind::solar_cf})
            for (double v : day.series(k))
                if (v < 0.0 || v > 1.0)
                    throw std::invalid_argument("day matrix: capacity factor outside [0, 1]");
    }
}

double RepresentativeYear::slot_duration_hours(std::size_t i) const {
    const auto& d = rep_days[i];
    if (total_member_count > 0)
        return static_cast<double>(static_cast<long long>(d.member_count) *
                                   source_day_count) /
               static_cast<double>(total_member_count);
    return d.weight * source_day_count;
}

double RepresentativeYear::total_hours() const {
    double h = 0.0;
    for (std::size_t i = 0; i < rep_days.size(); ++i)
        h += kHoursPerDay * slot_duration_hours(i);
    return h;
}

double DurationCurve::total_duration() const {
    return std::accumulate(duration_hours.begin(), duration_hours.end(), 0.0);
}

double DurationCurve::energy() const {
    double e = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) e += values[i] * duration_hours[i];
    return e;
}

double DurationCurve::value_at(double cumulative_hours) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        acc += duration_hours[i];
        if (cumulative_hours <= acc) return values[i];
    }
    return values.back();
}

std::vector<std::vector<double>> clustering_features(const DailySeriesMatrix& data) {
    const std::size_t n = data.days.size();
    std::array<double, 4> lo{}, hi{};
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    for (const auto& day : data.days) {
        for (std::size_t k = 0; k < 4; ++k) {
            for (double v : day.values[k]) {
                lo[k] = std::min(lo[k], v);
                hi[k] = std::max(hi[k], v);
            }
        }
    }
    std::vector<std::vector<double>> feats(n, std::vector<double>(kFeatureDim));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < 4; ++k) {
            const double range = hi[k] - lo[k];
            for (int h = 0; h < kHoursPerDay; ++h) {
                const double v = data.days[i].values[k][static_cast<std::size_t>(h)];
                feats[i][k * kHoursPerDay + static_cast<std::size_t>(h)] =
                    range > 0.0 ? (v - lo[k]) / range : 0.0;
            }
        }
    }
    return feats;
}

ClusterAssignment cluster_days(const DailySeriesMatrix& data, int k, ClusterMethod method,
                               int restarts, std::uint64_t seed) {
    data.validate();
    const int n = data.day_count();
    if (k < 1 || k > n)
        throw std::invalid_argument("cluster_days: k must be in [1, day count]");

    ClusterAssignment out;
    out.k = k;
    if (k == n) {
        out.labels.resize(static_cast<std::size_t>(n));
        std::iota(out.labels.begin(), out.labels.end(), 0);
        return out;
    }
    if (k == 1) {
        out.labels.assign(static_cast<std::size_t>(n), 0);
        const auto feats = clustering_features(data);
        std::vector<double> center(kFeatureDim, 0.0);
        for (const auto& f : feats)
            for (std::size_t j = 0; j < kFeatureDim; ++j) center[j] += f[j];
        for (double& v : center) v /= n;
        for (const auto& f : feats) out.within_cluster_sse += sq_dist(f, center);
        return out;
    }

    const auto feats = clustering_features(data);
    if (method == ClusterMethod::ward) {
        out.labels = canonical_labels(ward_cluster(feats, k), k);
        return out;
    }

    if (restarts < 1) throw std::invalid_argument("cluster_days: restarts must be >= 1");
    KmeansResult best;
    // ties between restarts fall to the lowest restart index
    for (int r = 0; r < restarts; ++r) {
        stochastic::Rng rng(stochastic::derive_seed(seed, static_cast<std::uint64_t>(r)));
        KmeansResult res = kmeans_once(feats, k, rng);
        if (res.sse < best.sse) best = std::move(res);
    }
    out.labels = canonical_labels(best.labels, k);
    out.within_cluster_sse = best.sse;
    return out;
}

DayProfile select_representative(const DailySeriesMatrix& data,
                                 std::span<const int> member_days,
                                 RepresentativeMode mode) {
    if (member_days.empty())
        throw std::invalid_argument("select_representative: empty cluster");
    if (mode == RepresentativeMode::centroid) {
        DayProfile mean{};
        for (int d : member_days) {
            const auto& day = data.days[static_cast<std::size_t>(d)];
            for (std::size_t k = 0; k < 4; ++k)
                for (int h = 0; h < kHoursPerDay; ++h)
                    mean.values[k][static_cast<std::size_t>(h)] +=
                        day.values[k][static_cast<std::size_t>(h)];
        }
        const double n = static_cast<double>(member_days.size());
        for (auto& kind : mean.values)
            for (double& v : kind) v /= n;
        return mean;
    }
    // medoid: member minimising summed distance to the others, ties to the
    // lowest day index; distances in the normalised clustering feature space
    const auto feats = clustering_features(data);
    int best = member_days[0];
    double best_sum = std::numeric_limits<double>::infinity();
    for (int cand : member_days) {
        double sum = 0.0;
        for (int other : member_days)
            sum += std::sqrt(sq_dist(feats[static_cast<std::size_t>(cand)],
                                     feats[static_cast<std::size_t>(other)]));
        if (sum < best_sum) {
            best_sum = sum;
            best = cand;
        }
    }
    return data.days[static_cast<std::size_t>(best)];
}

std::vector<double> cluster_weights(const ClusterAssignment& assignment) {
    std::vector<int> counts(static_cast<std::size_t>(assignment.k), 0);
    for (int label : assignment.labels) ++counts[static_cast<std::size_t>(label)];
    std::vector<double> w(counts.size());
    const double n = static_cast<double>(assignment.labels.size());
    for (std::size_t i = 0; i < counts.size(); ++i) w[i] = counts[i] / n;
    return w;
}

RepresentativeYear assemble_representative_year(std::span<const DayProfile> reps,
                                                std::span<const int> member_counts,
                                                int source_day_count) {
    if (reps.size() != member_counts.size())
        throw std::invalid_argument("assemble_representative_year: size mismatch");
    RepresentativeYear year;
    year.source_day_count = source_day_count;
    year.total_member_count = 0;
    for (int c : member_counts) {
        if (c < 1)
            throw std::invalid_argument("assemble_representative_year: empty cluster");
        year.total_member_count += c;
    }
    const double total = static_cast<double>(year.total_member_count);
    for (std::size_t i = 0; i < reps.size(); ++i)
        year.rep_days.push_back({reps[i], member_counts[i] / total, member_counts[i]});
    return year;
}

RepresentativeYear assemble_representative_year(std::span<const DayProfile> reps,
                                                std::span<const double> weights,
                                                int source_day_count) {
    if (reps.size() != weights.size())
        throw std::invalid_argument("assemble_representative_year: size mismatch");
    RepresentativeYear year;
    year.source_day_count = source_day_count;
    year.total_member_count = 0;
    for (std::size_t i = 0; i < reps.size(); ++i)
        year.rep_days.push_back({reps[i], weights[i], 0});
    return year;
}

RepresentativeYear build_representative_year(const DailySeriesMatrix& data, int k,
                                             ClusterMethod method, RepresentativeMode mode,
                                             int restarts, std::uint64_t seed) {
    const auto assignment = cluster_days(data, k, method, restarts, seed);
    std::vector<std::vector<int>> members(static_cast<std::size_t>(k));
    for (std::size_t d = 0; d < assignment.labels.size(); ++d)
        members[static_cast<std::size_t>(assignment.labels[d])].push_back(
            static_cast<int>(d));
    std::vector<DayProfile> reps;
    std::vector<int> counts;
    for (const auto& m : members) {
        reps.push_back(select_representative(data, m, mode));
        counts.push_back(static_cast<int>(m.size()));
    }
    return assemble_representative_year(reps, std::span<const int>(counts),
                                        data.day_count());
}

DurationCurve duration_curve(std::span<const double> values,
                             std::span<const double> durations) {
    if (values.size() != durations.size())
        throw std::invalid_argument("duration_curve: size mismatch");
    for (double d : durations)
        if (!(d > 0.0)) throw std::invalid_argument("duration_curve: durations must be > 0");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    DurationCurve dc;
    for (std::size_t idx : order) {
        if (!dc.values.empty() && dc.values.back() == values[idx]) {
            dc.duration_hours.back() += durations[idx];  // merge exact ties
        } else {
            dc.values.push_back(values[idx]);
            dc.duration_hours.push_back(durations[idx]);
        }
    }
    return dc;
}

WeightedSeries observed_series(const DailySeriesMatrix& data, SeriesKind k) {
    WeightedSeries s;
    s.values.reserve(data.days.size() * kHoursPerDay);
    for (const auto& day : data.days)
        for (double v : day.series(k)) s.values.push_back(v);
    s.durations.assign(s.values.size(), 1.0);
    return s;
}

WeightedSeries approximated_series(const RepresentativeYear& year, SeriesKind k) {
    WeightedSeries s;
    for (std::size_t i = 0; i < year.rep_days.size(); ++i) {
        const double dur = year.slot_duration_hours(i);
        for (double v : year.rep_days[i].profile.series(k)) {
            s.values.push_back(v);
            s.durations.push_back(dur);
        }
    }
    return s;
}

double ree_av(std::span<const DurationCurve> observed, std::span<const DurationCurve> approx) {
    if (observed.size() != approx.size() || observed.empty())
        throw std::invalid_argument("ree_av: mismatched series sets");
    double total = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double eo = observed[i].energy();
        if (eo == 0.0) throw std::domain_error("ree_av: zero observed energy");
        total += std::abs(eo - approx[i].energy()) / eo;
    }
    return total / static_cast<double>(observed.size());
}

double nrmse_av(std::span<const DurationCurve> observed,
                std::span<const DurationCurve> approx) {
    if (observed.size() != approx.size() || observed.empty())
        throw std::invalid_argument("nrmse_av: mismatched series sets");
    constexpr int kGrid = 1000;  // common duration-quantile grid
    double total = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const auto [mn, mx] = std::minmax_element(observed[i].values.begin(),
                                                  observed[i].values.end());
        const double range = *mx - *mn;
        if (!(range > 0.0)) throw std::domain_error("nrmse_av: constant observed curve");
        const double span_o = observed[i].total_duration();
        const double span_a = approx[i].total_duration();
        double sse = 0.0;
        for (int g = 0; g < kGrid; ++g) {
            const double q = (g + 0.5) / kGrid;
            const double diff =
                observed[i].value_at(q * span_o) - approx[i].value_at(q * span_a);
            sse += diff * diff;
        }
        total += std::sqrt(sse / kGrid) / range;
    }
    return total / static_cast<double>(observed.size());
}

double pearson(const WeightedSeries& a, const WeightedSeries& b) {
    if (a.values.size() != b.values.size() || a.values.empty())
        throw std::invalid_argument("pearson: mismatched series");
    const double ma = weighted_mean(a);
    const double mb = weighted_mean(b);
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double w = a.durations[i];
        const double da = a.values[i] - ma;
        const double db = b.values[i] - mb;
        cov += w * da * db;
        va += w * da * da;
        vb += w * db * db;
    }
    if (!(va > 0.0) || !(vb > 0.0))
        throw std::domain_error("pearson: constant series has no correlation");
    return cov / std::sqrt(va * vb);
}

double ce_av(std::span<const WeightedSeries> observed, std::span<const WeightedSeries> approx) {
    if (observed.size() != approx.size())
        throw std::invalid_argument("ce_av: mismatched series sets");
    const std::size_t p = observed.size();
    if (p < 2) throw std::invalid_argument("ce_av: need at least two series");
    double total = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            total += std::abs(pearson(observed[i], observed[j]) -
                              pearson(approx[i], approx[j]));
        }
    }
    const double np = static_cast<double>(p);
    return 2.0 / (np * (np - 1.0)) * total;
}

ApproximationMetrics evaluate_approximation(const DailySeriesMatrix& data,
                                            const RepresentativeYear& year) {
    std::vector<DurationCurve> obs_dc, app_dc;
    std::vector<WeightedSeries> obs_ws, app_ws;
    for (SeriesKind k : kAllSeries) {
        obs_ws.push_back(observed_series(data, k));
        app_ws.push_back(approximated_series(year, k));
        obs_dc.push_back(duration_curve(obs_ws.back().values, obs_ws.back().durations));
        app_dc.push_back(duration_curve(app_ws.back().values, app_ws.back().durations));
    }
    ApproximationMetrics m;
    m.ree = ree_av(obs_dc, app_dc);
    m.nrmse = nrmse_av(obs_dc, app_dc);
    m.ce = ce_av(obs_ws, app_ws);
    return m;
}

}  // namespace elecmarket::temporal
