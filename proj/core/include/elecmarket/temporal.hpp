#ifndef ELECMARKET_TEMPORAL_HPP
#define ELECMARKET_TEMPORAL_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace elecmarket::temporal {

inline constexpr int kHoursPerDay = 24;

enum class SeriesKind { demand_mw, onshore_cf, offshore_cf, solar_cf };
inline constexpr std::array<SeriesKind, 4> kAllSeries = {
    SeriesKind::demand_mw, SeriesKind::onshore_cf,
    SeriesKind::offshore_cf, SeriesKind::solar_cf};
const char* to_string(SeriesKind k);

// One day of hourly values for every series kind.
struct DayProfile {
    std::array<std::array<double, kHoursPerDay>, 4> values{};  // [kind][hour]

    std::span<const double> series(SeriesKind k) const {
        return values[static_cast<std::size_t>(k)];
    }
    std::span<double> series(SeriesKind k) {
        return values[static_cast<std::size_t>(k)];
    }
};

struct DailySeriesMatrix {
    std::vector<DayProfile> days;

    int day_count() const { return static_cast<int>(days.size()); }
    void validate() const;
};

struct RepresentativeDay {
    DayProfile profile;
    double weight = 0.0;  // n_i / ||N||
    int member_count = 0; // n_i
};

struct RepresentativeYear {
    std::vector<RepresentativeDay> rep_days;
    int source_day_count = 0;    // ||N||
    int total_member_count = 0;  // sum of n_i; 0 when built from raw weights

    // Hours each hour-slot of rep day i stands for: w_i * source_day_count.
    // Computed from the integer member counts when available so a full year
    // sums to exactly 24 * source_day_count.
    double slot_duration_hours(std::size_t i) const;
    double total_hours() const;
};

struct DurationCurve {
    std::vector<double> values;          // strictly decreasing after tie merging
    std::vector<double> duration_hours;  // per value

    double total_duration() const;
    double energy() const;  // sum of value * duration
    // Step-function lookup by cumulative duration from the top of the curve.
    double value_at(double cumulative_hours) const;
};

enum class ClusterMethod { kmeans, ward };
enum class RepresentativeMode { medoid, centroid };

struct ClusterAssignment {
    std::vector<int> labels;      // per day, 0..k-1; every cluster non-empty
    int k = 0;
    double within_cluster_sse = 0.0;
};

// Feature vectors for clustering: the 24-hour profiles of all series kinds
// concatenated per day, each kind min-max normalised over the whole dataset so
// MW-scale demand does not dominate the capacity factors.
std::vector<std::vector<double>> clustering_features(const DailySeriesMatrix& data);

ClusterAssignment cluster_days(const DailySeriesMatrix& data, int k, ClusterMethod method,
                               int restarts, std::uint64_t seed);

DayProfile select_representative(const DailySeriesMatrix& data,
                                 std::span<const int> member_days, RepresentativeMode mode);

std::vector<double> cluster_weights(const ClusterAssignment& assignment);

RepresentativeYear assemble_representative_year(std::span<const DayProfile> reps,
                                                std::span<const int> member_counts,
                                                int source_day_count);
RepresentativeYear assemble_representative_year(std::span<const DayProfile> reps,
                                                std::span<const double> weights,
                                                int source_day_count);

// Convenience pipeline: cluster, pick representatives, assemble.
RepresentativeYear build_representative_year(const DailySeriesMatrix& data, int k,
                                             ClusterMethod method, RepresentativeMode mode,
                                             int restarts, std::uint64_t seed);

DurationCurve duration_curve(std::span<const double> values, std::span<const double> durations);

// Weighted series as (value, duration) pairs; the building block the error
// metrics share.
struct WeightedSeries {
    std::vector<double> values;
    std::vector<double> durations;
};

WeightedSeries observed_series(const DailySeriesMatrix& data, SeriesKind k);
WeightedSeries approximated_series(const RepresentativeYear& year, SeriesKind k);

double ree_av(std::span<const DurationCurve> observed, std::span<const DurationCurve> approx);
double nrmse_av(std::span<const DurationCurve> observed, std::span<const DurationCurve> approx);

double pearson(const WeightedSeries& a, const WeightedSeries& b);
double ce_av(std::span<const WeightedSeries> observed, std::span<const WeightedSeries> approx);

struct ApproximationMetrics {
    double ree = 0.0;
    double nrmse = 0.0;
    double ce = 0.0;
};

ApproximationMetrics evaluate_approximation(const DailySeriesMatrix& data,
                                            const RepresentativeYear& year);

}  // namespace elecmarket::temporal

#endif
