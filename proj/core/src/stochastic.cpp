#include "elecmarket/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

namespace elecmarket::stochastic {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t Rng::uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be > 0");
    // rejection sampling removes modulo bias
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double Rng::gaussian(double mean, double std) {
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * std::numbers::pi * u2);
    return mean + std * z;
}

double Rng::gamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0))
        throw std::invalid_argument("gamma: shape and scale must be > 0");
    if (shape < 1.0) {
        // boost to shape >= 1, then apply the standard power correction
        const double u = uniform01();
        return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = gaussian(0.0, 1.0);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
            return d * v * scale;
    }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(splitmix64(master) ^ splitmix64(stream * 0x2545f4914f6cdd1dULL + 1));
}

std::uint64_t hash_bytes(std::uint64_t seed, std::span<const double> values) {
    std::uint64_t h = splitmix64(seed);
    for (double v : values) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        h = splitmix64(h ^ bits);
    }
    return h;
}

double draw(const SamplerSpec& sampler, Rng& rng) {
    switch (sampler.family) {
        case SamplerSpec::Family::none:
            return sampler.mean;
        case SamplerSpec::Family::gaussian:
            return rng.gaussian(sampler.mean, sampler.std);
        case SamplerSpec::Family::uniform_multiplier:
            return sampler.mean * rng.uniform(sampler.lo, sampler.hi);
    }
    return sampler.mean;
}

const char* to_string(DistFamily f) {
    switch (f) {
        case DistFamily::normal: return "normal";
        case DistFamily::lognormal: return "lognormal";
        case DistFamily::gamma: return "gamma";
        case DistFamily::uniform: return "uniform";
    }
    return "?";
}

double ResidualDistribution::sample(Rng& rng) const {
    switch (family) {
        case DistFamily::normal:
            return rng.gaussian(p1, p2);
        case DistFamily::lognormal:
            return std::exp(rng.gaussian(p1, p2));
        case DistFamily::gamma:
            return rng.gamma(p1, p2);
        case DistFamily::uniform:
            return rng.uniform(p1, p2);
    }
    return 0.0;
}

double ResidualDistribution::density(double x) const {
    constexpr double inv_sqrt_2pi = 0.3989422804014327;
    switch (family) {
        case DistFamily::normal: {
            if (!(p2 > 0.0)) return 0.0;
            const double z = (x - p1) / p2;
            return inv_sqrt_2pi / p2 * std::exp(-0.5 * z * z);
        }
        case DistFamily::lognormal: {
            if (!(x > 0.0) || !(p2 > 0.0)) return 0.0;
            const double z = (std::log(x) - p1) / p2;
            return inv_sqrt_2pi / (x * p2) * std::exp(-0.5 * z * z);
        }
        case DistFamily::gamma: {
            if (!(x > 0.0) || !(p1 > 0.0) || !(p2 > 0.0)) return 0.0;
            return std::exp((p1 - 1.0) * std::log(x) - x / p2 -
                            std::lgamma(p1) - p1 * std::log(p2));
        }
        case DistFamily::uniform:
            return (x >= p1 && x <= p2 && p2 > p1) ? 1.0 / (p2 - p1) : 0.0;
    }
    return 0.0;
}

ResidualDistribution fit_residual_distribution(std::span<const double> residuals,
                                               std::span<const DistFamily> families) {
    if (residuals.size() < 30)
        throw std::invalid_argument("fit_residual_distribution: need at least 30 residuals");
    if (families.empty())
        throw std::invalid_argument("fit_residual_distribution: no candidate families");

    const auto [min_it, max_it] = std::minmax_element(residuals.begin(), residuals.end());
    const double lo = *min_it, hi = *max_it;
    if (!(hi > lo))
        throw std::invalid_argument("fit_residual_distribution: degenerate all-equal residuals");

    const double n = static_cast<double>(residuals.size());
    double mean = 0.0;
    for (double r : residuals) mean += r;
    mean /= n;
    double var = 0.0;
    for (double r : residuals) var += (r - mean) * (r - mean);
    var /= n;

    // empirical density over a fixed 50-bin histogram
    constexpr int kBins = 50;
    const double width = (hi - lo) / kBins;
    std::vector<double> density(kBins, 0.0);
    for (double r : residuals) {
        int b = static_cast<int>((r - lo) / width);
        if (b == kBins) b = kBins - 1;
        density[static_cast<std::size_t>(b)] += 1.0;
    }
    for (double& d : density) d /= n * width;

    bool all_positive = lo > 0.0;
    double log_mean = 0.0, log_var = 0.0;
    if (all_positive) {
        for (double r : residuals) log_mean += std::log(r);
        log_mean /= n;
        for (double r : residuals) {
            const double d = std::log(r) - log_mean;
            log_var += d * d;
        }
        log_var /= n;
    }

    bool found = false;
    ResidualDistribution best;
    for (DistFamily f : families) {
        ResidualDistribution cand;
        cand.family = f;
        switch (f) {
            case DistFamily::normal:
                cand.p1 = mean;
                cand.p2 = std::sqrt(var);
                break;
            case DistFamily::lognormal:
                if (!all_positive) continue;
                cand.p1 = log_mean;
                cand.p2 = std::sqrt(log_var);
                break;
            case DistFamily::gamma:
                if (!all_positive || !(var > 0.0)) continue;
                cand.p1 = mean * mean / var;  // shape, method of moments
                cand.p2 = var / mean;         // scale
                break;
            case DistFamily::uniform:
                cand.p1 = lo;
                cand.p2 = hi;
                break;
        }
        double sse = 0.0;
        for (int b = 0; b < kBins; ++b) {
            const double center = lo + (b + 0.5) * width;
            const double diff = density[static_cast<std::size_t>(b)] - cand.density(center);
            sse += diff * diff;
        }
        cand.sse_fit_score = sse;
        if (!found || sse < best.sse_fit_score) {
            best = cand;
            found = true;
        }
    }
    if (!found)
        throw std::invalid_argument("fit_residual_distribution: no family fits the data");
    return best;
}

double perturb_demand(double demand_mw, const ResidualDistribution& dist, Rng& rng) {
    return std::max(0.0, demand_mw + dist.sample(rng));
}

}  // namespace elecmarket::stochastic
