#ifndef ELECMARKET_STOCHASTIC_HPP
#define ELECMARKET_STOCHASTIC_HPP

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace elecmarket::stochastic {

// Seeded generator with hand-rolled variate transforms. std::mt19937_64 output
// is pinned by the standard, and the transforms below avoid the library
// distributions whose streams are implementation-defined, so equal seeds give
// bit-equal draw sequences on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform in [0, n).
    std::uint64_t uniform_index(std::uint64_t n);

    // Box-Muller, cosine branch only: a fixed two draws per variate.
    double gaussian(double mean, double std);

    // Marsaglia-Tsang; draw count is data dependent but deterministic per seed.
    double gamma(double shape, double scale);

private:
    std::mt19937_64 engine_;
};

// Stable derivation of independent substreams from (master seed, stream id).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);
std::uint64_t hash_bytes(std::uint64_t seed, std::span<const double> values);

struct SamplerSpec {
    enum class Family { none, gaussian, uniform_multiplier };
    Family family = Family::none;
    double mean = 0.0;
    double std = 0.0;   // gaussian only
    double lo = 0.3;    // uniform-multiplier bounds, as fractions of mean
    double hi = 2.0;
};

double draw(const SamplerSpec& sampler, Rng& rng);

enum class DistFamily { normal, lognormal, gamma, uniform };

const char* to_string(DistFamily f);

struct ResidualDistribution {
    DistFamily family = DistFamily::normal;
    double p1 = 0.0;  // normal/lognormal: mu; gamma: shape; uniform: lo
    double p2 = 1.0;  // normal/lognormal: sigma; gamma: scale; uniform: hi
    double sse_fit_score = 0.0;

    double sample(Rng& rng) const;
    double density(double x) const;
};

// Fits each candidate family and keeps the one whose density has the lowest
// SSE against a 50-bin histogram of the residuals. Ties fall to declaration
// order. Families that cannot represent the data (lognormal/gamma with
// non-positive residuals) are skipped.
ResidualDistribution fit_residual_distribution(std::span<const double> residuals,
                                               std::span<const DistFamily> families);

// Demand plus one residual draw, floored at zero.
double perturb_demand(double demand_mw, const ResidualDistribution& dist, Rng& rng);

}  // namespace elecmarket::stochastic

#endif
