#ifndef ELECMARKET_DOMAIN_HPP
#define ELECMARKET_DOMAIN_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace elecmarket {

enum class Technology {
    ccgt,
    coal,
    nuclear,
    onshore_wind,
    offshore_wind,
    solar_pv,
    recip_gas,
    hydro,
    other,
};

const char* to_string(Technology t);
Technology technology_from_string(const std::string& s);
bool default_intermittent(Technology t);

// Thrown when a scenario entity violates its declared invariants. Carries the
// offending field so the CLI can point at it.
class validation_error : public std::runtime_error {
public:
    validation_error(std::string entity, std::string field, std::string what)
        : std::runtime_error(entity + "." + field + ": " + what),
          entity_(std::move(entity)), field_(std::move(field)) {}
    const std::string& entity() const { return entity_; }
    const std::string& field() const { return field_; }

private:
    std::string entity_;
    std::string field_;
};

struct FuelType {
    std::string name;
    std::vector<double> price_per_mwh_thermal;  // one entry per simulation year
    double emission_factor = 0.0;               // tCO2 per MWh-electric
    double price_noise_std = 0.0;               // std of yearly Gaussian purchase noise

    double price_at(int year_offset) const;
    void validate() const;
};

struct PowerPlant {
    std::string id;
    Technology technology = Technology::other;
    double capacity_mw = 0.0;
    double efficiency = 1.0;           // 0 < eta <= 1
    int operating_period_yr = 25;      // OP
    int predev_period_yr = 0;          // P_D
    double predev_cost = 0.0;          // P_C, per MW
    int construction_period_yr = 0;    // C_D
    double construction_cost = 0.0;    // C_C, per MW
    double infrastructure_cost = 0.0;  // I_C, absolute
    double fixed_om = 0.0;             // F_C, per MW per year
    double variable_om = 0.0;          // V_C, per MWh
    double availability = 1.0;         // A
    std::string fuel;                  // FuelType name; "none" for fuel-free plants
    double emission_factor = 0.0;      // copied from the fuel at load
    int commission_year = 0;
    bool is_intermittent = false;

    // Total capital outlay: per-MW predevelopment and construction plus the
    // absolute grid-connection cost.
    double capital_cost() const {
        return (predev_cost + construction_cost) * capacity_mw + infrastructure_cost;
    }
    int lifetime_years() const {
        return predev_period_yr + construction_period_yr + operating_period_yr;
    }
    bool operating_in(int year) const {
        return year >= commission_year && year < commission_year + operating_period_yr;
    }
    void validate() const;
};

// A fixed-payment loan raised against the non-downpayment share of a plant's
// capital cost.
struct Loan {
    double annual_payment = 0.0;
    int first_year = 0;
    int last_year = 0;  // inclusive
    double payment_in(int year) const {
        return (year >= first_year && year <= last_year) ? annual_payment : 0.0;
    }
};

enum class BiddingStrategy { srmc, learned };

struct GenCo {
    std::string name;
    double cash = 0.0;
    std::vector<PowerPlant> plants;
    double wacc_mean = 0.059;
    double wacc_std = 0.0;
    int forecast_window_yr = 10;
    double down_payment_fraction = 0.25;
    BiddingStrategy strategy = BiddingStrategy::srmc;
    std::vector<Loan> loans;

    void validate() const;
};

struct CarbonTaxSchedule {
    std::vector<double> prices;  // per simulation year, £/tCO2

    // Clamps to the last known value beyond the series end.
    double at(int year_offset) const;
    void validate(double lo = 0.0, double hi = 250.0) const;
};

enum class TemporalMode { ldc20, representative_days };

struct SamplerToggles {
    bool wacc = false;
    bool variable_om = false;
    bool fuel = false;
    double vc_lo = 0.3;  // uniform V_C multiplier bounds
    double vc_hi = 2.0;

    bool any() const { return wacc || variable_om || fuel; }
};

struct PpdcSpec {
    bool endogenous = false;
    double m = 0.0;
    double c = 0.0;
    std::vector<std::pair<double, double>> per_year;  // optional (m_y, c_y) set
    double sigma_m = 0.0;
    double sigma_c = 0.0;
};

struct ScenarioConfig {
    std::string name;
    int start_year = 2018;
    int horizon_yr = 1;
    double demand_growth_per_yr = 0.0;
    TemporalMode temporal_mode = TemporalMode::ldc20;
    int representative_k = 8;
    double nuclear_subsidy_per_mwh = 0.0;  // S_n
    double nuclear_wacc_mean = 0.10;
    double lost_load_price = 6000.0;
    std::optional<double> market_cap;
    std::optional<double> base_carbon_intensity;  // tCO2/MWh reference for the index
    std::uint64_t seed = 0;
    SamplerToggles samplers;

    void validate() const;
};

// Short-run marginal cost of one extra MWh: fuel divided by thermal
// efficiency, emitted carbon priced at the tax, plus variable O&M. Capital
// and fixed costs are excluded.
double srmc(const PowerPlant& plant, double fuel_price, double carbon_price);

// Scales every load segment by (1 + factor); the profile shape is preserved.
std::vector<double> apply_demand_growth(const std::vector<double>& segments_mw, double factor);

}  // namespace elecmarket

#endif
