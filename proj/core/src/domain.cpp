#include "elecmarket/domain.hpp"

#include <algorithm>
#include <array>

namespace elecmarket {

namespace {

constexpr std::array<const char*, 9> kTechNames = {
    "ccgt", "coal", "nuclear", "onshore_wind", "offshore_wind",
    "solar_pv", "recip_gas", "hydro", "other",
};

}  // namespace

const char* to_string(Technology t) { return kTechNames[static_cast<int>(t)]; }

Technology technology_from_string(const std::string& s) {
    for (std::size_t i = 0; i < kTechNames.size(); ++i) {
        if (s == kTechNames[i]) return static_cast<Technology>(i);
    }
    throw validation_error("plant", "technology", "unknown technology '" + s + "'");
}

bool default_intermittent(Technology t) {
    return t == Technology::onshore_wind || t == Technology::offshore_wind ||
           t == Technology::solar_pv;
}

double FuelType::price_at(int year_offset) const {
    if (price_per_mwh_thermal.empty()) return 0.0;
    if (year_offset < 0) year_offset = 0;
    auto i = static_cast<std::size_t>(year_offset);
    if (i >= price_per_mwh_thermal.size()) i = price_per_mwh_thermal.size() - 1;
    return price_per_mwh_thermal[i];
}

void FuelType::validate() const {
    if (name.empty()) throw validation_error("fuel", "name", "must not be empty");
    if (emission_factor < 0.0)
        throw validation_error("fuel " + name, "emission_factor", "must be >= 0");
    if (price_noise_std < 0.0)
        throw validation_error("fuel " + name, "price_noise_std", "must be >= 0");
}

void PowerPlant::validate() const {
    const std::string ent = "plant " + (id.empty() ? std::string("<unnamed>") : id);
    if (id.empty()) throw validation_error(ent, "id", "must not be empty");
    if (!(capacity_mw > 0.0)) throw validation_error(ent, "capacity_mw", "must be > 0");
    if (!(efficiency > 0.0 && efficiency <= 1.0))
        throw validation_error(ent, "efficiency", "must be in (0, 1]");
    if (operating_period_yr < 1)
        throw validation_error(ent, "operating_period_yr", "must be >= 1");
    if (predev_period_yr < 0)
        throw validation_error(ent, "predev_period_yr", "must be >= 0");
    if (construction_period_yr < 0)
        throw validation_error(ent, "construction_period_yr", "must be >= 0");
    for (auto [v, f] : {std::pair{predev_cost, "predev_cost"},
                        {construction_cost, "construction_cost"},
                        {infrastructure_cost, "infrastructure_cost"},
                        {fixed_om, "fixed_om"},
                        {variable_om, "variable_om"}}) {
        if (v < 0.0) throw validation_error(ent, f, "must be >= 0");
    }
    if (!(availability >= 0.0 && availability <= 1.0))
        throw validation_error(ent, "availability", "must be in [0, 1]");
    if (emission_factor < 0.0)
        throw validation_error(ent, "emission_factor", "must be >= 0");
}

void GenCo::validate() const {
    const std::string ent = "genco " + name;
    if (name.empty()) throw validation_error("genco", "name", "must not be empty");
    if (!(down_payment_fraction >= 0.0 && down_payment_fraction <= 1.0))
        throw validation_error(ent, "down_payment_fraction", "must be in [0, 1]");
    if (wacc_std < 0.0) throw validation_error(ent, "wacc_std", "must be >= 0");
    if (forecast_window_yr < 2)
        throw validation_error(ent, "forecast_window_yr", "must be >= 2");
    for (const auto& p : plants) p.validate();
}

double CarbonTaxSchedule::at(int year_offset) const {
    if (prices.empty()) return 0.0;
    if (year_offset < 0) year_offset = 0;
    auto i = static_cast<std::size_t>(year_offset);
    if (i >= prices.size()) i = prices.size() - 1;
    return prices[i];
}

void CarbonTaxSchedule::validate(double lo, double hi) const {
    for (double p : prices) {
        if (p < lo || p > hi)
            throw validation_error("carbon_tax", "prices",
                                   "price " + std::to_string(p) + " outside [" +
                                       std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
}

void ScenarioConfig::validate() const {
    if (horizon_yr < 1) throw validation_error("scenario", "horizon_yr", "must be >= 1");
    if (demand_growth_per_yr <= -1.0)
        throw validation_error("scenario", "demand_growth_per_yr", "must be > -1");
    if (!(lost_load_price > 0.0))
        throw validation_error("scenario", "lost_load_price", "must be > 0");
    if (market_cap && !(*market_cap > 0.0))
        throw validation_error("scenario", "market_cap", "must be > 0 when set");
    if (temporal_mode == TemporalMode::representative_days && representative_k < 1)
        throw validation_error("scenario", "representative_k", "must be >= 1");
}

double srmc(const PowerPlant& plant, double fuel_price, double carbon_price) {
    double fuel_component = 0.0;
    if (fuel_price != 0.0) {
        if (!(plant.efficiency > 0.0))
            throw validation_error("plant " + plant.id, "efficiency",
                                   "fuel-burning plant with zero efficiency");
        fuel_component = fuel_price / plant.efficiency;
    }
    return fuel_component + plant.emission_factor * carbon_price + plant.variable_om;
}

std::vector<double> apply_demand_growth(const std::vector<double>& segments_mw, double factor) {
    if (factor <= -1.0)
        throw std::invalid_argument("demand growth factor must be > -1");
    std::vector<double> out(segments_mw.size());
    std::transform(segments_mw.begin(), segments_mw.end(), out.begin(),
                   [factor](double v) { return v * (1.0 + factor); });
    return out;
}

}  // namespace elecmarket
