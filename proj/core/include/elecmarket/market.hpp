#ifndef ELECMARKET_MARKET_HPP
#define ELECMARKET_MARKET_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "elecmarket/domain.hpp"

namespace elecmarket::market {

// One simulation time step: a load level with its duration and the capacity
// factors intermittent plants see in it.
struct TimeStep {
    int index = 0;
    double duration_h = 1.0;
    double demand_mw = 0.0;
    double cf_onshore = 0.0;
    double cf_offshore = 0.0;
    double cf_solar = 0.0;
    int hour_of_day = 0;  // 0..23 in representative-day mode, 0 otherwise
};

struct Bid {
    std::string plant_id;
    std::string genco_id;
    double price = 0.0;      // £/MWh
    double quantity_mw = 0.0;
};

// Builds a bid with the market-cap invariant applied at submission time.
Bid submit_bid(std::string plant_id, std::string genco_id, double price, double quantity_mw,
               std::optional<double> cap);

struct Dispatch {
    std::string plant_id;
    double dispatched_mw = 0.0;
};

struct ClearingResult {
    int step = 0;
    double demand_mw = 0.0;
    std::vector<Dispatch> accepted;
    double clearing_price = 0.0;
    double lost_load_mw = 0.0;

    double dispatched_total() const;
};

// Uniform-price merit-order clearing. Bids are accepted cheapest first (ties
// in stable plant-id order), the marginal bid is partially dispatched, and
// every accepted MWh is paid the price of the most expensive accepted bid.
// Unmet demand is priced at lost load.
ClearingResult clear_step(std::vector<Bid> bids, double demand_mw, double lost_load_price,
                          std::optional<double> cap = std::nullopt, int step_index = 0);

// MW a plant can offer in a step: capacity times the step's capacity factor
// for intermittents, capacity times availability otherwise.
double available_quantity(const PowerPlant& plant, const TimeStep& step);

struct GencoAccount {
    double market_income = 0.0;
    double fixed_costs = 0.0;
    double loan_payments = 0.0;
    double subsidy_income = 0.0;
    double cash_end = 0.0;
    bool negative_cash = false;
};

struct TechTotals {
    double mwh = 0.0;
    double tco2 = 0.0;
};

struct YearLedger {
    int year = 0;
    std::map<std::string, GencoAccount> gencos;
    std::map<Technology, TechTotals> tech;
    double avg_price = 0.0;  // demand-weighted, £/MWh
    double lost_load_mwh = 0.0;

    double total_mwh() const;
    double total_tco2() const;
    // tCO2 per MWh dispatched; 0 for an empty year.
    double carbon_intensity() const;
    // Percentage share of generation per technology.
    std::map<Technology, double> mix_shares() const;
};

// Settles one simulated year: pays cleared energy at the clearing price, adds
// the per-MWh nuclear subsidy, charges fixed O&M and loan annuities, and
// updates GenCo cash. Clearings and steps must be index-aligned.
YearLedger settle_year(int year, std::span<const ClearingResult> clearings,
                       std::span<const TimeStep> steps, std::vector<GenCo>& gencos,
                       double nuclear_subsidy_per_mwh);

// Year's tCO2/MWh as an index against a base intensity (base = 100).
double relative_carbon_intensity(const YearLedger& ledger, double base_intensity);

// Fixed-payment annuity for principal L over n years at rate i.
double annuity_payment(double principal, double rate, int years);

}  // namespace elecmarket::market

#endif
