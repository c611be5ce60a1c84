#include "elecmarket/market.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elecmarket::market {

Bid submit_bid(std::string plant_id, std::string genco_id, double price, double quantity_mw,
               std::optional<double> cap) {
    if (quantity_mw < 0.0)
        throw std::invalid_argument("bid " + plant_id + ": negative quantity");
    if (cap) price = std::min(price, *cap);
    return Bid{std::move(plant_id), std::move(genco_id), price, quantity_mw};
}

double ClearingResult::dispatched_total() const {
    double t = 0.0;
    for (const auto& d : accepted) t += d.dispatched_mw;
    return t;
}

ClearingResult clear_step(std::vector<Bid> bids, double demand_mw, double lost_load_price,
                          std::optional<double> cap, int step_index) {
    if (demand_mw < 0.0) throw std::invalid_argument("clear_step: negative demand");
    for (const auto& b : bids) {
        if (b.quantity_mw < 0.0)
            throw std::invalid_argument("clear_step: bid " + b.plant_id +
                                        " has negative quantity");
        if (cap && b.price > *cap)
            throw std::invalid_argument("clear_step: bid " + b.plant_id +
                                        " exceeds the market cap");
    }

    ClearingResult res;
    res.step = step_index;
    res.demand_mw = demand_mw;
    if (demand_mw == 0.0) return res;

    std::stable_sort(bids.begin(), bids.end(), [](const Bid& a, const Bid& b) {
        if (a.price != b.price) return a.price < b.price;
        return a.plant_id < b.plant_id;
    });

    double remaining = demand_mw;
    double marginal_price = 0.0;
    for (const auto& b : bids) {
        if (remaining <= 0.0) break;
        const double take = std::min(b.quantity_mw, remaining);
        if (take <= 0.0) continue;
        res.accepted.push_back({b.plant_id, take});
        remaining -= take;
        marginal_price = b.price;
    }
    if (remaining > 0.0) {
        res.lost_load_mw = remaining;
        res.clearing_price = lost_load_price;
    } else {
        res.clearing_price = marginal_price;
    }
    return res;
}

double available_quantity(const PowerPlant& plant, const TimeStep& step) {
    if (plant.is_intermittent) {
        switch (plant.technology) {
            case Technology::onshore_wind: return plant.capacity_mw * step.cf_onshore;
            case Technology::offshore_wind: return plant.capacity_mw * step.cf_offshore;
            case Technology::solar_pv: return plant.capacity_mw * step.cf_solar;
            default: break;
        }
    }
    return plant.capacity_mw * plant.availability;
}

double YearLedger::total_mwh() const {
    double t = 0.0;
    for (const auto& [_, v] : tech) t += v.mwh;
    return t;
}

double YearLedger::total_tco2() const {
    double t = 0.0;
    for (const auto& [_, v] : tech) t += v.tco2;
    return t;
}

double YearLedger::carbon_intensity() const {
    const double mwh = total_mwh();
    return mwh > 0.0 ? total_tco2() / mwh : 0.0;
}

std::map<Technology, double> YearLedger::mix_shares() const {
    std::map<Technology, double> shares;
    const double total = total_mwh();
    for (const auto& [t, v] : tech)
        shares[t] = total > 0.0 ? 100.0 * v.mwh / total : 0.0;
    return shares;
}

YearLedger settle_year(int year, std::span<const ClearingResult> clearings,
                       std::span<const TimeStep> steps, std::vector<GenCo>& gencos,
                       double nuclear_subsidy_per_mwh) {
    if (clearings.size() != steps.size())
        throw std::invalid_argument("settle_year: clearings and steps misaligned");

    YearLedger ledger;
    ledger.year = year;

    struct PlantRef {
        GenCo* genco;
        const PowerPlant* plant;
    };
    std::map<std::string, PlantRef> by_id;
    for (auto& g : gencos) {
        ledger.gencos[g.name];  // ensure a row even for idle companies
        for (const auto& p : g.plants) by_id[p.id] = {&g, &p};
    }

    double price_demand = 0.0, demand_hours = 0.0;
    for (std::size_t s = 0; s < clearings.size(); ++s) {
        const auto& clr = clearings[s];
        const double dur = steps[s].duration_h;
        price_demand += clr.clearing_price * clr.demand_mw * dur;
        demand_hours += clr.demand_mw * dur;
        ledger.lost_load_mwh += clr.lost_load_mw * dur;
        for (const auto& d : clr.accepted) {
            const auto it = by_id.find(d.plant_id);
            if (it == by_id.end())
                throw std::invalid_argument("settle_year: unknown plant " + d.plant_id);
            const auto& [genco, plant] = it->second;
            const double mwh = d.dispatched_mw * dur;
            auto& acct = ledger.gencos[genco->name];
            acct.market_income += mwh * clr.clearing_price;
            if (plant->technology == Technology::nuclear)
                acct.subsidy_income += mwh * nuclear_subsidy_per_mwh;
            auto& tot = ledger.tech[plant->technology];
            tot.mwh += mwh;
            tot.tco2 += mwh * plant->emission_factor;
        }
    }
    ledger.avg_price = demand_hours > 0.0 ? price_demand / demand_hours : 0.0;

    for (auto& g : gencos) {
        auto& acct = ledger.gencos[g.name];
        for (const auto& p : g.plants)
            if (p.operating_in(year)) acct.fixed_costs += p.fixed_om * p.capacity_mw;
        for (const auto& loan : g.loans) acct.loan_payments += loan.payment_in(year);
        g.cash += acct.market_income + acct.subsidy_income - acct.fixed_costs -
                  acct.loan_payments;
        acct.cash_end = g.cash;
        acct.negative_cash = g.cash < 0.0;
    }
    return ledger;
}

double relative_carbon_intensity(const YearLedger& ledger, double base_intensity) {
    if (!(base_intensity > 0.0))
        throw std::invalid_argument("relative_carbon_intensity: base must be > 0");
    return 100.0 * ledger.carbon_intensity() / base_intensity;
}

double annuity_payment(double principal, double rate, int years) {
    if (years < 1) throw std::invalid_argument("annuity_payment: years must be >= 1");
    if (principal <= 0.0) return 0.0;
    if (rate == 0.0) return principal / years;
    const double f = std::pow(1.0 + rate, -years);
    return principal * rate / (1.0 - f);
}

}  // namespace elecmarket::market
