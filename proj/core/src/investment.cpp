#include "elecmarket/investment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace elecmarket::investment {

namespace {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LinearFit least_squares(std::span<const double> y) {
    const double n = static_cast<double>(y.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double x = static_cast<double>(t);
        sx += x;
        sy += y[t];
        sxx += x * x;
        sxy += x * y[t];
    }
    const double den = n * sxx - sx * sx;
    LinearFit fit;
    if (den != 0.0) {
        fit.slope = (n * sxy - sx * sy) / den;
        fit.intercept = (sy - fit.slope * sx) / n;
    } else {
        fit.intercept = sy / n;
    }
    return fit;
}

double sse_against(std::span<const double> y, auto&& model) {
    double sse = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double d = y[t] - model(static_cast<double>(t));
        sse += d * d;
    }
    return sse;
}

}  // namespace

double Ppdc::eval(double demand_mw, int year_offset) const {
    if (!per_year.empty()) {
        auto i = static_cast<std::size_t>(std::max(0, year_offset));
        if (i >= per_year.size()) i = per_year.size() - 1;
        return per_year[i].first * demand_mw + per_year[i].second;
    }
    return m * demand_mw + c;
}

Ppdc Ppdc::perturbed(stochastic::Rng& rng) const {
    Ppdc out = *this;
    const double dm = sigma_m > 0.0 ? rng.gaussian(0.0, sigma_m) : 0.0;
    const double dc = sigma_c > 0.0 ? rng.gaussian(0.0, sigma_c) : 0.0;
    out.m += dm;
    out.c += dc;
    for (auto& [my, cy] : out.per_year) {
        my += dm;
        cy += dc;
    }
    return out;
}

double npv(const CashflowAppraisal& appraisal) {
    if (!(appraisal.discount_rate > -1.0))
        throw std::invalid_argument("npv: discount rate must be > -1");
    double value = 0.0;
    double factor = 1.0;
    for (double r : appraisal.cashflows) {
        value += r / factor;
        factor *= 1.0 + appraisal.discount_rate;
    }
    return value;
}

std::vector<double> forecast_series(std::span<const double> history, int horizon,
                                    ForecastModel model) {
    if (history.size() < 2)
        throw std::invalid_argument("forecast_series: need at least 2 history points");
    if (horizon < 0) throw std::invalid_argument("forecast_series: negative horizon");

    const LinearFit lin = least_squares(history);
    auto linear_at = [&](double t) { return lin.intercept + lin.slope * t; };

    bool use_exponential = false;
    double log_a = 0.0, log_b = 0.0;
    if (model == ForecastModel::exponential_with_linear_fallback) {
        const bool positive =
            std::all_of(history.begin(), history.end(), [](double v) { return v > 0.0; });
        if (positive) {
            std::vector<double> logs(history.size());
            std::transform(history.begin(), history.end(), logs.begin(),
                           [](double v) { return std::log(v); });
            const LinearFit lf = least_squares(logs);
            log_a = lf.intercept;
            log_b = lf.slope;
            if (std::isfinite(log_a) && std::isfinite(log_b)) {
                auto exp_at = [&](double t) { return std::exp(log_a + log_b * t); };
                const double sse_exp = sse_against(history, exp_at);
                const double sse_lin = sse_against(history, linear_at);
                use_exponential = std::isfinite(sse_exp) && sse_exp <= sse_lin;
            }
        }
    }

    std::vector<double> out(static_cast<std::size_t>(horizon));
    const double n = static_cast<double>(history.size());
    for (int t = 0; t < horizon; ++t) {
        const double x = n + static_cast<double>(t);
        out[static_cast<std::size_t>(t)] =
            use_exponential ? std::exp(log_a + log_b * x) : linear_at(x);
    }
    return out;
}

double ForecastBundle::fuel_at(const std::string& fuel, int t) const {
    const auto it = fuel_prices.find(fuel);
    if (it == fuel_prices.end() || it->second.empty()) return 0.0;
    auto i = static_cast<std::size_t>(std::max(0, t));
    if (i >= it->second.size()) i = it->second.size() - 1;
    return it->second[i];
}

double ForecastBundle::carbon_at(int t) const {
    if (carbon_prices.empty()) return 0.0;
    auto i = static_cast<std::size_t>(std::max(0, t));
    if (i >= carbon_prices.size()) i = carbon_prices.size() - 1;
    return carbon_prices[i];
}

double ForecastBundle::demand_scale_at(int t) const {
    if (demand_scale.empty()) return 1.0;
    auto i = static_cast<std::size_t>(std::max(0, t));
    if (i >= demand_scale.size()) i = demand_scale.size() - 1;
    return demand_scale[i];
}

CashflowAppraisal expected_cashflows(const PowerPlant& candidate, const Ppdc& ppdc,
                                     const ForecastBundle& forecasts,
                                     std::span<const market::TimeStep> year_shape,
                                     double nuclear_subsidy_per_mwh, double discount_rate,
                                     int base_year_offset) {
    const int n_years = candidate.lifetime_years();
    if (n_years > forecasts.horizon())
        throw std::invalid_argument("expected_cashflows: plant lifetime " +
                                    std::to_string(n_years) +
                                    "y exceeds the forecast horizon");

    CashflowAppraisal appraisal;
    appraisal.discount_rate = discount_rate;
    appraisal.cashflows.assign(static_cast<std::size_t>(n_years), 0.0);

    const double predev_total = candidate.predev_cost * candidate.capacity_mw;
    const double build_total =
        candidate.construction_cost * candidate.capacity_mw + candidate.infrastructure_cost;
    if (candidate.predev_period_yr > 0) {
        for (int t = 0; t < candidate.predev_period_yr; ++t)
            appraisal.cashflows[static_cast<std::size_t>(t)] -=
                predev_total / candidate.predev_period_yr;
    } else {
        appraisal.cashflows[0] -= predev_total;
    }
    if (candidate.construction_period_yr > 0) {
        for (int t = 0; t < candidate.construction_period_yr; ++t)
            appraisal.cashflows[static_cast<std::size_t>(candidate.predev_period_yr + t)] -=
                build_total / candidate.construction_period_yr;
    } else {
        appraisal.cashflows[static_cast<std::size_t>(
            std::min(candidate.predev_period_yr, n_years - 1))] -= build_total;
    }

    const int op_start = candidate.predev_period_yr + candidate.construction_period_yr;
    for (int t = op_start; t < n_years; ++t) {
        const double marginal =
            srmc(candidate, forecasts.fuel_at(candidate.fuel, t), forecasts.carbon_at(t));
        const double scale = forecasts.demand_scale_at(t);
        double revenue = 0.0, varcost = 0.0;
        for (const auto& step : year_shape) {
            const double price =
                ppdc.eval(step.demand_mw * scale, base_year_offset + t);
            if (price < marginal) continue;
            const double mwh = market::available_quantity(candidate, step) * step.duration_h;
            revenue += mwh * price;
            varcost += mwh * candidate.variable_om;
            if (candidate.technology == Technology::nuclear)
                revenue += mwh * nuclear_subsidy_per_mwh;
        }
        appraisal.cashflows[static_cast<std::size_t>(t)] +=
            revenue - varcost - candidate.fixed_om * candidate.capacity_mw;
    }
    return appraisal;
}

std::vector<InvestmentDecision> decide_investments(GenCo& genco,
                                                   std::span<const PowerPlant> menu,
                                                   const Ppdc& ppdc,
                                                   const AppraisalContext& ctx,
                                                   stochastic::Rng& rng) {
    if (menu.empty()) throw std::invalid_argument("decide_investments: empty menu");

    const double eps =
        ctx.sample_wacc && genco.wacc_std > 0.0 ? rng.gaussian(0.0, genco.wacc_std) : 0.0;

    struct Scored {
        std::size_t menu_index;
        double npv_per_mw;
        double rate;
    };
    std::vector<Scored> scored;
    for (std::size_t i = 0; i < menu.size(); ++i) {
        const auto& cand = menu[i];
        const double mean = cand.technology == Technology::nuclear ? ctx.nuclear_wacc_mean
                                                                   : genco.wacc_mean;
        const double rate = std::max(mean + eps, -0.99);
        const auto appraisal =
            expected_cashflows(cand, ppdc, *ctx.forecasts, ctx.year_shape,
                               ctx.nuclear_subsidy_per_mwh, rate, ctx.base_year_offset);
        scored.push_back({i, npv(appraisal) / cand.capacity_mw, rate});
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const Scored& a, const Scored& b) {
                         return a.npv_per_mw > b.npv_per_mw;
                     });

    std::vector<InvestmentDecision> decisions;
    for (const auto& s : scored) {
        if (!(s.npv_per_mw > 0.0)) break;  // sorted, so nothing further qualifies
        const auto& proto = menu[s.menu_index];
        const double capital = proto.capital_cost();
        const double down = genco.down_payment_fraction * capital;
        if (genco.cash < down) continue;

        InvestmentDecision d;
        d.plant = proto;
        d.plant.id = proto.id + "-" + genco.name + "-" + std::to_string(ctx.decision_year);
        d.plant.commission_year =
            ctx.decision_year + proto.predev_period_yr + proto.construction_period_yr;
        d.npv_per_mw = s.npv_per_mw;
        d.down_payment = down;
        d.loan.annual_payment =
            market::annuity_payment(capital - down, std::max(s.rate, 0.0),
                                    proto.operating_period_yr);
        d.loan.first_year = d.plant.commission_year;
        d.loan.last_year = d.plant.commission_year + proto.operating_period_yr - 1;

        genco.cash -= down;
        genco.plants.push_back(d.plant);
        genco.loans.push_back(d.loan);
        decisions.push_back(std::move(d));
    }
    return decisions;
}

Ppdc endogenous_price_curve(std::span<const PowerPlant> fleet,
                            std::span<const double> srmc_prices,
                            std::span<const market::TimeStep> steps,
                            double lost_load_price, std::optional<double> cap) {
    if (fleet.size() != srmc_prices.size())
        throw std::invalid_argument("endogenous_price_curve: fleet/srmc size mismatch");

    double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
    bool any_served = false;
    for (const auto& step : steps) {
        std::vector<market::Bid> bids;
        bids.reserve(fleet.size());
        for (std::size_t i = 0; i < fleet.size(); ++i) {
            bids.push_back(market::submit_bid(fleet[i].id, "",
                                              srmc_prices[i],
                                              market::available_quantity(fleet[i], step),
                                              cap));
        }
        const auto res =
            market::clear_step(std::move(bids), step.demand_mw, lost_load_price, cap,
                               step.index);
        if (res.lost_load_mw > 0.0 && res.dispatched_total() <= 0.0) continue;
        if (res.lost_load_mw > 0.0) {
            any_served = true;  // partially served scarcity steps are left out of the fit
            continue;
        }
        any_served = true;
        const double w = step.duration_h;
        sw += w;
        swx += w * step.demand_mw;
        swy += w * res.clearing_price;
        swxx += w * step.demand_mw * step.demand_mw;
        swxy += w * step.demand_mw * res.clearing_price;
    }

    Ppdc curve;
    if (!any_served || sw == 0.0) {
        curve.m = 0.0;
        curve.c = lost_load_price;
        return curve;
    }
    const double den = sw * swxx - swx * swx;
    if (den != 0.0) {
        curve.m = (sw * swxy - swx * swy) / den;
        curve.c = (swy - curve.m * swx) / sw;
    } else {
        curve.m = 0.0;
        curve.c = swy / sw;
    }
    return curve;
}

}  // namespace elecmarket::investment
