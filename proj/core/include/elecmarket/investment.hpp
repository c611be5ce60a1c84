#ifndef ELECMARKET_INVESTMENT_HPP
#define ELECMARKET_INVESTMENT_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "elecmarket/domain.hpp"
#include "elecmarket/market.hpp"
#include "elecmarket/stochastic.hpp"

namespace elecmarket::investment {

// Linear expectation of future prices by demand level: y = m x + c, optionally
// one (m_y, c_y) pair per simulation year, with Gaussian spread (sigma_m,
// sigma_c) describing how much individual companies' expectations differ.
struct Ppdc {
    double m = 0.0;
    double c = 0.0;
    std::vector<std::pair<double, double>> per_year;
    double sigma_m = 0.0;
    double sigma_c = 0.0;

    double eval(double demand_mw, int year_offset) const;
    // One (m, c) perturbation pair per company, applied to every year.
    Ppdc perturbed(stochastic::Rng& rng) const;
};

struct CashflowAppraisal {
    double discount_rate = 0.0;        // i
    std::vector<double> cashflows;     // R_t, t = 0..N-1
};

double npv(const CashflowAppraisal& appraisal);

enum class ForecastModel { linear, exponential_with_linear_fallback };

// Least-squares extrapolation of a history; returns the next `horizon`
// values. The exponential mode fits y = a b^t through a log-linear regression
// and falls back to the linear fit when the data is non-positive, the fit is
// non-finite, or the exponential residual SSE exceeds the linear one.
std::vector<double> forecast_series(std::span<const double> history, int horizon,
                                    ForecastModel model);

// Per-year expectations a company carries into an appraisal, indexed from the
// decision year (index 0 = decision year).
struct ForecastBundle {
    std::vector<double> demand_scale;                       // multiplier on today's steps
    std::map<std::string, std::vector<double>> fuel_prices; // per fuel name
    std::vector<double> carbon_prices;

    int horizon() const { return static_cast<int>(demand_scale.size()); }
    double fuel_at(const std::string& fuel, int t) const;
    double carbon_at(int t) const;
    double demand_scale_at(int t) const;
};

// Expected yearly cashflows of a candidate plant: it sells in the hours whose
// predicted price covers its forecast SRMC, pays variable and fixed O&M, and
// carries its capital outlays through the predevelopment and construction
// years. Nuclear revenue includes the subsidy.
CashflowAppraisal expected_cashflows(const PowerPlant& candidate, const Ppdc& ppdc,
                                     const ForecastBundle& forecasts,
                                     std::span<const market::TimeStep> year_shape,
                                     double nuclear_subsidy_per_mwh, double discount_rate,
                                     int base_year_offset);

struct InvestmentDecision {
    PowerPlant plant;  // commission_year already set
    double npv_per_mw = 0.0;
    double down_payment = 0.0;
    Loan loan;
};

struct AppraisalContext {
    const ForecastBundle* forecasts = nullptr;
    std::span<const market::TimeStep> year_shape;
    double nuclear_subsidy_per_mwh = 0.0;
    double nuclear_wacc_mean = 0.10;
    bool sample_wacc = false;
    int base_year_offset = 0;
    int decision_year = 0;
};

// Ranks the candidate menu by NPV per MW and greedily invests in positive-NPV
// candidates while cash covers the down payment. Applies the cash debit, the
// loan, and the pipeline entry to the company and returns the records.
std::vector<InvestmentDecision> decide_investments(GenCo& genco,
                                                   std::span<const PowerPlant> menu,
                                                   const Ppdc& ppdc,
                                                   const AppraisalContext& ctx,
                                                   stochastic::Rng& rng);

// Clears one projected future year on forecast SRMCs and fits y = m x + c to
// the resulting (demand, price) points. Steps priced at lost load are left out
// of the fit unless no demand is met at all, in which case the curve is flat
// at the lost-load price.
Ppdc endogenous_price_curve(std::span<const PowerPlant> fleet,
                            std::span<const double> srmc_prices,
                            std::span<const market::TimeStep> steps,
                            double lost_load_price,
                            std::optional<double> cap = std::nullopt);

}  // namespace elecmarket::investment

#endif
