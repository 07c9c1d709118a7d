#include "expou/cli.hpp"

#include "expou/emm_entropy.hpp"
#include "expou/errors.hpp"
#include "expou/increments.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <utility>

namespace expou::cli {

namespace {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shortest text that parses back to the same double, so CSV output can be
// fed back in as input without loss.
std::string num(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Rows of `key value`, printed with aligned keys.
class Report {
public:
    void add(std::string key, std::string value) { rows_.emplace_back(std::move(key), std::move(value)); }
    void add(std::string key, double value) { add(std::move(key), num(value)); }

    [[nodiscard]] std::string str() const {
        std::size_t width = 0;
        for (const auto& r : rows_) width = std::max(width, r.first.size());
        std::string out;
        for (const auto& [k, v] : rows_) {
            out += k + std::string(width + 2 - k.size(), ' ') + v + "\n";
        }
        return out;
    }

private:
    std::vector<std::pair<std::string, std::string>> rows_;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write '" + path + "'");
    os << content;
    if (!os) throw IoError("write to '" + path + "' failed");
}

// Sends content to --out when given, else to stdout.
void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
    if (cfg.out.empty()) {
        out << content;
    } else {
        write_file(cfg.out, content);
    }
}

SimOptions sim_options(const RunConfig& cfg, StoreMode store = StoreMode::terminal) {
    return SimOptions{.store = store, .threads = cfg.threads, .kernels = nullptr};
}

struct Check {
    std::string name;
    bool passed;
};

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const ModelParams& p = cfg.model;
    const TimeGrid grid = cfg.grid();
    constexpr double kOdeStep = 1e-4;
    constexpr std::size_t kOdePoints = 100;
    constexpr double kZLimit = 3.0;

    Report report;
    std::vector<Check> checks;

    const emm::EntropyReport er = emm::entropy_report(p, grid, kOdePoints, kOdeStep);
    report.add("J", er.j_value);

    // first-order bound of the left rule: (h / 2) T max |d(lambda^2 / 2)/dt|
    const double g = p.kappa / p.sigma;
    const double lam_max = std::max(std::abs(emm::lambda_mpr(0.0, p)),
                                    std::abs(emm::lambda_mpr(p.horizon, p)));
    const double hobson_bound = 0.5 * grid.dt() * p.horizon * std::abs(g) * lam_max + 1e-14;
    report.add("hobson_residual", er.hobson_residual);
    report.add("hobson_bound", hobson_bound);
    checks.push_back({"hobson_residual", std::abs(er.hobson_residual) <= hobson_bound});

    const double ode_tol = 1e-6 * std::max(1.0, er.j_value);
    report.add("ode_max_residual", er.ode_max_residual);
    report.add("ode_tolerance", ode_tol);
    checks.push_back({"ode_residual", er.ode_max_residual < ode_tol});

    const bool trivial_density = p.mu == 0.0 && p.kappa == 0.0;
    report.add("density_identically_one", trivial_density ? "yes" : "no");

    const pricing::EntropyEstimate ent = pricing::entropy_monte_carlo(p, grid, cfg.n_paths, cfg.seed);
    const double ent_z = ent.std_error > 0.0 ? (ent.mean - er.j_value) / ent.std_error : 0.0;
    report.add("entropy_mc_mean", ent.mean);
    report.add("entropy_mc_std_error", ent.std_error);
    report.add("entropy_mc_z", ent_z);
    checks.push_back({"entropy_monte_carlo",
                      ent.std_error > 0.0 ? std::abs(ent_z) < kZLimit
                                          : std::abs(ent.mean - er.j_value) <= 1e-12});

    // ln Z° = J - eta on each path, up to the quadrature residual
    const std::size_t n_identity = std::min<std::size_t>(cfg.n_paths, 2000);
    double identity_dev = 0.0;
    std::vector<double> db_p(grid.steps());
    for (std::size_t path = 0; path < n_identity; ++path) {
        const Increments inc = path_increments(grid, path, p.rho, cfg.seed);
        for (std::size_t j = 0; j < grid.steps(); ++j) {
            db_p[j] = inc.db[j] - emm::lambda_mpr(grid.t(j), p) * grid.dt();
        }
        const double log_z = emm::log_density(db_p, grid, p);
        const double eta = emm::girsanov_eta(db_p, grid, p);
        identity_dev = std::max(identity_dev, std::abs(log_z - (er.j_value - eta)));
    }
    report.add("lemma3_paths", std::to_string(n_identity));
    report.add("lemma3_max_deviation", identity_dev);
    checks.push_back({"lemma3_identity", identity_dev < std::abs(er.hobson_residual) + 1e-10});

    const PathBatch batch = simulate(p, grid, cfg.n_paths, cfg.seed, cfg.scheme, sim_options(cfg));
    const pricing::MartingaleCheck mc = pricing::martingale_diagnostic(batch, p.s0);
    report.add("scheme", std::string(scheme_name(cfg.scheme)));
    report.add("martingale_mean", mc.mean);
    report.add("martingale_std_error", mc.std_error);
    report.add("martingale_z", mc.z_score);
    checks.push_back({"martingale", std::abs(mc.z_score) < kZLimit});
    report.add("floor_events", std::to_string(batch.floor_events()));
    if (batch.floor_warning()) {
        report.add("warning", "euler volatility floor hit on more than 1% of steps");
    }

    // frozen volatility 0.2: the model collapses to zero-rate Black-Scholes
    ModelParams frozen = p;
    frozen.alpha = 0.0;
    frozen.theta = 0.0;
    frozen.beta = 0.0;
    frozen.y0 = 0.2;
    frozen.s0 = 100.0;
    frozen.horizon = 1.0;
    const TimeGrid frozen_grid(1.0, cfg.steps);
    const PathBatch frozen_batch =
        simulate(frozen, frozen_grid, cfg.n_paths, cfg.seed, cfg.scheme, sim_options(cfg));
    const pricing::OptionSpec atm{.strike = 100.0, .expiry = 1.0};
    const auto cv = cfg.n_paths >= pricing::kMinControlVariatePaths ? pricing::ControlVariate::terminal_asset
                                                                    : pricing::ControlVariate::off;
    const pricing::MCEstimate bs_mc = pricing::price(frozen_batch, atm, 100.0, cv);
    const double bs_exact = pricing::bs_reference(100.0, 100.0, 0.04);
    const double bs_z = bs_mc.std_error > 0.0 ? (bs_mc.value - bs_exact) / bs_mc.std_error : 0.0;
    report.add("bs_reference", bs_exact);
    report.add("bs_monte_carlo", bs_mc.value);
    report.add("bs_std_error", bs_mc.std_error);
    report.add("bs_z", bs_z);
    checks.push_back({"black_scholes_oracle", std::abs(bs_z) < kZLimit});

    bool all = true;
    for (const Check& c : checks) {
        report.add("check_" + c.name, c.passed ? "pass" : "FAIL");
        all = all && c.passed;
    }
    report.add("status", all ? "pass" : "FAIL");
    emit(cfg, report.str(), out);
    if (!all) {
        for (const Check& c : checks) {
            if (!c.passed) err << "verify: check failed: " << c.name << "\n";
        }
        return kCheckFailed;
    }
    return kOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    const PathBatch batch = simulate(cfg.model, cfg.grid(), cfg.n_paths, cfg.seed, cfg.scheme,
                                     sim_options(cfg, StoreMode::full));
    std::ostringstream csv;
    write_path_csv(batch, csv);
    emit(cfg, csv.str(), out);
    return kOk;
}

int cmd_price(const RunConfig& cfg, std::ostream& out) {
    const PathBatch batch = simulate(cfg.model, cfg.grid(), cfg.n_paths, cfg.seed, cfg.scheme,
                                     sim_options(cfg));
    const pricing::MCEstimate est = pricing::price(batch, cfg.option, cfg.model.s0, cfg.cv);
    Report report;
    report.add("value", est.value);
    report.add("std_error", est.std_error);
    report.add("n_paths", std::to_string(est.n_paths));
    report.add("cv_coefficient", est.cv_coefficient);
    report.add("scheme", std::string(scheme_name(cfg.scheme)));
    report.add("floor_events", std::to_string(batch.floor_events()));
    if (batch.floor_warning()) {
        report.add("warning", "euler volatility floor hit on more than 1% of steps");
    }
    emit(cfg, report.str(), out);
    return kOk;
}

// Trading days in (from, expiry]: price-file dates first, then Monday-Friday
// calendar days past the last price date.
std::size_t trading_days_to_expiry(const market::PriceSeries& prices, market::Date from,
                                   market::Date expiry) {
    namespace chr = std::chrono;
    std::size_t days = 0;
    for (const market::Date& d : prices.dates) {
        if (from < d && d <= expiry) ++days;
    }
    chr::sys_days day = prices.dates.empty() ? chr::sys_days{from} : chr::sys_days{prices.dates.back()};
    if (day < chr::sys_days{from}) day = chr::sys_days{from};
    for (day += chr::days{1}; day <= chr::sys_days{expiry}; day += chr::days{1}) {
        if (chr::weekday{day}.iso_encoding() <= 5) ++days;
    }
    return days;
}

int cmd_price_series(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.prices.empty() || cfg.quotes.empty()) {
        throw ConfigError("price-series needs both --prices and --quotes");
    }
    if (!cfg.expiry_date) {
        throw ConfigError("price-series needs expiry_date (YYYY-MM-DD)");
    }
    const market::PriceSeries prices = market::parse_price_csv(read_file(cfg.prices));
    const market::QuoteSeries quotes = market::parse_quote_csv(read_file(cfg.quotes));
    const market::Date expiry = *cfg.expiry_date;

    std::string csv = "date,model_price,std_error,market_price\n";
    std::vector<double> model_prices;
    for (std::size_t i = 0; i < quotes.dates.size(); ++i) {
        const market::Date d = quotes.dates[i];
        if (!std::binary_search(prices.dates.begin(), prices.dates.end(), d)) {
            throw ValidationError("quote date " + market::format_date(d) +
                                  " is not in the price file");
        }
        if (expiry < d) {
            throw ValidationError("expiry " + market::format_date(expiry) +
                                  " precedes quote date " + market::format_date(d));
        }
        const double s0 = quotes.underlying_close[i];
        const std::size_t days = trading_days_to_expiry(prices, d, expiry);
        pricing::OptionSpec spec = cfg.option;
        pricing::MCEstimate est;
        if (days == 0) {
            spec.expiry = 0.0;
            est.value = pricing::payoff(spec, s0);
            est.n_paths = 1;
        } else {
            ModelParams p = cfg.model;
            p.s0 = s0;
            p.horizon = static_cast<double>(days) / 252.0;
            spec.expiry = p.horizon;
            const PathBatch batch =
                simulate(p, TimeGrid(p.horizon, days), cfg.n_paths, cfg.seed, cfg.scheme, sim_options(cfg));
            est = pricing::price(batch, spec, s0, cfg.cv);
        }
        model_prices.push_back(est.value);
        csv += market::format_date(d) + "," + num(est.value) + "," + num(est.std_error) + "," +
               num(quotes.option_price[i]) + "\n";
    }
    emit(cfg, csv, out);

    std::ostream& info = cfg.out.empty() ? err : out;
    if (model_prices.size() >= 2) {
        const market::FitMetrics fit = market::fit_metrics(model_prices, quotes.option_price, quotes.dates);
        Report report;
        report.add("quotes", std::to_string(model_prices.size()));
        report.add("relative_error", fit.relative_error);
        report.add("r_squared", fit.r_squared);
        info << report.str();
    } else {
        info << "fit metrics need at least 2 quotes\n";
    }
    return kOk;
}

int cmd_vol_stats(const RunConfig& cfg, std::ostream& out) {
    if (cfg.prices.empty()) throw ConfigError("vol-stats needs --prices");
    const market::PriceSeries prices = market::parse_price_csv(read_file(cfg.prices));
    const auto weeks = market::weekly_realized_vol(prices, cfg.annualization);
    std::string csv = "week_start,iso_year,iso_week,returns,vol\n";
    for (const market::WeeklyVol& w : weeks) {
        csv += market::format_date(w.week_start) + "," + std::to_string(w.iso_year) + "," +
               std::to_string(w.iso_week) + "," + std::to_string(w.n_returns) + "," + num(w.vol) + "\n";
    }
    emit(cfg, csv, out);
    return kOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Option pricing in the exponential Ornstein-Uhlenbeck stochastic volatility "
                 "model under the entropy-minimal martingale measure"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "flat key = value config file");
    std::map<std::string, std::string> overrides;
    for (std::string_view key : config_keys()) {
        const std::string name(key);
        app.add_option("--" + name, overrides[name], "override config key " + name);
    }

    CLI::App* verify = app.add_subcommand("verify", "check the closed-form identities and diagnostics");
    CLI::App* simulate_cmd = app.add_subcommand("simulate", "dump simulated paths as CSV");
    CLI::App* price_cmd = app.add_subcommand("price", "single Monte Carlo valuation");
    CLI::App* series_cmd = app.add_subcommand("price-series", "re-price the option on every quote date");
    CLI::App* vol_cmd = app.add_subcommand("vol-stats", "weekly realized volatility table");

    std::vector<std::string> argv_store{"expou"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "expou: " << e.what() << "\n";
        return kIoError;
    }

    try {
        KeyValues values;
        if (!config_path.empty()) values = parse_config_text(read_file(config_path));
        for (const auto& [key, value] : overrides) {
            if (app.count("--" + key) > 0) values[key] = value;
        }
        const RunConfig cfg = build_config(values);

        if (verify->parsed()) return cmd_verify(cfg, out, err);
        if (simulate_cmd->parsed()) return cmd_simulate(cfg, out);
        if (price_cmd->parsed()) return cmd_price(cfg, out);
        if (series_cmd->parsed()) return cmd_price_series(cfg, out, err);
        if (vol_cmd->parsed()) return cmd_vol_stats(cfg, out);
        err << "expou: no subcommand\n";
        return kIoError;
    } catch (const market::MarketDataError& e) {
        err << "expou: " << e.what() << "\n";
        return e.is_parse_error() ? kIoError : kCheckFailed;
    } catch (const IoError& e) {
        err << "expou: " << e.what() << "\n";
        return kIoError;
    } catch (const ConfigError& e) {
        err << "expou: " << e.what() << "\n";
        return kIoError;
    } catch (const std::invalid_argument& e) {
        // ValidationError, PathDataError, InsufficientPaths
        err << "expou: " << e.what() << "\n";
        return kCheckFailed;
    } catch (const std::domain_error& e) {
        err << "expou: " << e.what() << "\n";
        return kCheckFailed;
    }
}

}  // namespace expou::cli
