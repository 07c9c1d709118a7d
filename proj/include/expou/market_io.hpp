#pragma once

// File-based market data: daily closes, option quotes, weekly realized
// volatility, and model-versus-market fit metrics.
//
// CSV conventions: UTF-8, comma-delimited, '.' decimal separator, no thousands
// separators, ISO-8601 dates (YYYY-MM-DD), first line is a header naming the
// columns.  Columns are located by name; extra columns are ignored.

#include <chrono>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace expou::market {

using Date = std::chrono::year_month_day;

enum class ErrorKind {
    empty_input,
    missing_column,
    wrong_field_count,
    bad_date,
    bad_number,
    non_increasing_date,
    non_positive_value,
    negative_value,
    length_mismatch,
    insufficient_data,
    division_by_zero,
};

[[nodiscard]] std::string_view error_kind_name(ErrorKind kind) noexcept;

/// row is the 1-based line number in the input (the header is line 1), or 0
/// when the error is not tied to a line.  field names the offending column.
class MarketDataError : public std::runtime_error {
public:
    MarketDataError(ErrorKind kind, std::size_t row, std::string field, const std::string& detail);

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t row() const noexcept { return row_; }
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

    /// Parse and file-format failures, as opposed to statistics on valid data.
    [[nodiscard]] bool is_parse_error() const noexcept;

private:
    ErrorKind kind_;
    std::size_t row_;
    std::string field_;
};

struct PriceSeries {
    std::vector<Date> dates;
    std::vector<double> closes;
};

struct QuoteSeries {
    std::vector<Date> dates;
    std::vector<double> option_price;
    std::vector<double> underlying_close;
};

/// Strict YYYY-MM-DD; throws MarketDataError(bad_date) with the given context.
[[nodiscard]] Date parse_date(std::string_view text, std::size_t row = 0,
                              std::string_view field = "date");
[[nodiscard]] std::string format_date(Date d);

[[nodiscard]] PriceSeries parse_price_csv(std::string_view content);
[[nodiscard]] std::string serialize_price_csv(const PriceSeries& series);

[[nodiscard]] QuoteSeries parse_quote_csv(std::string_view content);
[[nodiscard]] std::string serialize_quote_csv(const QuoteSeries& series);

enum class Annualization { none, sqrt252 };

struct WeeklyVol {
    Date week_start;     ///< Monday of the ISO week
    int iso_year = 0;
    unsigned iso_week = 0;
    std::size_t n_returns = 0;
    double vol = 0.0;
};

/// ISO-8601 week-numbering year and week of a date.
struct IsoWeek {
    int year;
    unsigned week;
    Date monday;
};
[[nodiscard]] IsoWeek iso_week(Date d);

/// Daily log-returns grouped by the ISO week of the later close; per week the
/// sample standard deviation (weeks with fewer than two returns are skipped).
[[nodiscard]] std::vector<WeeklyVol> weekly_realized_vol(const PriceSeries& series,
                                                         Annualization annualization);

struct FitMetrics {
    double relative_error = 0.0;  ///< mean |model - market| / market
    double r_squared = 0.0;       ///< 1 - SS_res / SS_tot with market as ground truth
};

/// dates (optional) only label errors.  A market price of 0 contributes 0 to
/// the relative error when the model price is 0 too, otherwise it is an error.
/// A constant market series gives r_squared 1 on an exact match, -inf otherwise.
[[nodiscard]] FitMetrics fit_metrics(std::span<const double> model,
                                     std::span<const double> market,
                                     std::span<const Date> dates = {});

}  // namespace expou::market
