#include "expou/market_io.hpp"

#include "expou/summation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

namespace expou::market {

namespace chr = std::chrono;

std::string_view error_kind_name(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::empty_input: return "empty_input";
        case ErrorKind::missing_column: return "missing_column";
        case ErrorKind::wrong_field_count: return "wrong_field_count";
        case ErrorKind::bad_date: return "bad_date";
        case ErrorKind::bad_number: return "bad_number";
        case ErrorKind::non_increasing_date: return "non_increasing_date";
        case ErrorKind::non_positive_value: return "non_positive_value";
        case ErrorKind::negative_value: return "negative_value";
        case ErrorKind::length_mismatch: return "length_mismatch";
        case ErrorKind::insufficient_data: return "insufficient_data";
        case ErrorKind::division_by_zero: return "division_by_zero";
    }
    return "unknown";
}

namespace {

std::string describe(ErrorKind kind, std::size_t row, const std::string& field,
                     const std::string& detail) {
    std::string out(error_kind_name(kind));
    if (row != 0) out += " at line " + std::to_string(row);
    if (!field.empty()) out += " (field '" + field + "')";
    if (!detail.empty()) out += ": " + detail;
    return out;
}

}  // namespace

MarketDataError::MarketDataError(ErrorKind kind, std::size_t row, std::string field,
                                 const std::string& detail)
    : std::runtime_error(describe(kind, row, field, detail)), kind_(kind), row_(row),
      field_(std::move(field)) {}

bool MarketDataError::is_parse_error() const noexcept {
    switch (kind_) {
        case ErrorKind::insufficient_data:
        case ErrorKind::division_by_zero:
        case ErrorKind::length_mismatch:
            return false;
        default:
            return true;
    }
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

double parse_number(std::string_view text, std::size_t row, std::string_view field) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() ||
        !std::isfinite(v)) {
        throw MarketDataError(ErrorKind::bad_number, row, std::string(field),
                              "cannot parse '" + std::string(text) + "' as a number");
    }
    return v;
}

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

// A CSV table with the header resolved to column indices.
struct Table {
    std::vector<std::size_t> columns;  // index per requested name
    std::vector<std::pair<std::size_t, std::vector<std::string_view>>> rows;  // (line, fields)
};

Table read_table(std::string_view content, std::span<const std::string_view> names) {
    if (content.starts_with("\xEF\xBB\xBF")) content.remove_prefix(3);
    Table table;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool have_header = false;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        const std::size_t nl = content.find('\n', pos);
        const std::string_view raw =
            content.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? content.size() + 1 : nl + 1;
        ++line_no;
        if (trim(raw).empty()) continue;
        auto fields = split_fields(raw);
        if (!have_header) {
            have_header = true;
            width = fields.size();
            for (std::string_view name : names) {
                const auto it = std::find(fields.begin(), fields.end(), name);
                if (it == fields.end()) {
                    throw MarketDataError(ErrorKind::missing_column, line_no, std::string(name),
                                          "header lacks column '" + std::string(name) + "'");
                }
                table.columns.push_back(static_cast<std::size_t>(it - fields.begin()));
            }
            continue;
        }
        if (fields.size() != width) {
            throw MarketDataError(ErrorKind::wrong_field_count, line_no, "",
                                  "expected " + std::to_string(width) + " fields, got " +
                                      std::to_string(fields.size()));
        }
        table.rows.emplace_back(line_no, std::move(fields));
    }
    if (!have_header) {
        throw MarketDataError(ErrorKind::empty_input, 0, "", "no header line");
    }
    return table;
}

void check_increasing(const std::vector<Date>& dates, std::size_t row) {
    if (dates.size() >= 2 && !(dates[dates.size() - 2] < dates.back())) {
        throw MarketDataError(ErrorKind::non_increasing_date, row, "date",
                              format_date(dates.back()) + " does not follow " +
                                  format_date(dates[dates.size() - 2]));
    }
}

}  // namespace

Date parse_date(std::string_view text, std::size_t row, std::string_view field) {
    auto fail = [&] {
        return MarketDataError(ErrorKind::bad_date, row, std::string(field),
                               "'" + std::string(text) + "' is not a YYYY-MM-DD date");
    };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw fail();
    const auto y = parse_int<int>(text.substr(0, 4));
    const auto m = parse_int<unsigned>(text.substr(5, 2));
    const auto d = parse_int<unsigned>(text.substr(8, 2));
    if (!y || !m || !d) throw fail();
    const Date date{chr::year{*y}, chr::month{*m}, chr::day{*d}};
    if (!date.ok()) throw fail();
    return date;
}

std::string format_date(Date d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

PriceSeries parse_price_csv(std::string_view content) {
    static constexpr std::string_view kNames[] = {"date", "close"};
    const Table table = read_table(content, kNames);
    PriceSeries out;
    for (const auto& [line, fields] : table.rows) {
        out.dates.push_back(parse_date(fields[table.columns[0]], line, "date"));
        check_increasing(out.dates, line);
        const double close = parse_number(fields[table.columns[1]], line, "close");
        if (!(close > 0.0)) {
            throw MarketDataError(ErrorKind::non_positive_value, line, "close",
                                  "close must be > 0");
        }
        out.closes.push_back(close);
    }
    return out;
}

std::string serialize_price_csv(const PriceSeries& series) {
    std::string out = "date,close\n";
    for (std::size_t i = 0; i < series.dates.size(); ++i) {
        out += format_date(series.dates[i]) + "," + format_number(series.closes[i]) + "\n";
    }
    return out;
}

QuoteSeries parse_quote_csv(std::string_view content) {
    static constexpr std::string_view kNames[] = {"date", "option_price", "underlying_close"};
    const Table table = read_table(content, kNames);
    QuoteSeries out;
    for (const auto& [line, fields] : table.rows) {
        out.dates.push_back(parse_date(fields[table.columns[0]], line, "date"));
        check_increasing(out.dates, line);
        const double option = parse_number(fields[table.columns[1]], line, "option_price");
        if (option < 0.0) {
            throw MarketDataError(ErrorKind::negative_value, line, "option_price",
                                  "option price must be >= 0");
        }
        const double under = parse_number(fields[table.columns[2]], line, "underlying_close");
        if (!(under > 0.0)) {
            throw MarketDataError(ErrorKind::non_positive_value, line, "underlying_close",
                                  "underlying close must be > 0");
        }
        out.option_price.push_back(option);
        out.underlying_close.push_back(under);
    }
    return out;
}

std::string serialize_quote_csv(const QuoteSeries& series) {
    std::string out = "date,option_price,underlying_close\n";
    for (std::size_t i = 0; i < series.dates.size(); ++i) {
        out += format_date(series.dates[i]) + "," + format_number(series.option_price[i]) + "," +
               format_number(series.underlying_close[i]) + "\n";
    }
    return out;
}

IsoWeek iso_week(Date d) {
    const chr::sys_days day{d};
    const unsigned iso_weekday = chr::weekday{day}.iso_encoding();  // Mon = 1
    const chr::sys_days monday = day - chr::days{iso_weekday - 1};
    const chr::sys_days thursday = monday + chr::days{3};
    const chr::year year = chr::year_month_day{thursday}.year();
    const chr::sys_days jan1{year / chr::January / 1};
    const auto week = static_cast<unsigned>((thursday - jan1).count() / 7 + 1);
    return IsoWeek{static_cast<int>(year), week, Date{monday}};
}

std::vector<WeeklyVol> weekly_realized_vol(const PriceSeries& series,
                                           Annualization annualization) {
    if (series.closes.size() != series.dates.size()) {
        throw MarketDataError(ErrorKind::length_mismatch, 0, "", "dates and closes differ in length");
    }
    if (series.closes.size() < 3) {
        throw MarketDataError(ErrorKind::insufficient_data, 0, "close",
                              "need at least 2 daily returns");
    }
    const double scale = annualization == Annualization::sqrt252 ? std::sqrt(252.0) : 1.0;

    std::vector<WeeklyVol> out;
    std::vector<double> returns;
    IsoWeek current{};
    auto flush = [&] {
        if (returns.size() >= 2) {
            const SampleMoments m = sample_moments(returns);
            out.push_back(WeeklyVol{current.monday, current.year, current.week, returns.size(),
                                    std::sqrt(m.variance) * scale});
        }
        returns.clear();
    };
    for (std::size_t i = 1; i < series.closes.size(); ++i) {
        const IsoWeek wk = iso_week(series.dates[i]);
        if (!returns.empty() && wk.monday != current.monday) flush();
        current = wk;
        returns.push_back(std::log(series.closes[i] / series.closes[i - 1]));
    }
    flush();
    return out;
}

FitMetrics fit_metrics(std::span<const double> model, std::span<const double> market,
                       std::span<const Date> dates) {
    if (model.size() != market.size() || (!dates.empty() && dates.size() != market.size())) {
        throw MarketDataError(ErrorKind::length_mismatch, 0, "",
                              "model has " + std::to_string(model.size()) +
                                  " values, market has " + std::to_string(market.size()));
    }
    if (market.size() < 2) {
        throw MarketDataError(ErrorKind::insufficient_data, 0, "", "need at least 2 prices");
    }
    const std::size_t n = market.size();
    std::vector<double> rel(n), res(n), tot(n);
    const double market_mean = pairwise_sum(market) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double diff = model[i] - market[i];
        if (market[i] > 0.0) {
            rel[i] = std::abs(diff) / market[i];
        } else if (diff != 0.0 || market[i] < 0.0) {
            const std::string where = dates.empty() ? "index " + std::to_string(i)
                                                    : format_date(dates[i]);
            throw MarketDataError(ErrorKind::division_by_zero, 0, "market_price",
                                  "relative error undefined at " + where);
        }
        res[i] = diff * diff;
        const double dev = market[i] - market_mean;
        tot[i] = dev * dev;
    }
    const double ss_res = pairwise_sum(res);
    const double ss_tot = pairwise_sum(tot);
    double r2 = 0.0;
    if (ss_tot > 0.0) {
        r2 = 1.0 - ss_res / ss_tot;
    } else {
        r2 = ss_res == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
    }
    return FitMetrics{pairwise_sum(rel) / static_cast<double>(n), r2};
}

}  // namespace expou::market
