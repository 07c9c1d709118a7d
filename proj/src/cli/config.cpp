#include "expou/cli.hpp"

#include "expou/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace expou::cli {

namespace {

constexpr std::array<std::string_view, 24> kKeys{
    "mu", "kappa", "sigma", "alpha", "theta", "beta", "rho", "s0", "y0", "horizon",
    "steps", "paths", "seed", "strike", "kind", "style", "cv", "scheme", "threads",
    "annualization", "expiry_date", "prices", "quotes", "out",
};

std::string_view trim(std::string_view s) {
    const auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && blank(s.front())) s.remove_prefix(1);
    while (!s.empty() && blank(s.back())) s.remove_suffix(1);
    return s;
}

double to_real(const std::string& key, const std::string& text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError("config key '" + key + "': '" + text + "' is not a number");
    }
    return v;
}

template <typename Int>
Int to_count(const std::string& key, const std::string& text) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError("config key '" + key + "': '" + text + "' is not a non-negative integer");
    }
    return v;
}

[[noreturn]] void bad_choice(const std::string& key, const std::string& text,
                             std::string_view choices) {
    throw ConfigError("config key '" + key + "': '" + text + "' is not one of " +
                      std::string(choices));
}

}  // namespace

std::span<const std::string_view> config_keys() { return kKeys; }

KeyValues parse_config_text(std::string_view text) {
    KeyValues out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key(trim(line.substr(0, eq)));
        if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key +
                              "'");
        }
        out[key] = std::string(trim(line.substr(eq + 1)));
    }
    return out;
}

RunConfig build_config(const KeyValues& values) {
    RunConfig cfg;
    for (const auto& [key, text] : values) {
        ModelParams& m = cfg.model;
        if (key == "mu") m.mu = to_real(key, text);
        else if (key == "kappa") m.kappa = to_real(key, text);
        else if (key == "sigma") m.sigma = to_real(key, text);
        else if (key == "alpha") m.alpha = to_real(key, text);
        else if (key == "theta") m.theta = to_real(key, text);
        else if (key == "beta") m.beta = to_real(key, text);
        else if (key == "rho") m.rho = to_real(key, text);
        else if (key == "s0") m.s0 = to_real(key, text);
        else if (key == "y0") m.y0 = to_real(key, text);
        else if (key == "horizon") m.horizon = to_real(key, text);
        else if (key == "steps") cfg.steps = to_count<std::size_t>(key, text);
        else if (key == "paths") cfg.n_paths = to_count<std::size_t>(key, text);
        else if (key == "seed") cfg.seed = to_count<std::uint64_t>(key, text);
        else if (key == "threads") cfg.threads = to_count<unsigned>(key, text);
        else if (key == "strike") cfg.option.strike = to_real(key, text);
        else if (key == "kind") {
            if (text == "call") cfg.option.kind = pricing::OptionKind::call;
            else if (text == "put") cfg.option.kind = pricing::OptionKind::put;
            else bad_choice(key, text, "call|put");
        } else if (key == "style") {
            if (text == "european") cfg.option.style = pricing::ExerciseStyle::european;
            else if (text == "american") cfg.option.style = pricing::ExerciseStyle::american_as_european;
            else bad_choice(key, text, "european|american");
        } else if (key == "cv") {
            if (text == "on") cfg.cv = pricing::ControlVariate::terminal_asset;
            else if (text == "off") cfg.cv = pricing::ControlVariate::off;
            else bad_choice(key, text, "on|off");
        } else if (key == "scheme") {
            if (text == "euler") cfg.scheme = Scheme::euler;
            else if (text == "exact-vol" || text == "exact_vol") cfg.scheme = Scheme::exact_vol;
            else bad_choice(key, text, "euler|exact-vol");
        } else if (key == "annualization") {
            if (text == "none") cfg.annualization = market::Annualization::none;
            else if (text == "sqrt252") cfg.annualization = market::Annualization::sqrt252;
            else bad_choice(key, text, "none|sqrt252");
        } else if (key == "expiry_date") {
            try {
                cfg.expiry_date = market::parse_date(text, 0, "expiry_date");
            } catch (const market::MarketDataError& e) {
                throw ConfigError(std::string("config key 'expiry_date': ") + e.what());
            }
        } else if (key == "prices") cfg.prices = text;
        else if (key == "quotes") cfg.quotes = text;
        else if (key == "out") cfg.out = text;
        else throw ConfigError("unknown config key '" + key + "'");
    }

    cfg.model.validate(Admissibility::strict);
    if (cfg.steps == 0) throw ValidationError("steps must be >= 1");
    if (cfg.n_paths == 0) throw ValidationError("paths must be >= 1");
    cfg.option.expiry = cfg.model.horizon;
    cfg.option.validate();
    return cfg;
}

}  // namespace expou::cli
