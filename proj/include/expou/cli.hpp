#pragma once

#include "expou/market_io.hpp"
#include "expou/model_params.hpp"
#include "expou/pricing.hpp"
#include "expou/sde_engine.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace expou::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kIoError = 2 };

/// A config value that does not parse (as opposed to one that parses but
/// violates a model invariant, which is a ValidationError).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    ModelParams model;
    std::size_t steps = 252;
    std::size_t n_paths = 100000;
    std::uint64_t seed = 20230421;
    pricing::OptionSpec option;
    pricing::ControlVariate cv = pricing::ControlVariate::terminal_asset;
    Scheme scheme = Scheme::euler;
    unsigned threads = 0;
    market::Annualization annualization = market::Annualization::sqrt252;
    std::optional<market::Date> expiry_date;
    std::string prices;
    std::string quotes;
    std::string out;

    [[nodiscard]] TimeGrid grid() const { return TimeGrid(model.horizon, steps); }
};

/// Every key accepted in a config file, each also available as --<key>.
[[nodiscard]] std::span<const std::string_view> config_keys();

using KeyValues = std::map<std::string, std::string, std::less<>>;

/// Flat `key = value` lines; '#' starts a comment.  Unknown keys and
/// malformed lines throw ConfigError.
[[nodiscard]] KeyValues parse_config_text(std::string_view text);

/// Defaults overlaid with the given values, then validated.  The option expiry
/// is the model horizon.  Throws ConfigError or ValidationError.
[[nodiscard]] RunConfig build_config(const KeyValues& values);

/// The command-line entry point: args excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace expou::cli
