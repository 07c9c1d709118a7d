// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.  Run from a writable directory (it writes scratch files
// for the command-line reproducibility check).

#include "expou/cli.hpp"
#include "expou/emm_entropy.hpp"
#include "expou/kernels.hpp"
#include "expou/ou_core.hpp"
#include "expou/pricing.hpp"
#include "expou/sde_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace expou;
using namespace expou::pricing;

namespace {

constexpr std::size_t kPaths = 100'000;
constexpr std::size_t kSteps = 252;

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
    std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ModelParams reference() { return ModelParams{}; }

void entropy_identity() {
    const ModelParams p = reference();
    const double f0 = emm::entropy_f(0.0, p);
    const auto t0 = std::chrono::steady_clock::now();
    const EntropyEstimate mc = entropy_monte_carlo(p, TimeGrid(1.0, kSteps), kPaths, 20230421);
    const double elapsed = seconds_since(t0);
    const double z = (mc.mean - 0.125) / mc.std_error;
    const bool ok = std::abs(f0 - 0.125) <= 1e-12 && std::abs(z) < 3.0 && elapsed < 10.0;
    report(ok, "entropy_identity",
           fmt("f(0)=%.17g |f(0)-0.125|=%.3g; MC=%.6f se=%.2e z=%.2f; %.2fs", f0,
               std::abs(f0 - 0.125), mc.mean, mc.std_error, z, elapsed));
}

void hobson_ode_residuals() {
    ModelParams flat = reference();
    ModelParams sloped = reference();
    sloped.kappa = 0.1;
    const TimeGrid grid(1.0, kSteps);
    const double h0 = emm::hobson_residual(grid, flat);
    const double h1 = emm::hobson_residual(grid, sloped);
    const double ode0 = emm::ode_residual(flat, 100, 1e-4);
    const double ode1 = emm::ode_residual(sloped, 100, 1e-4);
    report(h0 == 0.0, "hobson_residual_kappa0", fmt("residual=%.17g (required exactly 0)", h0));
    report(std::abs(h1) < 1e-4, "hobson_residual_kappa0.1",
           fmt("residual=%.6e at m=252 (required |r| < 1e-4)", h1));
    report(ode0 < 1e-6 && ode1 < 1e-6, "ode_residual",
           fmt("kappa=0: %.3e, kappa=0.1: %.3e (required < 1e-6, h=1e-4)", ode0, ode1));
}

void kappa_continuity() {
    ModelParams p = reference();
    p.kappa = 1e-12;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double t = p.horizon * i / 99.0;
        const double limit = p.mu * p.mu * (p.horizon - t) / (2.0 * p.sigma * p.sigma);
        worst = std::max(worst, std::abs(emm::entropy_f(t, p) - limit));
    }
    report(worst < 1e-12, "kappa_continuity", fmt("max deviation=%.3g over 100 points", worst));
}

void martingale() {
    for (Scheme s : {Scheme::euler, Scheme::exact_vol}) {
        const auto t0 = std::chrono::steady_clock::now();
        const PathBatch b = simulate(reference(), TimeGrid(1.0, kSteps), kPaths, 20230421, s);
        const MartingaleCheck m = martingale_diagnostic(b, 100.0);
        const double elapsed = seconds_since(t0);
        const double gap = std::abs(m.mean - 100.0);
        report(gap < 3.0 * m.std_error && elapsed < 30.0,
               "martingale_" + std::string(scheme_name(s)),
               fmt("mean(S_T)=%.5f se=%.4f |gap|/se=%.2f; %.2fs", m.mean, m.std_error,
                   gap / m.std_error, elapsed));
    }
}

void black_scholes() {
    ModelParams p = reference();
    p.alpha = 0.0;
    p.theta = 0.0;
    p.beta = 0.0;
    p.y0 = 0.2;
    const double exact = bs_reference(100.0, 100.0, 0.04);
    const PathBatch b = simulate(p, TimeGrid(1.0, kSteps), kPaths, 20230421, Scheme::euler);
    const OptionSpec atm{.strike = 100.0, .expiry = 1.0};
    const MCEstimate cv = price(b, atm, 100.0, ControlVariate::terminal_asset);
    const MCEstimate plain = price(b, atm, 100.0, ControlVariate::off);
    const bool ok = std::abs(cv.value - exact) < 3.0 * cv.std_error &&
                    std::abs(plain.value - exact) < 3.0 * plain.std_error && cv.std_error < 0.05;
    report(ok, "black_scholes_oracle",
           fmt("BS=%.5f; cv: %.5f se=%.4f; plain: %.5f se=%.4f", exact, cv.value, cv.std_error,
               plain.value, plain.std_error));
}

void control_variate() {
    const OptionSpec call{.strike = 90.0, .expiry = 1.0};
    int smaller = 0;
    double worst_ratio = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const PathBatch b = simulate(reference(), TimeGrid(1.0, kSteps), kPaths, seed, Scheme::euler);
        const double with = price(b, call, 100.0, ControlVariate::terminal_asset).std_error;
        const double without = price(b, call, 100.0, ControlVariate::off).std_error;
        if (with < without) ++smaller;
        worst_ratio = std::max(worst_ratio, with / without);
    }
    report(smaller == 10, "control_variate",
           fmt("cv se < plain se on %d/10 seeds; worst se ratio %.3f", smaller, worst_ratio));
}

void ou_law() {
    const ou::OUParams p{.theta = 0.1, .alpha = 0.75, .beta = 0.2, .v0 = std::log(0.6)};
    constexpr std::size_t n = kPaths;
    constexpr int steps = 10;
    const double dt = 1.0 / steps;
    std::mt19937_64 gen(7);
    std::normal_distribution<double> z;
    std::vector<double> v(n);
    for (double& x : v) {
        x = p.v0;
        for (int i = 0; i < steps; ++i) x = ou::exact_step(x, p, dt, z(gen));
    }
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double x : v) {
        const double d = (x - mean) * (x - mean);
        m2 += d;
        m4 += d * d;
    }
    const double var = m2 / (n - 1);
    const double se_mean = std::sqrt(var / n);
    const double se_var = std::sqrt((m4 / n - var * var) / n);
    const ou::GaussianLaw law = ou::marginal_law(p, 1.0);
    const double z_mean = (mean - law.mean) / se_mean;
    const double z_var = (var - law.variance) / se_var;
    report(std::abs(z_mean) < 4.0 && std::abs(z_var) < 4.0, "ou_law",
           fmt("mean %.6f vs %.6f (z=%.2f); var %.6f vs %.6f (z=%.2f)", mean, law.mean, z_mean,
               var, law.variance, z_var));
}

void scheme_convergence() {
    const OptionSpec call{.strike = 90.0, .expiry = 1.0};
    std::vector<double> diff;
    double combined_last = 0.0;
    std::string detail;
    for (std::size_t m : {32u, 64u, 128u, 256u}) {
        // same seed: both schemes consume the identical (dB, dW) increments
        const TimeGrid grid(1.0, m);
        const MCEstimate e = price(simulate(reference(), grid, kPaths, 99, Scheme::euler), call, 100.0,
                                   ControlVariate::terminal_asset);
        const MCEstimate x = price(simulate(reference(), grid, kPaths, 99, Scheme::exact_vol), call,
                                   100.0, ControlVariate::terminal_asset);
        diff.push_back(std::abs(e.value - x.value));
        combined_last = std::hypot(e.std_error, x.std_error);
        detail += fmt("m=%zu:%.2e ", m, diff.back());
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < diff.size(); ++i) decreasing = decreasing && diff[i] < diff[i - 1];
    const bool ok = decreasing && diff.back() < 2.0 * combined_last;
    report(ok, "scheme_convergence",
           detail + fmt("| 2 combined se at m=256: %.2e", 2.0 * combined_last));
}

void lemma3() {
    const ModelParams p = reference();
    const TimeGrid grid(1.0, kSteps);
    const PathBatch b = simulate(p, grid, kPaths, 20230421, Scheme::euler);
    const double j = emm::entropy_j(p);
    double worst = 0.0;
    for (std::size_t i = 0; i < b.n_paths(); ++i) {
        const Increments inc = b.increments(i);
        const double lhs = emm::log_density(inc.db, grid, p);
        const double rhs = j - emm::girsanov_eta(inc.db, grid, p);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    report(worst < 1e-10, "lemma3_identity",
           fmt("max |ln Z - (J - eta)|=%.3g over %zu paths", worst, b.n_paths()));
}

std::string run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return std::to_string(code) + "\n" + out.str() + "\x1f" + err.str();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void reproducibility() {
    std::ofstream("acceptance_prices.csv")
        << "date,close\n2024-01-02,100\n2024-01-03,101\n2024-01-04,99.5\n2024-01-05,100.2\n"
           "2024-01-08,102\n2024-01-09,101.1\n2024-01-10,103\n2024-01-11,102.5\n2024-01-12,104\n";
    std::ofstream("acceptance_quotes.csv")
        << "date,option_price,underlying_close\n2024-01-03,11,101\n2024-01-08,12.5,102\n"
           "2024-01-12,14,104\n";
    const std::vector<std::vector<std::string>> commands{
        {"verify", "--paths", "20000", "--steps", "100"},
        {"simulate", "--paths", "1000", "--steps", "20"},
        {"simulate", "--paths", "1000", "--steps", "20", "--scheme", "exact-vol"},
        {"price", "--paths", "50000"},
        {"price", "--paths", "50000", "--scheme", "exact-vol", "--cv", "off"},
        {"price-series", "--prices", "acceptance_prices.csv", "--quotes", "acceptance_quotes.csv",
         "--expiry_date", "2024-02-16", "--paths", "20000"},
        {"vol-stats", "--prices", "acceptance_prices.csv"},
    };
    std::size_t compared = 0, mismatched = 0;
    for (const auto& cmd : commands) {
        const std::string first = run_cli(cmd);
        for (const char* threads : {"", "1", "2", "3", "8"}) {
            std::vector<std::string> args = cmd;
            if (*threads) args.insert(args.end(), {"--threads", threads});
            ++compared;
            if (run_cli(args) != first) ++mismatched;
        }
        // through --out as well
        std::vector<std::string> to_file = cmd;
        to_file.insert(to_file.end(), {"--out", "acceptance_out_a.txt", "--threads", "1"});
        (void)run_cli(to_file);
        to_file.back() = "4";
        to_file[to_file.size() - 3] = "acceptance_out_b.txt";
        (void)run_cli(to_file);
        ++compared;
        if (slurp("acceptance_out_a.txt") != slurp("acceptance_out_b.txt") ||
            slurp("acceptance_out_a.txt").empty()) {
            ++mismatched;
        }
    }

    // every instruction set available on this machine against the scalar kernels
    std::size_t isa_mismatch = 0;
    std::string isas;
    for (kernels::Isa isa : kernels::available_isas()) {
        isas += std::string(kernels::isa_name(isa)) + " ";
        for (Scheme s : {Scheme::euler, Scheme::exact_vol}) {
            SimOptions a{.threads = 1, .kernels = &kernels::scalar_table()};
            SimOptions b{.threads = 4, .kernels = &kernels::table_for(isa)};
            const PathBatch pa = simulate(reference(), TimeGrid(1.0, 64), 5000, 3, s, a);
            const PathBatch pb = simulate(reference(), TimeGrid(1.0, 64), 5000, 3, s, b);
            ++compared;
            if (!std::equal(pa.terminal_s().begin(), pa.terminal_s().end(), pb.terminal_s().begin()) ||
                !std::equal(pa.terminal_y().begin(), pa.terminal_y().end(), pb.terminal_y().begin())) {
                ++isa_mismatch;
            }
        }
    }
    report(mismatched == 0 && isa_mismatch == 0, "reproducibility",
           fmt("%zu comparisons, %zu output mismatches, %zu kernel mismatches (isas: %s)", compared,
               mismatched, isa_mismatch, isas.c_str()));
    for (const char* f : {"acceptance_prices.csv", "acceptance_quotes.csv", "acceptance_out_a.txt",
                          "acceptance_out_b.txt"}) {
        std::remove(f);
    }
}

}  // namespace

int main() {
    std::printf("active kernels: %s\n", std::string(kernels::isa_name(kernels::active().isa)).c_str());
    entropy_identity();
    hobson_ode_residuals();
    kappa_continuity();
    martingale();
    black_scholes();
    control_variate();
    ou_law();
    scheme_convergence();
    lemma3();
    reproducibility();
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
