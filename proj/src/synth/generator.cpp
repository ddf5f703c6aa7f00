#include "gridcast/synth/generator.hpp"
#include "gridcast/core/errors.hpp"
#include "gridcast/numeric/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gridcast::synth {

namespace {

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

// Annual cycle peaking around day-of-year 215 (early August).
double annual_cycle(core::Date date) {
    constexpr double peak_doy = 215.0;
    const double doy = static_cast<double>(date.day_of_year());
    return std::cos(2.0 * std::numbers::pi * (doy - peak_doy) / 365.25);
}

} // namespace

core::Dataset generate_synthetic(const SynthConfig& cfg) {
    if (cfg.end <= cfg.start) throw BadConfig("synth: end date must be after start date");
    if (cfg.annual_amplitude < 0.0 || cfg.weekly_amplitude < 0.0 || cfg.temp_amplitude < 0.0) {
        throw BadConfig("synth: amplitudes must be non-negative");
    }
    if (cfg.outage_rate < 0.0 || cfg.outage_rate > 1.0) {
        throw BadConfig("synth: outage rate must lie in [0,1]");
    }

    const std::size_t n = static_cast<std::size_t>(cfg.end - cfg.start) + 1;
    numeric::Rng rng(cfg.seed);

    // Weekday pattern: higher working-day demand, weekend dip; sums to ~0.
    const double weekday_shape[7] = {0.6, 0.8, 0.9, 0.8, 0.5, -1.5, -2.1};

    // The slow near-unit-root component is drawn first and demeaned over
    // its own path: the unit-root dynamics survive (a constant shift does
    // not change differences) while the sample mean stays anchored to the
    // configured base level for every seed.
    std::vector<double> slow_path(n);
    {
        double slow = 0.0, total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            slow = cfg.slow_phi * slow + cfg.slow_sigma * rng.normal();
            slow_path[i] = slow;
            total += slow;
        }
        const double mean = total / static_cast<double>(n);
        for (double& v : slow_path) v -= mean;
    }

    std::vector<double> load(n), generation(n), deficit(n), temperature(n), humidity(n);
    double ar = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const core::Date date = cfg.start + static_cast<int>(i);
        const double cycle = annual_cycle(date);

        const double temp = cfg.temp_mean + cfg.temp_amplitude * cycle +
                            cfg.temp_sigma * rng.normal();
        const double hum = std::clamp(cfg.humidity_mean + cfg.humidity_sigma * rng.normal(),
                                      0.0, 100.0);

        ar = cfg.ar_phi * ar + cfg.ar_sigma * rng.normal();

        const double cooling = std::max(0.0, temp - cfg.temp_mean);
        const double ld = cfg.load_base + cfg.annual_amplitude * cycle +
                          cfg.weekly_amplitude * weekday_shape[date.day_of_week()] +
                          cfg.temperature_coupling * cooling + ar + slow_path[i];

        const double margin = cfg.margin_mean + cfg.margin_sigma * rng.normal();
        const double dip = rng.bernoulli(cfg.outage_rate)
                               ? std::min(rng.exponential(cfg.outage_depth_mean), 820.0)
                               : 0.0;
        const double gen = std::max(0.0, ld + margin - dip);

        load[i] = round3(ld);
        generation[i] = round3(gen);
        // Defined from the stored columns so the identity is bitwise.
        deficit[i] = std::max(0.0, load[i] - generation[i]);
        temperature[i] = round3(temp);
        humidity[i] = round3(hum);
    }

    return core::Dataset(cfg.start, std::move(load), std::move(generation), std::move(deficit),
                         std::move(temperature), std::move(humidity));
}

} // namespace gridcast::synth
