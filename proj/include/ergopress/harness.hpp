#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ergopress/variational.hpp"

namespace ergopress {

// Worker cap from ERGOPRESS_THREADS (default 1, clamped to [1, 64]).
int thread_count();

// Ordered parallel map: results are collected by index, so output does not
// depend on the number of workers.
void parallel_for(int count, const std::function<void(int)>& fn);

// Fixed report schema shared by the pressure / weighted / vp-check commands.
// Missing fields (e.g. the measure side of a pure pressure run) stay empty.
struct ReportRow {
    std::string scenario;
    double omega = 0.0;
    int n = 0;
    double value = 0.0; // pressure a_n, or (1/n) sup log W_n
    std::string argmax;
    std::optional<double> fekete_upper;
    std::optional<double> fekete_extrapolated;
    std::optional<double> measure_lower;
    std::optional<double> measure_upper;
    std::optional<double> gap;
    std::optional<bool> pass;
    std::optional<double> slack;
};

std::string report_header();
std::string format_double(double v);
std::string rows_to_csv(const std::vector<ReportRow>& rows);
std::string rows_to_json(const std::vector<ReportRow>& rows);

struct Scenario {
    std::string id = "scenario";
    double omega = 0.5;            // single omega per run of the core commands
    std::vector<double> omegas{0.5};
    int n_min = 1;
    int n_max = 8;
    std::string mode = "sup"; // sup | orbit
    Word base;                // orbit base block over z
    OptimizerConfig config;
    std::string format = "csv"; // csv | json
};

std::string run_pressure(const Tower& t, const Potential& f, const Scenario& s);
std::string run_weighted(const Tower& t, const Potential& f, const Scenario& s);
std::string run_vp_check(const Tower& t, const Potential& f, const Scenario& s, bool& all_pass);
std::string run_sweep_omega(const Tower& t, const Potential& f, const Scenario& s);

// Property suite over `count` seeded random towers plus two fixed product
// towers; emits a pass/fail matrix. all_pass reports the aggregate.
std::string run_property_suite(std::uint64_t seed, int count, const std::string& format,
                               bool& all_pass);

} // namespace ergopress
