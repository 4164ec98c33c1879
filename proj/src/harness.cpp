#include "ergopress/harness.hpp"

#include <cstdio>
#include <cstdlib>
#include <thread>

#include "json.hpp"

namespace ergopress {

int thread_count() {
    const char* env = std::getenv("ERGOPRESS_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    if (n < 1) n = 1;
    if (n > 64) n = 64;
    return n;
}

void parallel_for(int count, const std::function<void(int)>& fn) {
    const int workers = std::min(thread_count(), count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < count; i += workers) fn(i);
        });
    for (auto& th : pool) th.join();
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string report_header() {
    return "scenario,omega,n,value,argmax,fekete_upper,fekete_extrapolated,"
           "measure_lower,measure_upper,gap,pass,slack";
}

namespace {

std::string opt_str(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

} // namespace

std::string rows_to_csv(const std::vector<ReportRow>& rows) {
    std::string out = report_header() + "\n";
    for (const auto& r : rows) {
        out += r.scenario;
        out += ',' + format_double(r.omega);
        out += ',' + std::to_string(r.n);
        out += ',' + format_double(r.value);
        out += ',' + r.argmax;
        out += ',' + opt_str(r.fekete_upper);
        out += ',' + opt_str(r.fekete_extrapolated);
        out += ',' + opt_str(r.measure_lower);
        out += ',' + opt_str(r.measure_upper);
        out += ',' + opt_str(r.gap);
        out += ',';
        if (r.pass) out += *r.pass ? "1" : "0";
        out += ',' + opt_str(r.slack);
        out += '\n';
    }
    return out;
}

std::string rows_to_json(const std::vector<ReportRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["scenario"] = r.scenario;
        j["omega"] = r.omega;
        j["n"] = r.n;
        j["value"] = r.value;
        j["argmax"] = r.argmax;
        if (r.fekete_upper) j["fekete_upper"] = *r.fekete_upper;
        if (r.fekete_extrapolated) j["fekete_extrapolated"] = *r.fekete_extrapolated;
        if (r.measure_lower) j["measure_lower"] = *r.measure_lower;
        if (r.measure_upper) j["measure_upper"] = *r.measure_upper;
        if (r.gap) j["gap"] = *r.gap;
        if (r.pass) j["pass"] = *r.pass;
        if (r.slack) j["slack"] = *r.slack;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

namespace {

std::string emit(const std::vector<ReportRow>& rows, const std::string& format) {
    return format == "json" ? rows_to_json(rows) : rows_to_csv(rows);
}

} // namespace

std::string run_pressure(const Tower& t, const Potential& f, const Scenario& s) {
    std::vector<double> values;
    for (int n = 1; n <= s.n_max; ++n) values.push_back(pressure_finite(t.x, f, n));
    std::vector<ReportRow> rows;
    for (int n = s.n_min; n <= s.n_max; ++n) {
        std::vector<double> prefix(values.begin(), values.begin() + n);
        PressureEstimate est = fekete_bracket(prefix);
        ReportRow r;
        r.scenario = s.id;
        r.omega = 1.0;
        r.n = n;
        r.value = values[n - 1];
        r.fekete_upper = est.upper;
        r.fekete_extrapolated = est.extrapolated;
        rows.push_back(std::move(r));
    }
    return emit(rows, s.format);
}

std::string run_weighted(const Tower& t, const Potential& f, const Scenario& s) {
    std::vector<ReportRow> rows;
    for (double omega : s.omegas) {
        std::vector<double> values;
        std::vector<Word> argmaxes;
        for (int n = 1; n <= s.n_max; ++n) {
            if (s.mode == "orbit") {
                values.push_back(orbit_average_weighted(t, f, omega, s.base, n));
                argmaxes.emplace_back();
            } else {
                auto [val, zeta] = sup_weighted(t, f, omega, n);
                values.push_back(val);
                argmaxes.push_back(std::move(zeta));
            }
        }
        for (int n = s.n_min; n <= s.n_max; ++n) {
            std::vector<double> prefix(values.begin(), values.begin() + n);
            PressureEstimate est = fekete_bracket(prefix);
            ReportRow r;
            r.scenario = s.id;
            r.omega = omega;
            r.n = n;
            r.value = values[n - 1] / n;
            r.argmax = word_to_string(argmaxes[n - 1], t.z);
            r.fekete_upper = est.upper;
            r.fekete_extrapolated = est.extrapolated;
            rows.push_back(std::move(r));
        }
    }
    return emit(rows, s.format);
}

std::string run_vp_check(const Tower& t, const Potential& f, const Scenario& s, bool& all_pass) {
    std::vector<ReportRow> rows;
    all_pass = true;
    for (double omega : s.omegas) {
        VpReport rep = vp_check(t, f, omega, s.n_min, s.n_max, s.config);
        all_pass = all_pass && rep.all_pass;
        for (const auto& row : rep.rows) {
            ReportRow r;
            r.scenario = s.id;
            r.omega = omega;
            r.n = row.n;
            r.value = row.top_rate;
            r.argmax = word_to_string(row.argmax, t.z);
            r.fekete_upper = row.fekete_upper;
            r.fekete_extrapolated = row.fekete_extrapolated;
            r.measure_lower = row.measure_lower;
            r.measure_upper = row.measure_upper;
            r.gap = row.gap;
            r.pass = row.pass;
            r.slack = row.slack;
            rows.push_back(std::move(r));
        }
    }
    return emit(rows, s.format);
}

std::string run_sweep_omega(const Tower& t, const Potential& f, const Scenario& s) {
    if (s.omegas.size() < 3) throw ValidationError("omega sweep needs at least 3 grid points");
    struct Point {
        double omega, top_upper, measure_lower;
    };
    std::vector<Point> points(s.omegas.size(), Point{});
    parallel_for(static_cast<int>(s.omegas.size()), [&](int i) {
        const double omega = s.omegas[i];
        std::vector<double> values;
        for (int n = 1; n <= s.n_max; ++n) values.push_back(sup_weighted(t, f, omega, n).first);
        PressureEstimate est = fekete_bracket(values);
        VariationalResult opt = optimize(t, f, omega, s.config);
        points[i] = Point{omega, est.upper, opt.best_value.lower};
    });
    std::string out = "omega,topological_upper,measure_lower,second_difference\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        out += format_double(points[i].omega);
        out += ',' + format_double(points[i].top_upper);
        out += ',' + format_double(points[i].measure_lower);
        out += ',';
        if (i > 0 && i + 1 < points.size()) {
            double second = points[i - 1].measure_lower - 2.0 * points[i].measure_lower +
                            points[i + 1].measure_lower;
            out += format_double(second);
        }
        out += '\n';
    }
    return out;
}

} // namespace ergopress
