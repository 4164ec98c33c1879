#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ergopress/fiber.hpp"
#include "ergopress/markov.hpp"

namespace ergopress {

// Interval value of  omega * h_mu(T|R) + (1-omega) * h_nu(S|R) + omega * int f dmu,
// with the two relative entropies carried as certified brackets.
struct ObjectiveValue {
    double lower = 0.0;
    double upper = 0.0;
    EntropyBracket h_x_given_z; // h_mu(T|R)
    EntropyBracket h_y_given_z; // h_numu(S|R)
    double integral_f = 0.0;
    double omega = 1.0;
};

ObjectiveValue weighted_objective(const Tower& t, const MarkovMeasure& mu, const Potential& f,
                                  double omega, int n_entropy);

// Independent oracle for the full-shift product tower X = (A x B)^N over
// Y = B^N and a point Z:  log sum_b (sum_a e^{f(a,b)})^omega.
double closed_form_product_tower(int size_a, int size_b, const Matrix& f_ab, double omega);

// The finite-level extremal construction: weights (W_{pi(u)})^{omega-1} e^{S_n f(u)}
// over x-words u in the psi-fiber of zeta, shift-averaged (order+1)-block
// frequencies, rows renormalized into an exactly invariant Markov kernel.
// order = 0 yields the induced independence (Bernoulli) measure as order 1.
MarkovMeasure extremal_measure(const Tower& t, const Potential& f, double omega, const Word& zeta,
                               int order);

struct OptimizerConfig {
    int order = 1;
    int restarts = 8;
    std::uint64_t seed = 42;
    int n_entropy = 10;
    int max_iters = 500;
    double tol = 1e-9;
};

struct VariationalResult {
    MarkovMeasure best;
    ObjectiveValue best_value;
    std::vector<std::pair<int, double>> trace; // (global iteration, accepted lower bound)
    int restarts = 0;
    std::uint64_t seed = 0;
};

// Projected finite-difference ascent on kernel rows over the simplex,
// restarted from extremal seeds, the Parry seed and seeded random kernels.
// Ranks by the interval lower bound; fully reproducible from the seed.
VariationalResult optimize(const Tower& t, const Potential& f, double omega,
                           const OptimizerConfig& config);

// gap = log sum e^{c_i} - sum p_i (c_i - log p_i) >= 0, zero iff p is the
// Gibbs distribution of c.
double weighted_jensen_gap(std::span<const double> p, std::span<const double> c);

struct VpRow {
    int n = 0;
    double top_rate = 0.0; // sup_zeta (1/n) log W_n(zeta)
    Word argmax;
    double fekete_upper = 0.0;
    double fekete_extrapolated = 0.0;
    double measure_lower = 0.0;
    double measure_upper = 0.0;
    double gap = 0.0;   // fekete_upper - measure_lower
    double slack = 0.0; // bracket widths + 1e-9
    bool pass = false;
};

struct VpReport {
    double omega = 0.0;
    std::vector<VpRow> rows;
    VariationalResult best;
    bool all_pass = true;
};

VpReport vp_check(const Tower& t, const Potential& f, double omega, int n_min, int n_max,
                  const OptimizerConfig& config);

} // namespace ergopress
