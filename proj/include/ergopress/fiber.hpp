#pragma once

#include <utility>
#include <vector>

#include "ergopress/sft.hpp"

namespace ergopress {

// log sum over admissible n-words of exp(S_n f), log-domain stabilized.
double pressure_finite(const Sft& sft, const Potential& f, int n);

// Per-fiber weight table at a z-word zeta of length n:
//   W_v = sum over admissible x-words u with pi(u) = v of exp(S_n f(u))
//   total = log sum over fiber y-words v (phi(v) = zeta) of W_v^omega
// Only v with W_v > 0 are listed.
struct FiberWeightTable {
    Word zeta;
    double omega = 1.0;
    std::vector<std::pair<Word, double>> log_inner; // (v, log W_v), lex order
    double total = 0.0;
};

FiberWeightTable weighted_fiber_weight(const Tower& t, const Potential& f, double omega,
                                       const Word& zeta);

// Same total without materializing the per-v table.
double weighted_fiber_total(const Tower& t, const Potential& f, double omega, const Word& zeta);

// Totals for every admissible zeta of length n, lex order, one sweep over
// the y-words. Bit-identical to per-zeta calls (same leaf order per fiber).
std::vector<std::pair<Word, double>> fiber_totals_all(const Tower& t, const Potential& f,
                                                      double omega, int n);

// max over admissible zeta of log W_n(zeta), lexicographically-first argmax.
std::pair<double, Word> sup_weighted(const Tower& t, const Potential& f, double omega, int n);

// (1/p) sum of log W_n over the length-n prefixes of the p shifts of the
// periodic point base^infinity.
double orbit_average_weighted(const Tower& t, const Potential& f, double omega, const Word& base,
                              int n);

// Fekete estimates from a subadditive sequence a_1..a_N.
struct PressureEstimate {
    std::vector<double> values; // a_1..a_N
    double upper = 0.0;         // min_n a_n / n
    double extrapolated = 0.0;  // (a_N - a_{N/2}) / (N - N/2)
    int nmax = 0;
};

PressureEstimate fekete_bracket(const std::vector<double>& values);

// max over admissible target n-words v of log(#preimage source n-words).
double conditional_top_entropy_finite(const SlidingBlockCode& code, int n);

} // namespace ergopress
