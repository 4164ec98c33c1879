#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ergopress/sft.hpp"

namespace ergopress {

using Matrix = std::vector<std::vector<double>>;

// Unique stationary vector of a row-stochastic kernel whose support graph
// has a single closed communicating class. Power iteration (lazy-damped so
// periodic kernels converge); residual ||pK - p||_1 below tol.
std::vector<double> stationary_distribution(const Matrix& kernel, double tol = 1e-13);

// H(p) = -sum p log p with 0 log 0 = 0.
double partition_entropy(std::span<const double> p);

// H(joint) - H(row marginal), the conditional entropy of columns given rows.
double conditional_partition_entropy(const Matrix& joint);

// Order-m shift-invariant Markov measure on a base SFT, represented on the
// m-block recoding so everything downstream sees a 1-step chain.
struct MarkovMeasure {
    Sft base;
    int order = 1;
    HigherBlock blocks;
    Matrix kernel; // row-stochastic over block alphabet, 0 off the block graph
    std::vector<double> stationary;

    static MarkovMeasure from_kernel(const Sft& base, int order, Matrix kernel);
    // Maximal-entropy (Parry) measure of the recoded graph.
    static MarkovMeasure parry(const Sft& base, int order = 1);
    // Product measure from symbol weights; rows are p restricted to the
    // allowed successors and renormalized (plain Bernoulli on full shifts).
    static MarkovMeasure bernoulli(const Sft& base, std::vector<double> p);
};

// Entropy rate -sum_i stat_i sum_j k_ij log k_ij.
double entropy_markov(const MarkovMeasure& mu);

// Exact target n-word probabilities of the pushforward through a 1-block
// code, by the forward algorithm over hidden source blocks. Lex order.
std::vector<std::pair<Word, double>> pushforward_word_distribution(const MarkovMeasure& mu,
                                                                   const SlidingBlockCode& code,
                                                                   int n);

struct EntropyBracket {
    double lower = 0.0;
    double upper = 0.0;
    int n_used = 0;
    double width() const { return upper - lower; }
};

// Certified bracket for the entropy rate of the pushforward:
//   upper_n = H(n-words) - H((n-1)-words)            (nonincreasing)
//   lower_n = H(nth symbol | previous n-1 symbols and the hidden source
//             block at time 1)                        (nondecreasing)
EntropyBracket entropy_bracket_pushforward(const MarkovMeasure& mu, const SlidingBlockCode& code,
                                           int n);
// Brackets for every level 2..nmax from one sweep.
std::vector<EntropyBracket> entropy_bracket_profile(const MarkovMeasure& mu,
                                                    const SlidingBlockCode& code, int nmax);

// h_mu(T | target of `through`) = h_mu(T) - h_pushforward, as an interval.
EntropyBracket relative_entropy_bracket(const MarkovMeasure& mu, const SlidingBlockCode& through,
                                        int n);

// Interval difference a - b.
EntropyBracket bracket_difference(const EntropyBracket& a, const EntropyBracket& b);

// sum over symbols of stationary-marginal(symbol) * f(symbol).
double integrate_potential(const MarkovMeasure& mu, const Potential& f);

// Stationary marginal on base symbols (first symbol of the block).
std::vector<double> symbol_marginal(const MarkovMeasure& mu);

// Perron data of a 0/1 adjacency: (eigenvalue, right eigenvector).
std::pair<double, std::vector<double>> perron_right(const Sft& sft, double tol = 1e-14);

} // namespace ergopress
