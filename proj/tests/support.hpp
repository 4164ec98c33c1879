#pragma once

// Shared fixtures and brute-force oracles. The oracles deliberately avoid the
// library's DP paths: words are enumerated by filtering all symbol sequences,
// and sums are taken in plain linear arithmetic.

#include <cmath>
#include <map>
#include <vector>

#include "ergopress/builders.hpp"
#include "ergopress/fiber.hpp"
#include "ergopress/markov.hpp"

namespace oracle {

using namespace ergopress;

inline const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

// every length-n symbol sequence over {0..k-1}, admissible or not
inline std::vector<Word> all_sequences(int k, int n) {
    std::vector<Word> out;
    Word w(n, 0);
    while (true) {
        out.push_back(w);
        int i = n - 1;
        while (i >= 0 && w[i] == k - 1) w[i--] = 0;
        if (i < 0) break;
        ++w[i];
    }
    if (n == 0) out.assign(1, Word{});
    return out;
}

inline std::vector<Word> brute_words(const Sft& s, int n) {
    std::vector<Word> out;
    for (auto& w : all_sequences(s.size(), n))
        if (s.word_admissible(w)) out.push_back(w);
    return out;
}

// sum over admissible n-words of exp(S_n f), linear arithmetic
inline double brute_pressure_sum(const Sft& s, const Potential& f, int n) {
    double total = 0.0;
    for (const auto& w : brute_words(s, n)) total += std::exp(birkhoff_sum(f, w));
    return total;
}

// W_n(zeta) = sum over fiber y-words v of (sum over x-words u over v of e^{S f})^omega
inline double brute_fiber_weight(const Tower& t, const Potential& f, double omega,
                                 const Word& zeta) {
    const int n = static_cast<int>(zeta.size());
    std::map<Word, double> inner;
    for (const auto& u : brute_words(t.x, n)) {
        Word v(n), z(n);
        for (int i = 0; i < n; ++i) {
            v[i] = t.pi.apply(u[i]);
            z[i] = t.phi.apply(v[i]);
        }
        if (z == zeta) inner[v] += std::exp(birkhoff_sum(f, u));
    }
    double total = 0.0;
    for (const auto& [v, w] : inner) total += std::pow(w, omega);
    return total;
}

// exact n-word distribution of the pushforward, by enumerating source words
inline std::map<Word, double> brute_pushforward(const MarkovMeasure& mu,
                                                const SlidingBlockCode& code, int n) {
    std::map<Word, double> dist;
    const int m = mu.order;
    const int total_len = std::max(n, m);
    for (const auto& u : brute_words(mu.base, total_len)) {
        // probability of the base cylinder under the order-m measure
        Word first(u.begin(), u.begin() + m);
        int b = mu.blocks.block_index(first);
        if (b < 0) continue;
        double p = mu.stationary[b];
        for (int s = 1; s + m <= total_len; ++s) {
            Word next(u.begin() + s, u.begin() + s + m);
            int b2 = mu.blocks.block_index(next);
            p *= mu.kernel[b][b2];
            b = b2;
        }
        if (p <= 0.0) continue;
        Word image(n);
        for (int i = 0; i < n; ++i) image[i] = code.apply(u[i]);
        dist[image] += p;
    }
    // n < m leaves duplicate base words per image; the map accumulation
    // already folds them
    return dist;
}

inline double entropy_of(const std::map<Word, double>& dist) {
    double h = 0.0;
    for (const auto& [w, p] : dist)
        if (p > 0.0) h -= p * std::log(p);
    return h;
}

inline Tower golden_tower() { return identity_tower(golden_mean()); }

} // namespace oracle
