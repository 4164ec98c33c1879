#include "ergopress/markov.hpp"

#include <algorithm>
#include <cmath>

#include "ergopress/logsum.hpp"

namespace ergopress {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kStationaryTol = 1e-10;
constexpr int kMaxPowerIters = 200000;

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

// Number of closed communicating classes of the support digraph
// (Tarjan SCC, then count components without outgoing edges).
int closed_class_count(const Matrix& kernel) {
    const int n = static_cast<int>(kernel.size());
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (kernel[i][j] > 0.0) adj[i].push_back(j);

    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    int next_index = 0, ncomp = 0;

    auto strongconnect = [&](auto&& self, int v) -> void {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = 1;
        for (int w : adj[v]) {
            if (index[w] < 0) {
                self(self, w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            while (true) {
                int w = stack.back();
                stack.pop_back();
                on_stack[w] = 0;
                comp[w] = ncomp;
                if (w == v) break;
            }
            ++ncomp;
        }
    };
    for (int v = 0; v < n; ++v)
        if (index[v] < 0) strongconnect(strongconnect, v);

    std::vector<char> closed(ncomp, 1);
    for (int i = 0; i < n; ++i)
        for (int j : adj[i])
            if (comp[i] != comp[j]) closed[comp[i]] = 0;
    int count = 0;
    for (char c : closed) count += c;
    return count;
}

} // namespace

std::vector<double> stationary_distribution(const Matrix& kernel, double tol) {
    const int n = static_cast<int>(kernel.size());
    if (n == 0) throw ValidationError("empty kernel");
    for (const auto& row : kernel) {
        if (static_cast<int>(row.size()) != n) throw ValidationError("kernel is not square");
        double s = 0.0;
        for (double e : row) {
            if (e < 0.0 || !std::isfinite(e)) throw ValidationError("kernel entries must be nonnegative");
            s += e;
        }
        if (std::fabs(s - 1.0) > kRowSumTol)
            throw ValidationError("kernel rows must sum to 1");
    }
    if (closed_class_count(kernel) != 1)
        throw ReducibleError("kernel support has multiple closed communicating classes");

    std::vector<double> p(n, 1.0 / n), pk(n), next(n);
    for (int iter = 0; iter < kMaxPowerIters; ++iter) {
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += p[i] * kernel[i][j];
            pk[j] = s;
        }
        double resid = 0.0;
        for (int j = 0; j < n; ++j) resid += std::fabs(pk[j] - p[j]);
        if (resid < tol) {
            double s = 0.0;
            for (double v : pk) s += v;
            for (double& v : pk) v /= s;
            return pk;
        }
        // lazy step keeps periodic chains converging
        for (int j = 0; j < n; ++j) next[j] = 0.5 * (p[j] + pk[j]);
        double s = 0.0;
        for (double v : next) s += v;
        for (int j = 0; j < n; ++j) p[j] = next[j] / s;
    }
    throw ValidationError("power iteration did not converge");
}

double partition_entropy(std::span<const double> p) {
    double total = 0.0, h = 0.0;
    for (double v : p) {
        if (v < -1e-12 || !std::isfinite(v))
            throw NotADistributionError("probabilities must be nonnegative");
        total += v;
        h -= xlogx(std::max(v, 0.0));
    }
    if (std::fabs(total - 1.0) > 1e-9)
        throw NotADistributionError("probabilities must sum to 1");
    return h;
}

double conditional_partition_entropy(const Matrix& joint) {
    std::vector<double> flat, rows;
    for (const auto& row : joint) {
        double rs = 0.0;
        for (double v : row) {
            flat.push_back(v);
            rs += v;
        }
        rows.push_back(rs);
    }
    double h_joint = partition_entropy(flat);
    double h_rows = partition_entropy(rows);
    return h_joint - h_rows;
}

MarkovMeasure MarkovMeasure::from_kernel(const Sft& base, int order, Matrix kernel) {
    if (order < 1) throw ValidationError("measure order must be at least 1");
    HigherBlock hb = higher_block_recode(base, order);
    const int n = hb.sft.size();
    if (static_cast<int>(kernel.size()) != n)
        throw ValidationError("kernel size does not match the " + std::to_string(order) +
                              "-block alphabet (" + std::to_string(n) + " blocks)");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(kernel[i].size()) != n) throw ValidationError("kernel is not square");
        for (int j = 0; j < n; ++j)
            if (kernel[i][j] != 0.0 && !hb.sft.allowed(i, j))
                throw ValidationError("kernel puts mass on a non-overlapping or inadmissible successor");
    }
    std::vector<double> stat = stationary_distribution(kernel);
    MarkovMeasure mu{base, order, std::move(hb), std::move(kernel), std::move(stat)};
    // stationarity residual check (defensive; stationary_distribution enforces it)
    double resid = 0.0;
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += mu.stationary[i] * mu.kernel[i][j];
        resid += std::fabs(s - mu.stationary[j]);
    }
    if (resid > kStationaryTol) throw ValidationError("stationary residual too large");
    return mu;
}

MarkovMeasure MarkovMeasure::parry(const Sft& base, int order) {
    HigherBlock hb = higher_block_recode(base, order);
    auto [lambda, r] = perron_right(hb.sft);
    const int n = hb.sft.size();
    Matrix kernel(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        double rowsum = 0.0;
        for (int j = 0; j < n; ++j)
            if (hb.sft.allowed(i, j)) {
                kernel[i][j] = r[j] / (lambda * r[i]);
                rowsum += kernel[i][j];
            }
        // scrub the residual so rows sum to 1 exactly
        for (int j = 0; j < n; ++j) kernel[i][j] /= rowsum;
    }
    return from_kernel(base, order, std::move(kernel));
}

MarkovMeasure MarkovMeasure::bernoulli(const Sft& base, std::vector<double> p) {
    if (static_cast<int>(p.size()) != base.size())
        throw ValidationError("weight vector does not match the alphabet");
    const int n = base.size();
    Matrix kernel(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        double rowsum = 0.0;
        for (int j : base.successors(i)) rowsum += p[j];
        if (rowsum <= 0.0) throw ValidationError("weights vanish on all successors of " + base.symbol(i));
        for (int j : base.successors(i)) kernel[i][j] = p[j] / rowsum;
    }
    return from_kernel(base, 1, std::move(kernel));
}

double entropy_markov(const MarkovMeasure& mu) {
    double h = 0.0;
    const int n = static_cast<int>(mu.kernel.size());
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row -= xlogx(mu.kernel[i][j]);
        h += mu.stationary[i] * row;
    }
    return h;
}

namespace {

// Forward sweep over target words. At each node the vector alpha holds, per
// hidden block B, the probability of (emitted prefix, block at the current
// window position = B). visit(depth, prefix_prob) fires for every admissible
// prefix in lex order; leaf(word, prob) at depth n when leaf is non-null.
template <typename Visit>
void pushforward_walk(const MarkovMeasure& mu, const SlidingBlockCode& code, int n,
                      const std::vector<double>& alpha0, Visit&& visit,
                      std::vector<std::pair<Word, double>>* out) {
    const Sft& tgt = code.target();
    const int nb = static_cast<int>(mu.blocks.blocks.size());
    const int m = mu.order;

    // image of each block under the code
    std::vector<Word> image(nb);
    for (int b = 0; b < nb; ++b) {
        image[b].reserve(m);
        for (int sym : mu.blocks.blocks[b]) image[b].push_back(code.apply(sym));
    }

    Word v;
    std::vector<std::vector<double>> stack;
    stack.reserve(n + 2); // references into the stack stay valid
    stack.push_back(alpha0);

    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == n) {
            if (out) {
                double p = 0.0;
                for (double a : stack.back()) p += a;
                out->emplace_back(v, p);
            }
            return;
        }
        const auto& cur = stack.back();
        const bool shift = depth >= m; // consume a kernel step before emitting
        std::vector<double> step; // per frame: children recurse below
        if (shift) {
            step.resize(nb);
            for (int j = 0; j < nb; ++j) {
                double s = 0.0;
                for (int i : mu.blocks.sft.predecessors(j)) s += cur[i] * mu.kernel[i][j];
                step[j] = s;
            }
        }
        for (int c = 0; c < tgt.size(); ++c) {
            if (depth > 0 && !tgt.allowed(v.back(), c)) continue;
            std::vector<double> next(nb, 0.0);
            double mass = 0.0;
            if (!shift) {
                for (int b = 0; b < nb; ++b)
                    if (cur[b] > 0.0 && image[b][depth] == c) {
                        next[b] = cur[b];
                        mass += cur[b];
                    }
            } else {
                for (int b = 0; b < nb; ++b)
                    if (step[b] > 0.0 && image[b][m - 1] == c) {
                        next[b] = step[b];
                        mass += step[b];
                    }
            }
            if (mass <= 0.0) continue;
            v.push_back(c);
            stack.push_back(std::move(next));
            visit(depth + 1, mass);
            self(self, depth + 1);
            stack.pop_back();
            v.pop_back();
        }
    };
    rec(rec, 0);
}

void check_code_matches(const MarkovMeasure& mu, const SlidingBlockCode& code) {
    if (code.source().alphabet() != mu.base.alphabet())
        throw ValidationError("code source does not match the measure's shift");
}

} // namespace

std::vector<std::pair<Word, double>> pushforward_word_distribution(const MarkovMeasure& mu,
                                                                   const SlidingBlockCode& code,
                                                                   int n) {
    check_code_matches(mu, code);
    if (n < 1) throw ValidationError("word length must be positive");
    std::vector<std::pair<Word, double>> out;
    pushforward_walk(mu, code, n, mu.stationary, [](int, double) {}, &out);
    return out;
}

std::vector<EntropyBracket> entropy_bracket_profile(const MarkovMeasure& mu,
                                                    const SlidingBlockCode& code, int nmax) {
    check_code_matches(mu, code);
    if (nmax < 2) throw ValidationError("entropy bracket needs n >= 2");
    const int nb = static_cast<int>(mu.blocks.blocks.size());

    // word entropies H[k] of the pushforward, k = 1..nmax; compensated sums,
    // the leaf counts can reach the millions
    std::vector<KahanSum> H(nmax + 1);
    pushforward_walk(
        mu, code, nmax, mu.stationary,
        [&](int depth, double p) {
            if (p > 0.0) H[depth].add(-p * std::log(p));
        },
        nullptr);

    // conditional entropies given the hidden block at time 1:
    // Hc[k] = sum_b stat(b) H(V_1..V_k | B_1 = b)
    std::vector<KahanSum> Hc(nmax + 1);
    std::vector<double> unit(nb, 0.0);
    for (int b = 0; b < nb; ++b) {
        if (mu.stationary[b] <= 0.0) continue;
        unit.assign(nb, 0.0);
        unit[b] = 1.0;
        pushforward_walk(
            mu, code, nmax, unit,
            [&](int depth, double p) {
                if (p > 0.0) Hc[depth].add(-mu.stationary[b] * p * std::log(p));
            },
            nullptr);
    }

    std::vector<EntropyBracket> out;
    out.reserve(nmax - 1);
    for (int k = 2; k <= nmax; ++k)
        out.push_back(
            EntropyBracket{Hc[k].value() - Hc[k - 1].value(), H[k].value() - H[k - 1].value(), k});
    return out;
}

EntropyBracket entropy_bracket_pushforward(const MarkovMeasure& mu, const SlidingBlockCode& code,
                                           int n) {
    auto profile = entropy_bracket_profile(mu, code, n);
    return profile.back();
}

EntropyBracket relative_entropy_bracket(const MarkovMeasure& mu, const SlidingBlockCode& through,
                                        int n) {
    double h = entropy_markov(mu);
    EntropyBracket push = entropy_bracket_pushforward(mu, through, n);
    return EntropyBracket{h - push.upper, h - push.lower, n};
}

EntropyBracket bracket_difference(const EntropyBracket& a, const EntropyBracket& b) {
    return EntropyBracket{a.lower - b.upper, a.upper - b.lower, std::min(a.n_used, b.n_used)};
}

std::vector<double> symbol_marginal(const MarkovMeasure& mu) {
    std::vector<double> p(mu.base.size(), 0.0);
    for (std::size_t b = 0; b < mu.blocks.blocks.size(); ++b)
        p[mu.blocks.blocks[b][0]] += mu.stationary[b];
    return p;
}

double integrate_potential(const MarkovMeasure& mu, const Potential& f) {
    if (static_cast<int>(f.values.size()) != mu.base.size())
        throw ValidationError("potential does not match the measure's alphabet");
    std::vector<double> p = symbol_marginal(mu);
    double s = 0.0;
    for (int a = 0; a < mu.base.size(); ++a) s += p[a] * f.values[a];
    return s;
}

std::pair<double, std::vector<double>> perron_right(const Sft& sft, double tol) {
    if (!sft.strongly_connected())
        throw ReducibleError("Perron data needs an irreducible transition graph");
    const int n = sft.size();
    std::vector<double> r(n, 1.0), next(n);
    double lambda = 0.0;
    for (int iter = 0; iter < kMaxPowerIters; ++iter) {
        // iterate A + I so periodic graphs converge too
        for (int i = 0; i < n; ++i) {
            double s = r[i];
            for (int j : sft.successors(i)) s += r[j];
            next[i] = s;
        }
        double norm = 0.0;
        for (double v : next) norm = std::max(norm, v);
        for (double& v : next) v /= norm;
        double diff = 0.0;
        for (int i = 0; i < n; ++i) diff = std::max(diff, std::fabs(next[i] - r[i]));
        r.swap(next);
        lambda = norm - 1.0;
        if (diff < tol && iter > 2) return {lambda, r};
    }
    throw ValidationError("Perron power iteration did not converge");
}

} // namespace ergopress
