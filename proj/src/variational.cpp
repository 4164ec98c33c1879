#include "ergopress/variational.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "ergopress/logsum.hpp"
#include "ergopress/rng.hpp"

namespace ergopress {

ObjectiveValue weighted_objective(const Tower& t, const MarkovMeasure& mu, const Potential& f,
                                  double omega, int n_entropy) {
    if (!(omega >= 0.0 && omega <= 1.0)) throw ValidationError("omega must be in [0,1]");
    if (mu.base.alphabet() != t.x.alphabet())
        throw ValidationError("measure does not live on the tower's x shift");

    const double h_x = entropy_markov(mu);
    EntropyBracket push_y = entropy_bracket_pushforward(mu, t.pi, n_entropy);
    EntropyBracket push_z = entropy_bracket_pushforward(mu, t.psi, n_entropy);

    ObjectiveValue v;
    v.omega = omega;
    v.integral_f = integrate_potential(mu, f);
    v.h_x_given_z = EntropyBracket{h_x - push_z.upper, h_x - push_z.lower, n_entropy};
    v.h_y_given_z = bracket_difference(push_y, push_z);
    v.lower = omega * v.h_x_given_z.lower + (1.0 - omega) * v.h_y_given_z.lower +
              omega * v.integral_f;
    v.upper = omega * v.h_x_given_z.upper + (1.0 - omega) * v.h_y_given_z.upper +
              omega * v.integral_f;
    return v;
}

double closed_form_product_tower(int size_a, int size_b, const Matrix& f_ab, double omega) {
    if (static_cast<int>(f_ab.size()) != size_a)
        throw ValidationError("f table has the wrong number of rows");
    StreamingLogSum acc;
    for (int b = 0; b < size_b; ++b) {
        StreamingLogSum inner;
        for (int a = 0; a < size_a; ++a) {
            if (static_cast<int>(f_ab[a].size()) != size_b)
                throw ValidationError("f table has the wrong number of columns");
            inner.add(f_ab[a][b]);
        }
        acc.add(omega * inner.value());
    }
    return acc.value();
}

namespace {

// Walk the psi-fiber of zeta (y-words v with phi(v) = zeta), carrying the
// log-domain forward vectors over x-symbols for every depth. At each leaf,
// run the backward pass and fold the block statistics into `blocks_acc`.
struct ExtremalStats {
    // log-domain accumulators for (order+1)-block weights, indexed by the
    // flattened base-symbol tuple
    std::vector<StreamingLogSum> blocks_acc;
    StreamingLogSum normalizer; // log W_{n,z} (sum of W_v^omega)
};

void extremal_accumulate(const Tower& t, const Potential& f, double omega, const Word& zeta,
                         int block_len, ExtremalStats& stats) {
    const int n = static_cast<int>(zeta.size());
    const int nx = t.x.size();
    if (!t.z.word_admissible(zeta)) throw InadmissibleWordError("zeta is not admissible in z");

    Word v;
    std::vector<std::vector<double>> forward; // forward[t][x], t = 1..depth
    forward.reserve(n + 1);
    std::vector<double> terms;

    auto flat_index = [&](const int* path) {
        int idx = 0;
        for (int k = 0; k < block_len; ++k) idx = idx * nx + path[k];
        return idx;
    };

    auto leaf = [&]() {
        const auto& last = forward.back();
        double logw = log_sum_exp(last);
        if (logw == neg_inf) return;
        stats.normalizer.add(omega * logw);
        const double coeff = (omega - 1.0) * logw - std::log(static_cast<double>(n - block_len + 1));

        // backward vectors over x-symbols, beta[t][x] = log-sum over
        // admissible suffixes from position t+1 given u_t = x
        std::vector<std::vector<double>> beta(n + 1, std::vector<double>(nx, neg_inf));
        for (int x = 0; x < nx; ++x)
            if (t.pi.apply(x) == v[n - 1]) beta[n][x] = 0.0;
        for (int s = n - 1; s >= 1; --s) {
            for (int x = 0; x < nx; ++x) {
                if (t.pi.apply(x) != v[s - 1]) continue;
                terms.clear();
                for (int x2 : t.x.successors(x)) {
                    if (t.pi.apply(x2) != v[s]) continue;
                    if (beta[s + 1][x2] != neg_inf)
                        terms.push_back(beta[s + 1][x2] + f.values[x2]);
                }
                if (!terms.empty()) beta[s][x] = log_sum_exp(terms);
            }
        }

        // enumerate (block_len)-symbol paths at every start position
        std::vector<int> path(block_len);
        auto paths = [&](auto&& self, int s, int k, double acc) -> void {
            if (k == block_len) {
                double tail = beta[s + block_len][path[block_len - 1]];
                if (tail != neg_inf)
                    stats.blocks_acc[flat_index(path.data())].add(coeff + acc + tail);
                return;
            }
            if (k == 0) {
                // forward[t-1] holds the prefix sums after t symbols
                for (int x = 0; x < nx; ++x) {
                    if (forward[s][x] == neg_inf) continue;
                    path[0] = x;
                    self(self, s, 1, forward[s][x]);
                }
            } else {
                int prev = path[k - 1];
                for (int x : t.x.successors(prev)) {
                    if (t.pi.apply(x) != v[s + k]) continue;
                    path[k] = x;
                    self(self, s, k + 1, acc + f.values[x]);
                }
            }
        };
        for (int s = 0; s + block_len <= n; ++s) paths(paths, s, 0, 0.0);
    };

    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == n) {
            leaf();
            return;
        }
        const int want = zeta[depth];
        for (int c = 0; c < t.y.size(); ++c) {
            if (t.phi.apply(c) != want) continue;
            if (depth > 0 && !t.y.allowed(v.back(), c)) continue;
            std::vector<double> next(nx, neg_inf);
            bool any = false;
            if (depth == 0) {
                for (int a : t.pi.preimages(c)) {
                    next[a] = f.values[a];
                    any = true;
                }
            } else {
                const auto& cur = forward.back();
                for (int b : t.pi.preimages(c)) {
                    terms.clear();
                    for (int a : t.x.predecessors(b))
                        if (cur[a] != neg_inf) terms.push_back(cur[a]);
                    if (terms.empty()) continue;
                    next[b] = log_sum_exp(terms) + f.values[b];
                    any = true;
                }
            }
            if (!any) continue;
            v.push_back(c);
            forward.push_back(std::move(next));
            self(self, depth + 1);
            forward.pop_back();
            v.pop_back();
        }
    };
    rec(rec, 0);
}

} // namespace

MarkovMeasure extremal_measure(const Tower& t, const Potential& f, double omega, const Word& zeta,
                               int order) {
    if (order < 0) throw ValidationError("order must be nonnegative");
    const int n = static_cast<int>(zeta.size());
    if (n <= order) throw OrderTooLargeError("need n > order for block frequencies");
    const int nx = t.x.size();
    const int block_len = order + 1;

    ExtremalStats stats;
    std::size_t n_tuples = 1;
    for (int k = 0; k < block_len; ++k) n_tuples *= nx;
    stats.blocks_acc.resize(n_tuples);
    extremal_accumulate(t, f, omega, zeta, block_len, stats);
    if (stats.normalizer.empty())
        throw EmptyFiberError("zeta '" + word_to_string(zeta, t.z) + "' has an empty fiber");

    // linear-domain block frequencies, normalized
    std::vector<double> freq(n_tuples, 0.0);
    double lse_max = neg_inf;
    for (const auto& acc : stats.blocks_acc)
        if (!acc.empty()) lse_max = std::max(lse_max, acc.value());
    double total = 0.0;
    for (std::size_t i = 0; i < n_tuples; ++i)
        if (!stats.blocks_acc[i].empty()) {
            freq[i] = std::exp(stats.blocks_acc[i].value() - lse_max);
            total += freq[i];
        }
    for (double& x : freq) x /= total;

    if (order == 0) {
        // independence case: rows proportional to the symbol frequencies
        return MarkovMeasure::bernoulli(t.x, freq);
    }

    HigherBlock hb = higher_block_recode(t.x, order);
    const int nb = hb.sft.size();
    Matrix kernel(nb, std::vector<double>(nb, 0.0));
    for (int i = 0; i < nb; ++i) {
        double rowsum = 0.0;
        std::vector<double> row(nb, 0.0);
        for (int j : hb.sft.successors(i)) {
            // (order+1)-tuple = block i extended by the last symbol of block j
            int idx = 0;
            for (int k = 0; k < order; ++k) idx = idx * nx + hb.blocks[i][k];
            idx = idx * nx + hb.blocks[j][order - 1];
            row[j] = freq[idx];
            rowsum += row[j];
        }
        if (rowsum > 0.0) {
            for (int j = 0; j < nb; ++j) kernel[i][j] = row[j] / rowsum;
        } else {
            // block never seen in the fiber: spread uniformly, it gets no mass
            const auto& succ = hb.sft.successors(i);
            for (int j : succ) kernel[i][j] = 1.0 / succ.size();
        }
    }
    return MarkovMeasure::from_kernel(t.x, order, std::move(kernel));
}

double weighted_jensen_gap(std::span<const double> p, std::span<const double> c) {
    if (p.size() != c.size()) throw ValidationError("p and c must have the same length");
    double total = 0.0;
    for (double v : p) {
        if (v < 0.0 || !std::isfinite(v)) throw NotADistributionError("p must be nonnegative");
        total += v;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw NotADistributionError("p must sum to 1");
    double lhs = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0.0) lhs += p[i] * (c[i] - std::log(p[i]));
    return log_sum_exp(c) - lhs;
}

namespace {

// Euclidean projection of y onto the probability simplex over the index
// subset `support`; other coordinates are forced to zero.
void project_row_simplex(std::vector<double>& row, const std::vector<int>& support) {
    std::vector<double> y;
    y.reserve(support.size());
    for (int j : support) y.push_back(row[j]);
    std::vector<double> sorted = y;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double cum = 0.0, theta = 0.0;
    int k = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        cum += sorted[i];
        double t = (cum - 1.0) / static_cast<double>(i + 1);
        if (sorted[i] - t > 0.0) {
            theta = t;
            k = static_cast<int>(i + 1);
        }
    }
    if (k == 0) theta = (cum - 1.0) / static_cast<double>(sorted.size());
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t i = 0; i < support.size(); ++i)
        row[support[i]] = std::max(0.0, y[i] - theta);
    // scrub residual rounding so rows sum to 1 exactly enough for validation
    double s = 0.0;
    for (int j : support) s += row[j];
    for (int j : support) row[j] /= s;
}

struct AscentState {
    Matrix kernel;
    double value = neg_inf;
    ObjectiveValue objective;
};

} // namespace

VariationalResult optimize(const Tower& t, const Potential& f, double omega,
                           const OptimizerConfig& config) {
    if (config.order < 1) throw ValidationError("optimizer order must be at least 1");
    if (config.restarts < 1) throw ValidationError("need at least one restart");

    HigherBlock hb = higher_block_recode(t.x, config.order);
    const int nb = hb.sft.size();
    std::vector<std::vector<int>> support(nb);
    for (int i = 0; i < nb; ++i) support[i] = hb.sft.successors(i);

    auto evaluate = [&](const Matrix& kernel, ObjectiveValue* out) -> double {
        try {
            MarkovMeasure mu = MarkovMeasure::from_kernel(t.x, config.order, kernel);
            ObjectiveValue v = weighted_objective(t, mu, f, omega, config.n_entropy);
            if (out) *out = v;
            return v.lower;
        } catch (const ValidationError&) {
            return neg_inf; // candidate left the feasible set (reducible support)
        }
    };

    // seed kernels, in a fixed order: Parry, extremal at increasing n, random
    std::vector<Matrix> seeds;
    seeds.push_back(MarkovMeasure::parry(t.x, config.order).kernel);
    const int extremal_budget = std::min(3, config.restarts - 1);
    for (int e = 0; e < extremal_budget; ++e) {
        int n_seed = std::max(config.order + 2, 4) + 3 * e;
        try {
            auto [val, zeta] = sup_weighted(t, f, omega, n_seed);
            (void)val;
            seeds.push_back(extremal_measure(t, f, omega, zeta, config.order).kernel);
        } catch (const DomainError&) {
            // fall through to a random seed below
        } catch (const ValidationError&) {
        }
    }
    Rng rng(config.seed);
    int random_index = 0;
    while (static_cast<int>(seeds.size()) < config.restarts) {
        Rng stream = rng.split(random_index++);
        Matrix kernel(nb, std::vector<double>(nb, 0.0));
        for (int i = 0; i < nb; ++i) {
            double rowsum = 0.0;
            for (int j : support[i]) {
                kernel[i][j] = -std::log(1.0 - stream.uniform());
                rowsum += kernel[i][j];
            }
            for (int j : support[i]) kernel[i][j] /= rowsum;
        }
        seeds.push_back(std::move(kernel));
    }
    seeds.resize(config.restarts);

    const double fd_step = 1e-4;
    VariationalResult result{MarkovMeasure::parry(t.x, config.order), ObjectiveValue{}, {}, 0,
                             config.seed};
    bool have_best = false;
    int global_iter = 0;

    for (int r = 0; r < config.restarts; ++r) {
        AscentState state;
        state.kernel = seeds[r];
        state.value = evaluate(state.kernel, &state.objective);
        if (state.value == neg_inf) continue;
        result.trace.emplace_back(global_iter++, state.value);

        double step = 0.5;
        for (int iter = 0; iter < config.max_iters; ++iter) {
            // forward-difference gradient, entry by entry on each row
            Matrix grad(nb, std::vector<double>(nb, 0.0));
            for (int i = 0; i < nb; ++i) {
                if (support[i].size() < 2) continue;
                for (int j : support[i]) {
                    Matrix probe = state.kernel;
                    probe[i][j] += fd_step;
                    project_row_simplex(probe[i], support[i]);
                    double v = evaluate(probe, nullptr);
                    grad[i][j] = v == neg_inf ? 0.0 : (v - state.value) / fd_step;
                }
            }
            bool improved = false;
            while (step >= 1e-8) {
                Matrix cand = state.kernel;
                for (int i = 0; i < nb; ++i) {
                    if (support[i].size() < 2) continue;
                    for (int j : support[i]) cand[i][j] += step * grad[i][j];
                    project_row_simplex(cand[i], support[i]);
                }
                ObjectiveValue cand_obj;
                double v = evaluate(cand, &cand_obj);
                if (v > state.value) {
                    const double gain = v - state.value;
                    state.kernel = std::move(cand);
                    state.value = v;
                    state.objective = cand_obj;
                    result.trace.emplace_back(global_iter++, v);
                    improved = true;
                    if (gain < config.tol) iter = config.max_iters; // converged
                    break;
                }
                step *= 0.5;
            }
            if (!improved) break;
        }

        if (!have_best || state.value > result.best_value.lower) {
            result.best = MarkovMeasure::from_kernel(t.x, config.order, state.kernel);
            result.best_value = state.objective;
            have_best = true;
        }
    }
    if (!have_best) throw DomainError("no restart produced a feasible measure");
    result.restarts = config.restarts;
    return result;
}

VpReport vp_check(const Tower& t, const Potential& f, double omega, int n_min, int n_max,
                  const OptimizerConfig& config) {
    if (n_min < 1 || n_max < n_min) throw ValidationError("need 1 <= n_min <= n_max");
    VpReport report{omega, {}, optimize(t, f, omega, config), true};

    std::vector<double> values;
    std::vector<Word> argmaxes;
    for (int n = 1; n <= n_max; ++n) {
        auto [val, zeta] = sup_weighted(t, f, omega, n);
        values.push_back(val);
        argmaxes.push_back(zeta);
    }
    const ObjectiveValue& m = report.best.best_value;
    const double slack = m.h_x_given_z.width() + m.h_y_given_z.width() + 1e-9;
    for (int n = n_min; n <= n_max; ++n) {
        std::vector<double> prefix(values.begin(), values.begin() + n);
        PressureEstimate est = fekete_bracket(prefix);
        VpRow row;
        row.n = n;
        row.top_rate = values[n - 1] / n;
        row.argmax = argmaxes[n - 1];
        row.fekete_upper = est.upper;
        row.fekete_extrapolated = est.extrapolated;
        row.measure_lower = m.lower;
        row.measure_upper = m.upper;
        row.gap = est.upper - m.lower;
        row.slack = slack;
        row.pass = m.lower <= est.upper + slack;
        report.all_pass = report.all_pass && row.pass;
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace ergopress
