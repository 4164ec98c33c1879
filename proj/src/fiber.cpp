#include "ergopress/fiber.hpp"

#include <cmath>
#include <map>

#include "ergopress/logsum.hpp"

namespace ergopress {

double pressure_finite(const Sft& sft, const Potential& f, int n) {
    if (n < 1) throw ValidationError("pressure level n must be positive");
    if (static_cast<int>(f.values.size()) != sft.size())
        throw ValidationError("potential does not match the alphabet");
    const int k = sft.size();
    std::vector<double> cur(k), next(k);
    for (int a = 0; a < k; ++a) cur[a] = f.values[a];
    std::vector<double> terms;
    for (int t = 1; t < n; ++t) {
        for (int b = 0; b < k; ++b) {
            terms.clear();
            for (int a : sft.predecessors(b)) terms.push_back(cur[a]);
            next[b] = log_sum_exp(terms) + f.values[b];
        }
        cur.swap(next);
    }
    return log_sum_exp(cur);
}

namespace {

// Depth-first walk over admissible y-words of length n, restricted to the
// fiber of zeta when zeta is non-null, carrying the log-domain inner-sum
// vector over x-symbols. leaf(v, xvec) fires at depth n in lex order of v.
// The x-vector never materializes x-words: O(|x-alphabet|) per depth.
template <typename Leaf>
void fiber_walk(const Tower& t, const Potential& f, const Word* zeta, int n, Leaf&& leaf) {
    if (n < 1) throw ValidationError("fiber level n must be positive");
    if (static_cast<int>(f.values.size()) != t.x.size())
        throw ValidationError("potential does not match the x alphabet");
    if (zeta && !t.z.word_admissible(*zeta))
        throw InadmissibleWordError("zeta is not admissible in z");

    const int nx = t.x.size();
    Word v;
    v.reserve(n);
    std::vector<std::vector<double>> stack; // xvec per depth
    stack.reserve(n + 1);
    std::vector<double> terms;

    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == n) {
            leaf(v, stack.back());
            return;
        }
        const int want = zeta ? (*zeta)[depth] : -1;
        for (int c = 0; c < t.y.size(); ++c) {
            if (want >= 0 && t.phi.apply(c) != want) continue;
            if (depth > 0 && !t.y.allowed(v.back(), c)) continue;
            std::vector<double> next(nx, neg_inf);
            bool any = false;
            if (depth == 0) {
                for (int a : t.pi.preimages(c)) {
                    next[a] = f.values[a];
                    any = true;
                }
            } else {
                const auto& cur = stack.back();
                for (int b : t.pi.preimages(c)) {
                    terms.clear();
                    for (int a : t.x.predecessors(b))
                        if (cur[a] != neg_inf) terms.push_back(cur[a]);
                    if (terms.empty()) continue;
                    next[b] = log_sum_exp(terms) + f.values[b];
                    any = true;
                }
            }
            if (!any) continue; // no x-word over this y-prefix
            v.push_back(c);
            stack.push_back(std::move(next));
            self(self, depth + 1);
            stack.pop_back();
            v.pop_back();
        }
    };
    rec(rec, 0);
}

void check_omega(double omega) {
    if (!(omega >= 0.0 && omega <= 1.0)) throw ValidationError("omega must be in [0,1]");
}

} // namespace

FiberWeightTable weighted_fiber_weight(const Tower& t, const Potential& f, double omega,
                                       const Word& zeta) {
    check_omega(omega);
    const int n = static_cast<int>(zeta.size());
    FiberWeightTable table;
    table.zeta = zeta;
    table.omega = omega;
    StreamingLogSum acc;
    fiber_walk(t, f, &zeta, n, [&](const Word& v, const std::vector<double>& xvec) {
        double w = log_sum_exp(xvec);
        if (w == neg_inf) return;
        table.log_inner.emplace_back(v, w);
        acc.add(omega * w);
    });
    if (acc.empty())
        throw EmptyFiberError("zeta '" + word_to_string(zeta, t.z) + "' has an empty fiber");
    table.total = acc.value();
    return table;
}

double weighted_fiber_total(const Tower& t, const Potential& f, double omega, const Word& zeta) {
    check_omega(omega);
    StreamingLogSum acc;
    fiber_walk(t, f, &zeta, static_cast<int>(zeta.size()),
               [&](const Word&, const std::vector<double>& xvec) {
                   double w = log_sum_exp(xvec);
                   if (w != neg_inf) acc.add(omega * w);
               });
    if (acc.empty())
        throw EmptyFiberError("zeta '" + word_to_string(zeta, t.z) + "' has an empty fiber");
    return acc.value();
}

std::vector<std::pair<Word, double>> fiber_totals_all(const Tower& t, const Potential& f,
                                                      double omega, int n) {
    check_omega(omega);
    std::map<Word, StreamingLogSum> acc;
    fiber_walk(t, f, nullptr, n, [&](const Word& v, const std::vector<double>& xvec) {
        double w = log_sum_exp(xvec);
        if (w == neg_inf) return;
        Word zeta;
        zeta.reserve(v.size());
        for (int c : v) zeta.push_back(t.phi.apply(c));
        acc[zeta].add(omega * w);
    });
    std::vector<std::pair<Word, double>> out;
    out.reserve(acc.size());
    for (auto& [zeta, sum] : acc) out.emplace_back(zeta, sum.value());
    return out;
}

std::pair<double, Word> sup_weighted(const Tower& t, const Potential& f, double omega, int n) {
    auto totals = fiber_totals_all(t, f, omega, n);
    if (totals.empty()) throw EmptyFiberError("no z-word of length " + std::to_string(n) +
                                              " carries a nonempty fiber");
    double best = totals.front().second;
    const Word* arg = &totals.front().first;
    for (const auto& [zeta, total] : totals)
        if (total > best) {
            best = total;
            arg = &zeta;
        }
    return {best, *arg};
}

double orbit_average_weighted(const Tower& t, const Potential& f, double omega, const Word& base,
                              int n) {
    if (base.empty()) throw InadmissiblePeriodError("empty period block");
    if (!t.z.word_admissible(base) || !t.z.allowed(base.back(), base.front()))
        throw InadmissiblePeriodError("base block '" + word_to_string(base, t.z) +
                                      "' does not close into a periodic point");
    const int p = static_cast<int>(base.size());
    double sum = 0.0;
    for (int i = 0; i < p; ++i) {
        Word zeta(n);
        for (int k = 0; k < n; ++k) zeta[k] = base[(i + k) % p];
        sum += weighted_fiber_total(t, f, omega, zeta);
    }
    return sum / p;
}

PressureEstimate fekete_bracket(const std::vector<double>& values) {
    if (values.empty()) throw ValidationError("fekete_bracket needs a nonempty sequence");
    PressureEstimate est;
    est.values = values;
    est.nmax = static_cast<int>(values.size());
    est.upper = values[0];
    for (int n = 1; n <= est.nmax; ++n) est.upper = std::min(est.upper, values[n - 1] / n);
    const int half = est.nmax / 2;
    const double a_half = half == 0 ? 0.0 : values[half - 1];
    est.extrapolated = (values[est.nmax - 1] - a_half) / (est.nmax - half);
    return est;
}

double conditional_top_entropy_finite(const SlidingBlockCode& code, int n) {
    if (n < 1) throw ValidationError("level n must be positive");
    const Sft& tgt = code.target();
    const Sft& src = code.source();
    Word v;
    std::vector<std::vector<double>> stack; // preimage counts per source symbol
    double best = neg_inf;
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == n) {
            double total = 0.0;
            for (double c : stack.back()) total += c;
            if (total > 0.0) best = std::max(best, std::log(total));
            return;
        }
        for (int c = 0; c < tgt.size(); ++c) {
            if (depth > 0 && !tgt.allowed(v.back(), c)) continue;
            std::vector<double> next(src.size(), 0.0);
            bool any = false;
            if (depth == 0) {
                for (int a : code.preimages(c)) {
                    next[a] = 1.0;
                    any = true;
                }
            } else {
                const auto& cur = stack.back();
                for (int b : code.preimages(c)) {
                    double s = 0.0;
                    for (int a : src.predecessors(b)) s += cur[a];
                    next[b] = s;
                    if (s > 0.0) any = true;
                }
            }
            if (!any) continue;
            v.push_back(c);
            stack.push_back(std::move(next));
            self(self, depth + 1);
            stack.pop_back();
            v.pop_back();
        }
    };
    rec(rec, 0);
    if (best == neg_inf) throw EmptyShiftError("no admissible target word has a preimage");
    return best;
}

} // namespace ergopress
