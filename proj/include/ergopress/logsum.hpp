#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace ergopress {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// Compensated (Kahan) accumulator; sums stay accurate to a few ulps even
// over millions of terms.
class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = sum_ + y;
        c_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double c_ = 0.0;
};

// Streaming log-sum-exp accumulator. Terms are combined in the order they
// are added, so results are reproducible bit for bit as long as the call
// sequence is fixed. -inf terms are ignored (empty contributions).
class StreamingLogSum {
public:
    void add(double log_term) {
        if (log_term == neg_inf) return;
        if (count_ == 0) {
            max_ = log_term;
            acc_.add(1.0);
        } else if (log_term <= max_) {
            acc_.add(std::exp(log_term - max_));
        } else {
            double rescaled = acc_.value() * std::exp(max_ - log_term);
            acc_ = KahanSum();
            acc_.add(rescaled);
            acc_.add(1.0);
            max_ = log_term;
        }
        ++count_;
    }
    bool empty() const { return count_ == 0; }
    long long count() const { return count_; }
    double value() const { return count_ == 0 ? neg_inf : max_ + std::log(acc_.value()); }

private:
    double max_ = neg_inf;
    KahanSum acc_;
    long long count_ = 0;
};

// Two-pass log-sum-exp over a contiguous range, summed in index order.
inline double log_sum_exp(std::span<const double> terms) {
    double m = neg_inf;
    for (double t : terms)
        if (t > m) m = t;
    if (m == neg_inf) return neg_inf;
    double s = 0.0;
    for (double t : terms)
        if (t != neg_inf) s += std::exp(t - m);
    return m + std::log(s);
}

} // namespace ergopress
