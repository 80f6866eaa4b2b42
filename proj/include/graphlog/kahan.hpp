#ifndef GRAPHLOG_KAHAN_HPP
#define GRAPHLOG_KAHAN_HPP

#include <cmath>

namespace graphlog {

// Neumaier compensated accumulator. Acceptance tolerances sit at 1e-12, so
// every integral in the library runs through this instead of naive +=.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }

    // Folds another accumulator in; used to merge per-block partial sums in a
    // fixed order so parallel summation stays bit-reproducible.
    void merge(const KahanSum& other) {
        add(other.sum);
        add(other.comp);
    }

    double value() const { return sum + comp; }
};

} // namespace graphlog

#endif
