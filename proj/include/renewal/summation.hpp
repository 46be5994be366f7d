#pragma once

#include <cstddef>
#include <cmath>

namespace renewal {

// Neumaier-compensated accumulator. Unlike plain Kahan it stays accurate
// when a term exceeds the running sum.
template <class Real = double>
class StableSum {
public:
    StableSum() = default;
    explicit StableSum(Real init) : sum_(init) {}

    void add(Real x) {
        const Real t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    StableSum& operator+=(Real x) { add(x); return *this; }

    Real value() const { return sum_ + comp_; }
    Real compensation() const { return comp_; }

private:
    Real sum_ = 0;
    Real comp_ = 0;
};

}  // namespace renewal
