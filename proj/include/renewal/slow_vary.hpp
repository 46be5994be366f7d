#pragma once

#include <cmath>
#include <stdexcept>

namespace renewal {

// Slowly varying factor phi(x) = c * (log(x + e))^a.
// a == 0 gives the constant c, c == 1 a pure log power; the shifted base
// log(x + e) keeps the value positive and finite down to x = 1.
class SlowVary {
public:
    static SlowVary constant(double c) { return SlowVary(c, 0.0); }
    static SlowVary log_power(double a) { return SlowVary(1.0, a); }
    static SlowVary product(double c, double a) { return SlowVary(c, a); }

    double operator()(double x) const { return at_log(std::log(x)); }

    // Evaluate from log(x); usable for x far beyond double range.
    double at_log(double log_x) const {
        // log(x + e) = log x + log(1 + e/x)
        const double base = log_x + std::log1p(std::exp(1.0 - log_x));
        return a_ == 0.0 ? c_ : c_ * std::pow(base, a_);
    }

    // d/dx phi(x) = c * a * (log(x+e))^(a-1) / (x+e)
    double derivative(double x) const {
        if (a_ == 0.0) return 0.0;
        const double base = std::log(x + kE);
        return c_ * a_ * std::pow(base, a_ - 1.0) / (x + kE);
    }

    double c() const { return c_; }
    double a() const { return a_; }
    bool is_constant() const { return a_ == 0.0; }

private:
    SlowVary(double c, double a) : c_(c), a_(a) {
        if (!(c > 0.0) || !std::isfinite(c) || !std::isfinite(a))
            throw std::invalid_argument("SlowVary: c must be positive and finite");
    }

    static constexpr double kE = 2.718281828459045235;

    double c_;
    double a_;
};

}  // namespace renewal
