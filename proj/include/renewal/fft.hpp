#pragma once

#include <bit>
#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "renewal/summation.hpp"

namespace renewal::detail {

// Iterative radix-2 FFT. Twiddles are generated in long double regardless of
// the working type.
template <class Real>
class Fft {
public:
    using cplx = std::complex<Real>;

    void forward(std::vector<cplx>& v) { transform(v, false); }
    void inverse(std::vector<cplx>& v) {
        transform(v, true);
        const Real inv = Real(1) / Real(v.size());
        for (auto& z : v) z *= inv;
    }

private:
    void transform(std::vector<cplx>& v, bool inv) {
        const std::size_t n = v.size();
        if (n <= 1) return;
        // bit reversal
        for (std::size_t i = 1, j = 0; i < n; ++i) {
            std::size_t bit = n >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) std::swap(v[i], v[j]);
        }
        const auto& tw = twiddles(n);
        for (std::size_t len = 2; len <= n; len <<= 1) {
            const std::size_t stride = n / len;
            for (std::size_t i = 0; i < n; i += len) {
                for (std::size_t k = 0; k < len / 2; ++k) {
                    cplx w = tw[k * stride];
                    if (inv) w = std::conj(w);
                    const cplx a = v[i + k];
                    const cplx b = v[i + k + len / 2] * w;
                    v[i + k] = a + b;
                    v[i + k + len / 2] = a - b;
                }
            }
        }
    }

    const std::vector<cplx>& twiddles(std::size_t n) {
        auto it = cache_.find(n);
        if (it != cache_.end()) return it->second;
        std::vector<cplx> tw(n / 2);
        const long double step = -2.0L * 3.14159265358979323846264338327950288L /
                                 static_cast<long double>(n);
        for (std::size_t k = 0; k < n / 2; ++k) {
            const long double ang = step * static_cast<long double>(k);
            tw[k] = cplx(static_cast<Real>(std::cos(ang)),
                         static_cast<Real>(std::sin(ang)));
        }
        return cache_.emplace(n, std::move(tw)).first->second;
    }

    std::map<std::size_t, std::vector<cplx>> cache_;
};

// Online convolution solver for
//     x_n = b_n + sum_{k=1}^{n} a_k x_{n-k},  n >= 1,   x_0 = b_0.
// The fft path is a divide-and-conquer online convolution: O(N log^2 N),
// naive base blocks, cross-block contributions by FFT with compensated
// accumulation at the joins. The kernel FFT for a given block length is
// shared across all blocks of that length.
template <class Real>
class OnlineConvolutionSolver {
public:
    static constexpr std::size_t kBaseBlock = 1024;
    // kernel FFTs are cached for block lengths up to this (memory bound)
    static constexpr std::size_t kKernelCacheMax = std::size_t{1} << 16;

    std::vector<Real> solve(std::span<const Real> a, std::span<const Real> b,
                            std::size_t n_max, bool use_fft) {
        const std::size_t n = n_max + 1;
        a_.assign(n, Real(0));
        for (std::size_t k = 1; k < n && k < a.size(); ++k) a_[k] = a[k];
        b_.assign(n, Real(0));
        for (std::size_t k = 0; k < n && k < b.size(); ++k) b_[k] = b[k];
        x_.assign(n, Real(0));

        if (!use_fft || n <= kBaseBlock) {
            solve_naive(n);
        } else {
            accv_.assign(n, Real(0));
            accc_.assign(n, Real(0));
            const std::size_t p = std::bit_ceil(n);
            recurse(0, p, n);
            accv_.clear(); accv_.shrink_to_fit();
            accc_.clear(); accc_.shrink_to_fit();
            kernel_cache_.clear();
        }
        x_.resize(n);
        return std::move(x_);
    }

private:
    using cplx = std::complex<Real>;

    void solve_naive(std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            StableSum<Real> s;
            s.add(b_[i]);
            for (std::size_t j = 1; j <= i; ++j) s.add(a_[j] * x_[i - j]);
            x_[i] = s.value();
        }
    }

    void recurse(std::size_t lo, std::size_t hi, std::size_t n) {
        if (lo >= n) return;
        if (hi - lo <= kBaseBlock) {
            const std::size_t end = std::min(hi, n);
            for (std::size_t i = lo; i < end; ++i) {
                StableSum<Real> s;
                s.add(b_[i]);
                s.add(accv_[i]);
                s.add(accc_[i]);
                for (std::size_t j = lo; j < i; ++j) s.add(a_[i - j] * x_[j]);
                x_[i] = s.value();
            }
            return;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        recurse(lo, mid, n);
        if (mid < n) cross(lo, mid, hi, n);
        recurse(mid, hi, n);
    }

    // add conv(x[lo..mid), a[1..hi-lo)) into acc[mid..hi)
    void cross(std::size_t lo, std::size_t mid, std::size_t hi, std::size_t n) {
        const std::size_t len = hi - lo;      // kernel span
        const std::size_t m1 = mid - lo;      // left block size (= len/2)
        const std::size_t f = std::bit_ceil(m1 + len);

        const std::vector<cplx>& ka = kernel_fft(len, f);

        buf_.assign(f, cplx(0));
        for (std::size_t j = 0; j < m1; ++j) buf_[j] = cplx(x_[lo + j]);
        fft_.forward(buf_);
        for (std::size_t i = 0; i < f; ++i) buf_[i] *= ka[i];
        fft_.inverse(buf_);

        const std::size_t end = std::min(hi, n);
        for (std::size_t pos = mid; pos < end; ++pos) {
            const Real add = buf_[pos - lo].real();
            // compensated join
            const Real t = accv_[pos] + add;
            if (std::fabs(accv_[pos]) >= std::fabs(add))
                accc_[pos] += (accv_[pos] - t) + add;
            else
                accc_[pos] += (add - t) + accv_[pos];
            accv_[pos] = t;
        }
    }

    const std::vector<cplx>& kernel_fft(std::size_t len, std::size_t f) {
        const bool cacheable = len <= kKernelCacheMax;
        if (cacheable) {
            auto it = kernel_cache_.find(len);
            if (it != kernel_cache_.end()) return it->second;
        }
        scratch_.assign(f, cplx(0));
        for (std::size_t k = 1; k < len && k < a_.size(); ++k)
            scratch_[k] = cplx(a_[k]);
        fft_.forward(scratch_);
        if (cacheable)
            return kernel_cache_.emplace(len, scratch_).first->second;
        return scratch_;
    }

    Fft<Real> fft_;
    std::vector<Real> a_, b_, x_, accv_, accc_;
    std::vector<cplx> buf_, scratch_;
    std::map<std::size_t, std::vector<cplx>> kernel_cache_;
};

template <class Real>
std::vector<Real> solve_renewal(std::span<const Real> a, std::span<const Real> b,
                                std::size_t n_max, bool use_fft) {
    OnlineConvolutionSolver<Real> solver;
    return solver.solve(a, b, n_max, use_fft);
}

}  // namespace renewal::detail
