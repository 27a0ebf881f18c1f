#pragma once

// Thin FFTW wrappers for the angular transforms. Plans are created with FFTW_ESTIMATE so
// results do not depend on timing, and cached per shape.

#include <complex>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include <fftw3.h>

namespace bidisc::detail {

class FftCache {
public:
    static FftCache& instance() {
        static FftCache c;
        return c;
    }

    // Unnormalized in-place transform of an n0 x n1 row-major array (n1 = 1 for 1-D).
    void run(std::complex<double>* data, int n0, int n1, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        auto& e = plans_[{n0, n1, sign}];
        if (!e.plan) {
            e.buf.resize(static_cast<std::size_t>(n0) * n1);
            auto* p = reinterpret_cast<fftw_complex*>(e.buf.data());
            e.plan = n1 == 1 ? fftw_plan_dft_1d(n0, p, p, sign, FFTW_ESTIMATE)
                             : fftw_plan_dft_2d(n0, n1, p, p, sign, FFTW_ESTIMATE);
        }
        auto* d = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(e.plan, d, d);
    }

    ~FftCache() {
        for (auto& [k, e] : plans_) fftw_destroy_plan(e.plan);
    }

private:
    struct Entry {
        fftw_plan plan = nullptr;
        std::vector<std::complex<double>> buf;
    };
    std::map<std::tuple<int, int, int>, Entry> plans_;
    std::mutex mu_;
};

// Mode m of an n-point transform lives at index (m mod n).
inline int mode_slot(int m, int n) { return ((m % n) + n) % n; }
inline int slot_mode(int s, int n) { return s < n / 2 ? s : s - n; }

}  // namespace bidisc::detail
