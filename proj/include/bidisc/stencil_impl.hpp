#pragma once

#include <algorithm>
#include <stdexcept>

namespace bidisc {

namespace detail {
// First index of a window of `points` consecutive nodes centred on t.
inline std::size_t local_window(std::span<const double> x, double t, int points) {
    const std::size_t n = x.size();
    const std::size_t p = std::min<std::size_t>(static_cast<std::size_t>(points), n);
    const auto it = std::lower_bound(x.begin(), x.end(), t);
    std::size_t k = static_cast<std::size_t>(it - x.begin());
    std::size_t lo = k >= p / 2 ? k - p / 2 : 0;
    if (lo + p > n) lo = n - p;
    return lo;
}
}  // namespace detail

template <class T>
T interpolate_local(std::span<const double> x, std::span<const T> f, double t, int points) {
    if (x.size() != f.size() || x.empty()) throw std::invalid_argument("interpolate_local: size mismatch");
    const std::size_t lo = detail::local_window(x, t, points);
    const std::size_t p = std::min<std::size_t>(static_cast<std::size_t>(points), x.size());
    T acc{};
    for (std::size_t i = lo; i < lo + p; ++i) {
        double l = 1;
        for (std::size_t j = lo; j < lo + p; ++j)
            if (j != i) l *= (t - x[j]) / (x[i] - x[j]);
        acc += l * f[i];
    }
    return acc;
}

}  // namespace bidisc
