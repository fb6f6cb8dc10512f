#include "cubeslice/quadrature.hpp"

#include <limits>
#include <numbers>
#include <string>

namespace cubeslice::quad {

std::complex<double> expint(int n, std::complex<double> z) {
    using C = std::complex<double>;
    constexpr double kEps = 1e-16;
    constexpr int kMaxIter = 200000;
    if (n < 1) throw UsageError("expint needs n >= 1");
    if (z.real() < 0.0) throw UsageError("expint needs Re z >= 0");
    if (std::abs(z) == 0.0) {
        if (n == 1) throw UsageError("E_1(0) diverges");
        return C(1.0 / (n - 1), 0.0);
    }
    if (std::abs(z) > 1.0) {
        const double tiny = 1e-300;
        C b = z + static_cast<double>(n);
        C c = 1.0 / tiny;
        C d = 1.0 / b;
        C h = d;
        for (int i = 1; i <= kMaxIter; ++i) {
            const double an = -static_cast<double>(i) * (n - 1 + i);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            const C del = c * d;
            h *= del;
            if (std::abs(del - 1.0) < kEps) return h * std::exp(-z);
        }
        throw EngineError("expint continued fraction did not converge");
    }
    const int nm1 = n - 1;
    const C log_z = std::log(z);
    C ans = nm1 != 0 ? C(1.0 / nm1, 0.0) : -log_z - std::numbers::egamma;
    C fact = 1.0;
    for (int i = 1; i <= kMaxIter; ++i) {
        fact *= -z / static_cast<double>(i);
        C del;
        if (i != nm1) {
            del = -fact / static_cast<double>(i - nm1);
        } else {
            double psi = -std::numbers::egamma;
            for (int ii = 1; ii <= nm1; ++ii) psi += 1.0 / ii;
            del = fact * (-log_z + psi);
        }
        ans += del;
        if (std::abs(del) < std::abs(ans) * kEps) return ans;
    }
    throw EngineError("expint series did not converge");
}

std::complex<double> oscillatory_tail(int k, double c, double T) {
    if (k < 2) throw UsageError("oscillatory_tail needs k >= 2");
    if (!(T > 0.0)) throw UsageError("oscillatory_tail needs T > 0");
    const double scale = std::pow(T, 1.0 - k);
    if (c == 0.0) return {scale / (k - 1), 0.0};
    const auto e = expint(k, {0.0, -std::abs(c) * T});
    const auto j = scale * e;
    return c > 0.0 ? j : std::conj(j);
}

}  // namespace cubeslice::quad
