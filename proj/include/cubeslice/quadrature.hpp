#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "cubeslice/error.hpp"

namespace cubeslice::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
};

/// 21-point Kronrod extension of 10-point Gauss-Legendre (QUADPACK qk21).
/// Abscissae are on [0, 1] half of [-1, 1]; index 10 is the centre.
inline constexpr std::array<double, 11> kKronrodNodes{
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kKronrodWeights{
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077282977182847, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
/// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7, 9.
inline constexpr std::array<double, 5> kGaussWeights{
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

/// One GK21 application on [a, b]; error is |Kronrod - Gauss|.
template <class F>
Result gk21(F& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = fc * kKronrodWeights[10];
    double gauss = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double pair = f(centre - dx) + f(centre + dx);
        kronrod += kKronrodWeights[j] * pair;
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
    }
    return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

/// Adaptive GK21 by bisection until each piece meets its share of `tol`.
/// `budget` counts remaining integrand evaluations; exhausting it throws.
template <class F>
Result integrate_adaptive(F& f, double a, double b, double tol, std::size_t& budget, int depth = 0) {
    if (budget < 21) throw EngineError("quadrature evaluation budget exhausted");
    budget -= 21;
    const Result whole = gk21(f, a, b);
    if (whole.error <= tol || depth >= 40) return whole;
    const double mid = 0.5 * (a + b);
    const Result left = integrate_adaptive(f, a, mid, 0.5 * tol, budget, depth + 1);
    const Result right = integrate_adaptive(f, mid, b, 0.5 * tol, budget, depth + 1);
    return {left.value + right.value, left.error + right.error};
}

/// Generalized exponential integral E_n(z) = int_1^inf e^{-zs} s^{-n} ds
/// for n >= 1 and Re z >= 0 (z != 0 when n == 1). Power series for
/// |z| <= 1, Lentz continued fraction otherwise.
std::complex<double> expint(int n, std::complex<double> z);

/// int_T^inf e^{i c t} t^{-k} dt for k >= 2, T > 0, any real c.
std::complex<double> oscillatory_tail(int k, double c, double T);

}  // namespace cubeslice::quad
