#pragma once

#include <string>
#include <vector>

#include "cubeslice/big_rational.hpp"

namespace cubeslice {

/// sigma_d = (2/pi) * integral_0^inf (sin t / t)^d dt, exactly, via
///
///   sigma_d = d / 2^(d-1) * sum_{0 <= r < d/2} (-1)^r (d-2r)^(d-1) / (r! (d-r)!)
///
/// The terms grow like d^(d-1) while sigma_d ~ d^(-1/2), so the sum is
/// evaluated entirely in integer arithmetic. d >= 1.
BigRational sigma_exact(int d);

/// Float view of sigma_exact, memoized.
double sigma_value(int d);

/// Maximum of ||v||_1/||v||_2 * vol(C^d cap v^perp): d * sigma_d. d >= 2.
BigRational v_d_bound(int d);

/// sigma_d. The diagonal section satisfies
/// vol_{d-1}(C^d cap 1_d^perp) = sqrt(d) * diagonal_volume(d); the square
/// root is applied by callers in floating point. d >= 2.
BigRational diagonal_volume(int d);

/// sqrt(d) * sigma_d as a double.
double diagonal_section_value(int d);

/// Limit of the diagonal section volume as d -> infinity.
double diagonal_section_limit();

struct SincValue {
    int d = 0;
    BigRational exact;
    double approx = 0.0;
    std::string decimal;  // 15 significant digits, round-half-even
};

/// Exact sigma values for d = 1..d_max.
class SincTable {
public:
    explicit SincTable(int d_max);

    int d_max() const noexcept { return static_cast<int>(values_.size()); }
    const SincValue& at(int d) const;
    const std::vector<SincValue>& values() const noexcept { return values_; }

private:
    std::vector<SincValue> values_;
};

struct RatioViolation {
    enum class Kind { below_lower_bound, not_below_one };
    int d = 0;
    BigRational ratio;  // sigma_{d+1} / sigma_d
    Kind kind = Kind::below_lower_bound;
};

struct RatioRow {
    int d = 0;
    BigRational ratio;        // sigma_{d+1} / sigma_d
    BigRational lower_bound;  // d / (d+1)
    bool holds = true;
};

struct RatioCheckResult {
    SincTable table;
    std::vector<RatioRow> rows;  // d = 2..d_max
    std::vector<RatioViolation> violations;
};

/// Checks d/(d+1) <= sigma_{d+1}/sigma_d < 1 exactly for every
/// consecutive pair with d >= 2 up to d_max (so the last pair is
/// (d_max, d_max+1)). d_max >= 2.
RatioCheckResult ratio_check(int d_max);

}  // namespace cubeslice
