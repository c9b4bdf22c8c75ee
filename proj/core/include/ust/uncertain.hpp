#pragma once

#include <compare>
#include <iosfwd>
#include <span>
#include <vector>

namespace ust {

/// A measurement `best ± uncertainty`: the true value is believed to lie in
/// [best - uncertainty, best + uncertainty].
///
/// Both fields are finite and the uncertainty is non-negative. A negative
/// uncertainty passed to the constructor is replaced by its absolute value,
/// and a negative zero best is stored as +0 so that equal values are also
/// bitwise equal.
///
/// Values are totally ordered: first by best, then by uncertainty. The
/// comparison is exact (no tolerance) so it can be used as a sort key.
class UncertainValue {
public:
    constexpr UncertainValue() noexcept = default;

    /// Throws InvalidValueError if either argument is NaN or infinite.
    UncertainValue(double best, double uncertainty = 0.0);

    constexpr double best() const noexcept { return best_; }
    constexpr double uncertainty() const noexcept { return uncertainty_; }

    constexpr bool operator==(const UncertainValue&) const noexcept = default;

    constexpr std::strong_ordering operator<=>(const UncertainValue& other) const noexcept {
        if (best_ < other.best_) return std::strong_ordering::less;
        if (other.best_ < best_) return std::strong_ordering::greater;
        if (uncertainty_ < other.uncertainty_) return std::strong_ordering::less;
        if (other.uncertainty_ < uncertainty_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    double best_ = 0.0;
    double uncertainty_ = 0.0;
};

using UncertainVector = std::vector<UncertainValue>;

// Propagation rules. All throw NumericOverflowError if a finite input yields
// a non-finite result.

/// (x ± dx) + (y ± dy) = (x + y) ± (dx + dy)
UncertainValue operator+(const UncertainValue& x, const UncertainValue& y);

/// (x ± dx) - (y ± dy) = (x - y) ± (dx + dy); uncertainties add.
UncertainValue operator-(const UncertainValue& x, const UncertainValue& y);

/// (x ± dx)^n = x^n ± |n| |x|^(n-1) dx, for n >= 1.
///
/// The usual relative form |n| (dx / |x|) |x^n| is singular at x = 0; the
/// expression above is its continuous extension, so 0 ± dx squared is 0 ± 0.
/// Throws UnsupportedExponentError for n <= 0.
UncertainValue pow(const UncertainValue& x, int n);

/// Uncertain squared Euclidean dissimilarity of two equal-length vectors:
///
///     sum (v_i - u_i)^2  ±  2 sum |v_i - u_i| (dv_i + du_i)
///
/// The best part is exactly the squared Euclidean distance of the bests.
/// Accumulation is left to right in index order, so results are bitwise
/// reproducible. Throws DimensionError on length mismatch or empty input.
UncertainValue udissim(std::span<const UncertainValue> v, std::span<const UncertainValue> u);

std::ostream& operator<<(std::ostream& os, const UncertainValue& x);

}  // namespace ust
