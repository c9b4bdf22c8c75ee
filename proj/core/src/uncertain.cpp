#include "ust/uncertain.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "ust/error.hpp"

namespace ust {

UncertainValue::UncertainValue(double best, double uncertainty)
    : best_(best + 0.0), uncertainty_(std::fabs(uncertainty)) {
    if (!std::isfinite(best) || !std::isfinite(uncertainty)) {
        throw InvalidValueError("uncertain value must be finite, got best=" + std::to_string(best) +
                                " uncertainty=" + std::to_string(uncertainty));
    }
}

namespace {

UncertainValue checked(double best, double uncertainty, const char* op) {
    if (!std::isfinite(best) || !std::isfinite(uncertainty)) {
        throw NumericOverflowError(std::string("numeric overflow in uncertain ") + op);
    }
    return UncertainValue(best, uncertainty);
}

}  // namespace

UncertainValue operator+(const UncertainValue& x, const UncertainValue& y) {
    return checked(x.best() + y.best(), x.uncertainty() + y.uncertainty(), "addition");
}

UncertainValue operator-(const UncertainValue& x, const UncertainValue& y) {
    return checked(x.best() - y.best(), x.uncertainty() + y.uncertainty(), "subtraction");
}

UncertainValue pow(const UncertainValue& x, int n) {
    if (n <= 0) throw UnsupportedExponentError(n);
    const double best = std::pow(x.best(), n);
    const double magnitude = std::pow(std::fabs(x.best()), n - 1);
    return checked(best, static_cast<double>(n) * magnitude * x.uncertainty(), "power");
}

UncertainValue udissim(std::span<const UncertainValue> v, std::span<const UncertainValue> u) {
    if (v.size() != u.size()) {
        throw DimensionError("udissim: length mismatch (" + std::to_string(v.size()) + " vs " +
                             std::to_string(u.size()) + ")");
    }
    if (v.empty()) throw DimensionError("udissim: vectors must be non-empty");

    double sq = 0.0;
    double spread = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double diff = v[i].best() - u[i].best();
        sq += diff * diff;
        spread += std::fabs(diff) * (v[i].uncertainty() + u[i].uncertainty());
    }
    return checked(sq, 2.0 * spread, "dissimilarity");
}

std::ostream& operator<<(std::ostream& os, const UncertainValue& x) {
    return os << x.best() << " +/- " << x.uncertainty();
}

}  // namespace ust
