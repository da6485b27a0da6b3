#ifndef VMRA_UNITS_HPP
#define VMRA_UNITS_HPP

#include <compare>

namespace vmra {

/// Tagged scalar so milliseconds and megabytes cannot be mixed by accident.
template <typename Tag>
class Quantity
{
public:
	constexpr Quantity() = default;
	constexpr explicit Quantity(double v) : value_(v) {}

	constexpr double value() const { return value_; }

	constexpr Quantity& operator+=(Quantity o) { value_ += o.value_; return *this; }
	constexpr Quantity& operator-=(Quantity o) { value_ -= o.value_; return *this; }

	friend constexpr Quantity operator+(Quantity a, Quantity b) { return Quantity(a.value_ + b.value_); }
	friend constexpr Quantity operator-(Quantity a, Quantity b) { return Quantity(a.value_ - b.value_); }
	friend constexpr Quantity operator*(Quantity a, double s) { return Quantity(a.value_ * s); }
	friend constexpr Quantity operator*(double s, Quantity a) { return Quantity(a.value_ * s); }

	friend constexpr auto operator<=>(Quantity, Quantity) = default;
	friend constexpr bool operator==(Quantity, Quantity) = default;

private:
	double value_ = 0.0;
};

struct MillisecondsTag {};
struct MegabytesTag {};

using Milliseconds = Quantity<MillisecondsTag>;
using Megabytes = Quantity<MegabytesTag>;

/// Absolute slack used by every "≤ threshold" test so that inputs given as
/// decimals (e.g. a 0.1 ms slope) do not flip feasibility through rounding.
inline constexpr double kTolerance = 1e-9;

template <typename Tag>
constexpr bool fits_within(Quantity<Tag> value, Quantity<Tag> limit)
{
	return value.value() <= limit.value() + kTolerance;
}

} // namespace vmra

#endif // VMRA_UNITS_HPP
