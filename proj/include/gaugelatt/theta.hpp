#pragma once

// Theta functions with rational characteristics,
//
//   theta[a,b](z | tau) = sum_n exp(i pi tau (n+a)^2 + 2 pi i (n+a)(z+b)),
//
// and the odd Jacobi function theta_1(z | tau) = -theta[1/2,1/2](z/pi | tau),
// which satisfies theta_1(z + pi) = -theta_1(z).

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "error.hpp"

namespace gaugelatt {

struct theta_params {
	std::complex<double> tau{0, 1};
	double a = 0;
	double b = 0;
	double tolerance = 1e-15; // relative to the largest term
};

namespace detail {

inline void check_tau(std::complex<double> tau) {
	require(std::isfinite(tau.real()) && std::isfinite(tau.imag()), errc::invalid_argument, "tau must be finite");
	require(tau.imag() > 0, errc::invalid_argument, "theta series needs Im(tau) > 0");
}

} // namespace detail

/// Half-width of the summation window around the peak term for a given
/// relative tolerance; term magnitudes fall like exp(-pi Im(tau) m^2).
inline int theta_terms(std::complex<double> tau, double tolerance) {
	detail::check_tau(tau);
	double t = std::max(tolerance, std::numeric_limits<double>::min());
	return static_cast<int>(std::ceil(std::sqrt(-std::log(t) / (std::numbers::pi * tau.imag())))) + 2;
}

/// Series summed over n = n* - half_width .. n* + half_width, where n* is the
/// index of the largest term.
inline std::complex<double> theta_series(std::complex<double> z, const theta_params& p, int half_width) {
	detail::check_tau(p.tau);
	using std::numbers::pi;
	const std::complex<double> I(0, 1);
	// |term| = exp(-pi Im(tau) (n+a)^2 - 2 pi (n+a) Im z) peaks at n+a = -Im z / Im tau
	double peak = -z.imag() / p.tau.imag() - p.a;
	auto centre = static_cast<long long>(std::llround(peak));
	std::complex<double> sum = 0;
	for (long long n = centre - half_width; n <= centre + half_width; ++n) {
		double na = static_cast<double>(n) + p.a;
		sum += std::exp(I * pi * p.tau * (na * na) + 2.0 * pi * I * na * (z + p.b));
	}
	return sum;
}

inline std::complex<double> theta_function(std::complex<double> z, const theta_params& p) {
	return theta_series(z, p, theta_terms(p.tau, p.tolerance));
}

/// Odd Jacobi theta_1(z | tau).
inline std::complex<double> jacobi_theta1(std::complex<double> z, std::complex<double> tau, double tolerance = 1e-15) {
	return -theta_function(z / std::numbers::pi, {tau, 0.5, 0.5, tolerance});
}

} // namespace gaugelatt
