#pragma once

// Optics calculators for the state-dependent lattice. Energies are in recoil
// units E_r, lengths in units of the wavelength unless stated. Field
// amplitudes carry unit proportionality constants; only ratios and zeros are
// meaningful.

#include <cmath>
#include <functional>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "error.hpp"
#include "rational.hpp"

namespace gaugelatt {

/// Light shifts of the |+> and |-> fine-structure components and the weights
/// with which the two hyperfine states |a>, |b> sample them. The defaults are
/// the (1,3)/4 and (3,1)/4 combinations, giving
/// V_b/V_a = (3 V+ + V-)/(V+ + 3 V-).
struct stark_inputs {
	double V_plus = -7;
	double V_minus = 1;
	rational a_plus{1, 4}, a_minus{3, 4};
	rational b_plus{3, 4}, b_minus{1, 4};

	void validate() const {
		require(std::isfinite(V_plus) && std::isfinite(V_minus), errc::invalid_argument, "light shifts must be finite");
		require(a_plus.p >= 0 && a_minus.p >= 0 && b_plus.p >= 0 && b_minus.p >= 0, errc::invalid_argument,
		        "hyperfine weights must be non-negative");
		require(a_plus + a_minus == rational(1) && b_plus + b_minus == rational(1), errc::invalid_argument,
		        "hyperfine weights of each state must sum to 1");
	}

	double V_a() const { return a_plus.value() * V_plus + a_minus.value() * V_minus; }
	double V_b() const { return b_plus.value() * V_plus + b_minus.value() * V_minus; }
};

inline double potential_ratio(const stark_inputs& s) {
	s.validate();
	double den = s.V_a();
	double scale = std::abs(s.a_plus.value() * s.V_plus) + std::abs(s.a_minus.value() * s.V_minus);
	require(std::abs(den) > 1e-14 * scale && den != 0, errc::singular,
	        "V_a vanishes: the potential ratio V_b/V_a diverges");
	return s.V_b() / den;
}

inline double potential_ratio(double V_plus, double V_minus) { return potential_ratio(stark_inputs{V_plus, V_minus}); }

/// Tunnelling rate of a lattice of depth V0 (in E_r) up to a constant:
/// (V0)^{3/4} exp(-2 sqrt(V0)).
inline double hopping_rate(double V0) {
	require(std::isfinite(V0) && V0 > 0, errc::invalid_argument, "lattice depth must be positive");
	return std::pow(V0, 0.75) * std::exp(-2.0 * std::sqrt(V0));
}

/// Two standing waves tilted by +-eta out of the x axis in the x-z plane.
struct tilt_geometry {
	double eta = std::numbers::pi / 4;
	double lambda = 1.0;

	void validate() const {
		require(eta > 0 && eta < std::numbers::pi / 2, errc::invalid_argument, "tilt angle must lie in (0, pi/2)");
		require(lambda > 0 && std::isfinite(lambda), errc::invalid_argument, "wavelength must be positive");
	}
	double k() const { return 2.0 * std::numbers::pi / lambda; }
};

struct field_pair {
	std::function<double(double, double)> E_plus; // sigma+ component, E(x, z)
	std::function<double(double, double)> E_pi;   // pi component
};

inline field_pair field_profiles(const tilt_geometry& g) {
	g.validate();
	double k = g.k(), c = std::cos(g.eta), s = std::sin(g.eta);
	return {[=](double x, double z) { return std::sqrt(2.0) * s * std::cos(k * x * c) * std::cos(k * z * s); },
	        [=](double x, double z) { return c * std::sin(k * x * c) * std::sin(k * z * s); }};
}

/// Distance between sigma+ potential minima along x: lambda / (2 cos eta).
inline double lattice_spacing(const tilt_geometry& g) {
	g.validate();
	return g.lambda / (2.0 * std::cos(g.eta));
}

/// Peak of |E+|^2 at fixed beam intensity, 2 sin^2 eta.
inline double sigma_plus_depth(const tilt_geometry& g) {
	g.validate();
	return 2.0 * std::sin(g.eta) * std::sin(g.eta);
}

/// Gaussian Wannier widths of |+> and |-> along x and the transverse (z)
/// confinement width, in the same length unit as lambda.
struct parity_wannier {
	double sigma_plus = 0.05;
	double sigma_minus = 0.05;
	double sigma_z = 0.05;
};

struct parity_result {
	double value = 0;     // signed integral of E+ E_pi W+ W-
	double magnitude = 0; // integral of |E+ E_pi W+ W-|
	double normalized() const { return magnitude > 0 ? std::abs(value) / magnitude : 0.0; }
};

/// Raman matrix-element integral around site j of the x lattice (z = 0
/// plane), with the Wannier product optionally displaced by (dx, dz). Both
/// field components are products of an x and a z standing wave and the Wannier
/// functions are Gaussians, so the integrand separates; the y direction only
/// contributes a common positive factor. Each 1D factor is integrated with
/// adaptive Gauss-Kronrod.
inline parity_result raman_parity_integral(const tilt_geometry& g, const parity_wannier& w, int j = 0, double dx = 0,
                                           double dz = 0, double field_scale = 1.0) {
	g.validate();
	require(w.sigma_plus > 0 && w.sigma_minus > 0 && w.sigma_z > 0, errc::invalid_argument,
	        "Wannier widths must be positive");
	double k = g.k(), c = std::cos(g.eta), s = std::sin(g.eta);
	double x0 = j * lattice_spacing(g) + dx;
	auto gauss = [](double u, double sg) {
		return std::exp(-u * u / (2 * sg * sg)) / std::sqrt(std::sqrt(std::numbers::pi) * sg);
	};
	// E+ E_pi = sqrt2 s c [cos sin](k x cos eta) [cos sin](k z sin eta)
	auto fx = [&](double x) {
		return std::cos(k * x * c) * std::sin(k * x * c) * gauss(x - x0, w.sigma_plus) * gauss(x - x0, w.sigma_minus);
	};
	auto fz = [&](double z) { return std::cos(k * z * s) * std::sin(k * z * s) * gauss(z - dz, w.sigma_z) * gauss(z - dz, w.sigma_z); };
	// 10 widths around the (displaced) centre; the Gaussian tail beyond is below 1e-21
	double hx = 10 * std::max(w.sigma_plus, w.sigma_minus), hz = 10 * w.sigma_z;
	using quad = boost::math::quadrature::gauss_kronrod<double, 31>;
	auto integrate = [](auto&& f, double a, double b) { return quad::integrate(f, a, b, 15, 1e-14); };
	double pre = field_scale * field_scale * std::sqrt(2.0) * s * c;
	parity_result r;
	r.value = pre * integrate(fx, x0 - hx, x0 + hx) * integrate(fz, dz - hz, dz + hz);
	r.magnitude = std::abs(pre) * integrate([&](double x) { return std::abs(fx(x)); }, x0 - hx, x0 + hx) *
	              integrate([&](double z) { return std::abs(fz(z)); }, dz - hz, dz + hz);
	return r;
}

/// Depths, hopping ratio and spacing for one set of design inputs.
struct design_row {
	double V_plus, V_minus, eta, V_a;
	double V_b_over_V_a, J_b_over_J_a, spacing_over_lambda;
};

inline design_row design(const stark_inputs& s, double eta, double V_a_depth) {
	tilt_geometry g{eta, 1.0};
	double ratio = potential_ratio(s);
	require(ratio > 0, errc::invalid_argument, "V_a and V_b must have the same sign to trap both states");
	double Va = std::abs(V_a_depth);
	return {s.V_plus, s.V_minus, eta, V_a_depth, ratio, hopping_rate(ratio * Va) / hopping_rate(Va),
	        lattice_spacing(g) / g.lambda};
}

} // namespace gaugelatt
