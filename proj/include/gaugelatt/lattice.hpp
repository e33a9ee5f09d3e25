#pragma once

// Lattice geometry, Raman phase patterns, Peierls link phases and plaquette
// fluxes. Sites are r_{j,k} = r0 (j x + k y) with j in [0, Lx), k in [0, Ly).

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "error.hpp"
#include "rational.hpp"

namespace gaugelatt {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Maps an angle onto [0, 2pi).
inline double wrap_phase(double phase) {
	double r = std::fmod(phase, two_pi);
	if (r < 0) r += two_pi;
	if (r >= two_pi) r = 0.0;
	return r;
}

/// Maps a flux onto [0, 1). Values within 1e-12 of 1 are snapped to 0 so that
/// a vanishing flux does not print as 0.999999999999.
inline double wrap_unit(double x) {
	double r = x - std::floor(x);
	if (r > 1.0 - 1e-12) r = 0.0;
	return r;
}

/// Distance on the unit circle between two fluxes.
inline double circular_distance(double a, double b) {
	double d = wrap_unit(a - b);
	return std::min(d, 1.0 - d);
}

/// Dense Lx-by-Ly grid, j-major (element (j,k) at j*Ly + k).
template <class T>
class grid {
public:
	grid() = default;
	grid(int nx, int ny, T fill = T{}) : nx_(nx), ny_(ny), data_(static_cast<std::size_t>(nx) * ny, fill) {}

	int nx() const { return nx_; }
	int ny() const { return ny_; }
	std::size_t size() const { return data_.size(); }

	T& operator()(int j, int k) { return data_[static_cast<std::size_t>(j) * ny_ + k]; }
	const T& operator()(int j, int k) const { return data_[static_cast<std::size_t>(j) * ny_ + k]; }

	const std::vector<T>& values() const { return data_; }
	std::vector<T>& values() { return data_; }

	bool same_shape(int nx, int ny) const { return nx_ == nx && ny_ == ny; }

private:
	int nx_ = 0;
	int ny_ = 0;
	std::vector<T> data_;
};

enum class boundary { open, magnetic_torus };

/// Lattice extent and boundary. A magnetic torus carries the background flux
/// per plaquette whose Landau-gauge twist closes the y direction; the total
/// flux alpha*Lx*Ly must then be an integer.
struct lattice_geometry {
	int Lx = 1;
	int Ly = 1;
	double spacing = 1.0;
	gaugelatt::boundary boundary = boundary::open;
	rational background_flux{0, 1};

	static lattice_geometry open(int lx, int ly) {
		lattice_geometry g{lx, ly, 1.0, boundary::open, {}};
		g.validate();
		return g;
	}

	static lattice_geometry torus(int lx, int ly, rational alpha = {}) {
		lattice_geometry g{lx, ly, 1.0, boundary::magnetic_torus, alpha};
		g.validate();
		return g;
	}

	void validate() const {
		require(Lx >= 1 && Ly >= 1, errc::invalid_argument, "lattice extents must be positive");
		require(spacing > 0 && std::isfinite(spacing), errc::invalid_argument, "lattice spacing must be positive");
		if (boundary == boundary::magnetic_torus) {
			require((background_flux * (static_cast<std::int64_t>(Lx) * Ly)).is_integer(), errc::invalid_argument,
			        "magnetic torus needs an integer number of flux quanta: alpha*Lx*Ly = " +
			            (background_flux * (static_cast<std::int64_t>(Lx) * Ly)).str());
		} else {
			require(background_flux.p == 0, errc::invalid_argument, "background flux only applies to the magnetic torus");
		}
	}

	bool is_torus() const { return boundary == boundary::magnetic_torus; }
	int sites() const { return Lx * Ly; }
	int site(int j, int k) const { return j * Ly + k; }

	/// Number of flux quanta through the torus (0 for open lattices).
	std::int64_t flux_quanta() const {
		return is_torus() ? (background_flux * (static_cast<std::int64_t>(Lx) * Ly)).p : 0;
	}

	// An axis of extent 1 carries no links; a torus axis of extent >= 2 wraps.
	bool has_x_link(int j) const { return Lx > 1 && (j + 1 < Lx || is_torus()); }
	bool has_y_link(int k) const { return Ly > 1 && (k + 1 < Ly || is_torus()); }
	bool has_plaquette(int j, int k) const { return has_x_link(j) && has_y_link(k); }
};

/// Per-site Raman phases phi_{j,k} in [0, 2pi).
struct phase_pattern {
	grid<double> phi;

	phase_pattern() = default;
	explicit phase_pattern(grid<double> values) : phi(std::move(values)) {
		for (auto& v : phi.values()) {
			require(std::isfinite(v), errc::invalid_argument, "phase pattern contains a non-finite value");
			v = wrap_phase(v);
		}
	}
};

/// Peierls link phases. theta_x(j,k) is the phase of the bond (j,k) -> (j+1,k);
/// the bond out of the last column exists only on the torus. Phase patterns
/// only produce x phases; y bonds carry the torus seam twist twist_y[j] on
/// (j,Ly-1) -> (j,0), plus theta_y when a gauge transformation put phases there.
struct link_field {
	grid<double> theta_x;
	std::optional<grid<double>> theta_x2;
	std::vector<double> twist_y;
	std::optional<grid<double>> theta_y;

	double x(int j, int k) const { return theta_x(j, k); }

	double y(int j, int k) const {
		int ly = theta_x.ny();
		double v = theta_y ? (*theta_y)(j, k) : 0.0;
		if (k == ly - 1 && !twist_y.empty()) v += twist_y[j];
		return v;
	}

	/// Phase of the second-neighbour x bond (j,k) -> (j+2,k): the stored value
	/// if present, otherwise the sum of the two traversed links.
	double x2(int j, int k) const {
		if (theta_x2) return (*theta_x2)(j, k);
		int lx = theta_x.nx();
		return theta_x(j, k) + theta_x((j + 1) % lx, k);
	}

	/// Phase of the second-neighbour y bond (j,k) -> (j,k+2).
	double y2(int j, int k) const {
		int ly = theta_x.ny();
		return y(j, k) + y(j, (k + 1) % ly);
	}

	bool conforms(const lattice_geometry& g) const {
		if (!theta_x.same_shape(g.Lx, g.Ly)) return false;
		if (theta_x2 && !theta_x2->same_shape(g.Lx, g.Ly)) return false;
		if (theta_y && !theta_y->same_shape(g.Lx, g.Ly)) return false;
		if (g.is_torus()) return twist_y.size() == static_cast<std::size_t>(g.Lx);
		return twist_y.empty();
	}
};

inline void require_conforming(const link_field& l, const lattice_geometry& g) {
	require(l.conforms(g), errc::dimension_mismatch, "link field does not match lattice geometry");
}

/// phi_{j,k} = 2 pi alpha j k (mod 2pi), whose links are theta_{j,k} = 2 pi alpha k.
inline phase_pattern uniform_phase_pattern(rational alpha, const lattice_geometry& g) {
	g.validate();
	if (g.is_torus())
		require(alpha == g.background_flux, errc::invalid_argument,
		        "uniform pattern alpha=" + alpha.str() + " differs from torus background flux " + g.background_flux.str());
	grid<double> phi(g.Lx, g.Ly);
	for (int j = 0; j < g.Lx; ++j)
		for (int k = 0; k < g.Ly; ++k) {
			// Reduce j*k*p modulo q in integers before converting to an angle.
			auto num = (static_cast<std::int64_t>(j) * k * alpha.p) % alpha.q;
			phi(j, k) = two_pi * static_cast<double>(num) / static_cast<double>(alpha.q);
		}
	return phase_pattern(std::move(phi));
}

namespace detail {

inline std::vector<double> torus_twist(const lattice_geometry& g) {
	std::vector<double> tw;
	if (!g.is_torus()) return tw;
	tw.resize(g.Lx);
	for (int j = 0; j < g.Lx; ++j) {
		auto num = (-static_cast<std::int64_t>(g.Ly) * j * g.background_flux.p) % g.background_flux.q;
		tw[j] = wrap_phase(two_pi * static_cast<double>(num) / static_cast<double>(g.background_flux.q));
	}
	return tw;
}

} // namespace detail

/// theta_{j,k} = phi_{j+1,k} - phi_{j,k}. On the magnetic torus the pattern is
/// continued across the x seam by the background magnetic translation,
/// phi_{Lx,k} = phi_{0,k} + 2 pi alpha Lx k, and the y seam carries the twist
/// -2 pi alpha Ly j.
inline link_field links_from_phases(const phase_pattern& p, const lattice_geometry& g) {
	g.validate();
	require(p.phi.same_shape(g.Lx, g.Ly), errc::dimension_mismatch, "phase pattern does not match lattice geometry");
	link_field l;
	l.theta_x = grid<double>(g.Lx, g.Ly);
	for (int j = 0; j < g.Lx; ++j) {
		if (!g.has_x_link(j)) continue;
		for (int k = 0; k < g.Ly; ++k) {
			double next;
			if (j + 1 < g.Lx) {
				next = p.phi(j + 1, k);
			} else {
				auto num = (static_cast<std::int64_t>(g.Lx) * k * g.background_flux.p) % g.background_flux.q;
				next = p.phi(0, k) + two_pi * static_cast<double>(num) / static_cast<double>(g.background_flux.q);
			}
			l.theta_x(j, k) = wrap_phase(next - p.phi(j, k));
		}
	}
	l.twist_y = detail::torus_twist(g);
	return l;
}

/// Flux through plaquette (j,k), in flux quanta mod 1, with the bilayer-loop
/// sign convention (theta_{j,k} + theta^y_{j+1,k} - theta_{j,k+1} - theta^y_{j,k}) / 2pi.
/// Open lattices have no plaquettes in the last row/column; those entries are 0.
inline grid<double> plaquette_flux(const link_field& l, const lattice_geometry& g) {
	require_conforming(l, g);
	grid<double> f(g.Lx, g.Ly);
	for (int j = 0; j < g.Lx; ++j)
		for (int k = 0; k < g.Ly; ++k) {
			if (!g.has_plaquette(j, k)) continue;
			int j1 = (j + 1) % g.Lx;
			int k1 = (k + 1) % g.Ly;
			double loop = l.x(j, k) + l.y(j1, k) - l.x(j, k1) - l.y(j, k);
			f(j, k) = wrap_unit(loop / two_pi);
		}
	return f;
}

/// Field strength in flux quanta per plaquette, oriented so that the uniform
/// pattern of uniform_phase_pattern(alpha) reads +alpha.
inline grid<double> field_strength(const grid<double>& flux) {
	grid<double> out(flux.nx(), flux.ny());
	for (std::size_t i = 0; i < flux.size(); ++i) out.values()[i] = wrap_unit(-flux.values()[i]);
	return out;
}

/// Sum of the (mod 1) plaquette fluxes.
inline double total_flux(const grid<double>& flux) {
	double s = 0;
	for (double v : flux.values()) s += v;
	return s;
}

/// Continuum vector potential A(x,y) x-hat in units of flux quanta per length.
struct vector_potential_field {
	std::function<double(double, double)> A;
};

/// theta_{j,k} = 2 pi * integral of A(x, y_k) over the x bond, by adaptive
/// Gauss-Kronrod quadrature (tolerance 1e-12). Bonds across the torus seam are
/// integrated along their continuation x in [x_{Lx-1}, x_{Lx-1} + r0].
inline link_field links_from_vector_potential(const vector_potential_field& v, const lattice_geometry& g) {
	g.validate();
	require(static_cast<bool>(v.A), errc::invalid_argument, "vector potential is empty");
	link_field l;
	l.theta_x = grid<double>(g.Lx, g.Ly);
	using quad = boost::math::quadrature::gauss_kronrod<double, 31>;
	for (int j = 0; j < g.Lx; ++j) {
		if (!g.has_x_link(j)) continue;
		for (int k = 0; k < g.Ly; ++k) {
			double y = k * g.spacing;
			auto integrand = [&](double x) {
				double a = v.A(x, y);
				if (!std::isfinite(a)) fail(errc::invalid_argument, "vector potential is not finite on the lattice");
				return a;
			};
			double x0 = j * g.spacing;
			double err = 0;
			double integral = quad::integrate(integrand, x0, x0 + g.spacing, 15, 1e-14, &err);
			l.theta_x(j, k) = wrap_phase(two_pi * integral);
		}
	}
	l.twist_y = detail::torus_twist(g);
	return l;
}

/// Lattice gauge transformation by per-site phases delta (applied to every
/// species on a site): each bond (s -> s') gains delta_{s'} - delta_{s}. Fluxes
/// are unchanged and operators built from the result are unitarily equivalent.
inline link_field gauge_transform(const link_field& l, const lattice_geometry& g, const grid<double>& delta) {
	require_conforming(l, g);
	require(delta.same_shape(g.Lx, g.Ly), errc::dimension_mismatch, "gauge offset does not match lattice");
	link_field out = l;
	out.theta_y = l.theta_y.value_or(grid<double>(g.Lx, g.Ly));
	if (l.theta_x2) out.theta_x2 = grid<double>(g.Lx, g.Ly);
	for (int j = 0; j < g.Lx; ++j)
		for (int k = 0; k < g.Ly; ++k) {
			int j1 = (j + 1) % g.Lx;
			int k1 = (k + 1) % g.Ly;
			if (g.has_x_link(j)) out.theta_x(j, k) = wrap_phase(l.x(j, k) + delta(j1, k) - delta(j, k));
			if (l.theta_x2) out.theta_x2->operator()(j, k) = wrap_phase((*l.theta_x2)(j, k) + delta((j + 2) % g.Lx, k) - delta(j, k));
			if (g.has_y_link(k))
				(*out.theta_y)(j, k) = wrap_phase((l.theta_y ? (*l.theta_y)(j, k) : 0.0) + delta(j, k1) - delta(j, k));
		}
	return out;
}

/// Landau-gauge links theta_{j,k} = 2 pi alpha k with the torus twist.
inline link_field uniform_links(rational alpha, const lattice_geometry& g) {
	return links_from_phases(uniform_phase_pattern(alpha, g), g);
}

} // namespace gaugelatt
