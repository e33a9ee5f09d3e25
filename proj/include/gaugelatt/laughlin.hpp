#pragma once

// nu = 1/2 bosonic Laughlin states on the magnetic torus, sampled at the sites.
//
// With u = (i y - x)/Lx, tau = i Ly/Lx and b = 2 pi alpha (inverse squared
// magnetic length), the two torus states are
//
//   Psi_s = theta[(s + N - 1)/2, N - 1](2 U | 2 tau) prod_{i<j} theta_1(pi (u_i - u_j) | tau)^2
//           prod_i exp(-b y_i^2 / 2),          U = sum_i u_i,  s in {0, 1},
//
// which obey exactly the boundary conditions of the Landau-gauge links
// theta_x = 2 pi alpha k closed by the y-seam twist -2 pi alpha Ly j.

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "fock.hpp"
#include "lattice.hpp"
#include "motional.hpp"
#include "theta.hpp"

namespace gaugelatt {

/// Gauge in which a subspace was built; overlaps are only meaningful against
/// states built from the same links.
struct gauge_tag {
	std::string gauge = "landau_x";
	rational alpha{0, 1};
	int Lx = 0;
	int Ly = 0;

	nlohmann::json to_json() const {
		return {{"gauge", gauge},
		        {"alpha", alpha.str()},
		        {"Lx", Lx},
		        {"Ly", Ly},
		        {"theta_x", "2*pi*alpha*k"},
		        {"y_seam_twist", "-2*pi*alpha*Ly*j"}};
	}
};

struct laughlin_subspace {
	int particles = 0;
	int sites = 0;
	std::vector<cvector> states;      // orthonormal, first quantized over sites^N
	std::vector<cvector> fock_states; // same states on fock_basis(sites, N)
	gauge_tag tag;

	/// Columns spanning the subspace in the first-quantized space.
	cmatrix basis() const {
		cmatrix m(states.front().size(), static_cast<Eigen::Index>(states.size()));
		for (std::size_t i = 0; i < states.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = states[i];
		return m;
	}
};

/// Continuum torus Laughlin amplitude at positions (x_i, y_i) in units of r0.
inline cplx laughlin_amplitude(const std::vector<double>& x, const std::vector<double>& y, int s, rational alpha,
                               int Lx, int Ly) {
	int N = static_cast<int>(x.size());
	const cplx I(0, 1);
	cplx tau(0, static_cast<double>(Ly) / Lx);
	double b = two_pi * alpha.value();
	std::vector<cplx> u(static_cast<std::size_t>(N));
	cplx U = 0;
	for (int i = 0; i < N; ++i) {
		u[i] = (I * y[i] - x[i]) / static_cast<double>(Lx);
		U += u[i];
	}
	theta_params cm{2.0 * tau, 0.5 * (s + N - 1), static_cast<double>(N - 1)};
	cplx v = theta_function(2.0 * U, cm);
	for (int i = 0; i < N; ++i)
		for (int j = i + 1; j < N; ++j) {
			cplx t = jacobi_theta1(std::numbers::pi * (u[i] - u[j]), tau);
			v *= t * t;
		}
	for (int i = 0; i < N; ++i) v *= std::exp(-0.5 * b * y[i] * y[i]);
	return v;
}

/// Both Laughlin states of N bosons at nu = N / (alpha Lx Ly) = 1/2.
inline laughlin_subspace laughlin_lattice_states(int N, rational alpha, const lattice_geometry& g) {
	g.validate();
	require(g.is_torus(), errc::invalid_argument, "Laughlin torus states need a magnetic torus");
	require(alpha == g.background_flux, errc::invalid_argument, "alpha differs from the torus background flux");
	require(N >= 1, errc::invalid_argument, "need at least one particle");
	require(alpha * (static_cast<std::int64_t>(g.Lx) * g.Ly) == rational(2 * N, 1), errc::invalid_argument,
	        "Laughlin states need filling nu = 1/2, got N=" + std::to_string(N) + " with " +
	            std::to_string(g.flux_quanta()) + " flux quanta");
	int S = g.sites();
	std::size_t dim = detail::ipow(static_cast<std::size_t>(S), N);
	require(dim <= detail::max_first_quantized, errc::capacity, "first-quantized space too large");

	laughlin_subspace out;
	out.particles = N;
	out.sites = S;
	out.tag = {"landau_x", alpha, g.Lx, g.Ly};
	std::vector<cvector> raw;
	std::vector<double> x(static_cast<std::size_t>(N)), y(static_cast<std::size_t>(N));
	for (int s = 0; s < 2; ++s) {
		cvector psi(static_cast<Eigen::Index>(dim));
		for (std::size_t idx = 0; idx < dim; ++idx) {
			std::size_t rest = idx;
			for (int i = N - 1; i >= 0; --i) {
				int site = static_cast<int>(rest % static_cast<std::size_t>(S));
				rest /= static_cast<std::size_t>(S);
				x[i] = site / g.Ly;
				y[i] = site % g.Ly;
			}
			psi(static_cast<Eigen::Index>(idx)) = laughlin_amplitude(x, y, s, alpha, g.Lx, g.Ly);
		}
		raw.push_back(std::move(psi));
	}
	cmatrix q = orthonormal_columns(raw);
	fock_basis basis(S, N);
	for (int s = 0; s < 2; ++s) {
		out.states.push_back(q.col(s));
		out.fock_states.push_back(fock_amplitudes(out.states.back(), basis));
	}
	return out;
}

/// Tr(P_L rho P_L); depends on the subspace only.
inline double laughlin_overlap(const motional_density_matrix& rho, const laughlin_subspace& sub) {
	require(rho.particles() == sub.particles && rho.sites() == sub.sites, errc::dimension_mismatch,
	        "density matrix and Laughlin subspace live on different spaces");
	return rho.projected_weight(sub.basis());
}

/// Lattice magnetic translation by n sites along x applied to a first-quantized
/// N-particle function. In the Landau gauge theta_x = 2 pi alpha k the bulk
/// is translation invariant in x; the y-seam twist is too when alpha Ly n is
/// an integer (checked).
inline cvector magnetic_translation_x(const cvector& psi, int N, int n, const lattice_geometry& g) {
	require(g.is_torus(), errc::invalid_argument, "magnetic translation needs a torus");
	require((g.background_flux * (static_cast<std::int64_t>(g.Ly) * n)).is_integer(), errc::invalid_argument,
	        "translation by " + std::to_string(n) + " is not a symmetry of the seam twist");
	std::size_t S = static_cast<std::size_t>(g.sites());
	require(psi.size() == static_cast<Eigen::Index>(detail::ipow(S, N)), errc::dimension_mismatch,
	        "vector does not match the first-quantized space");
	cvector out(psi.size());
	for (std::size_t idx = 0; idx < static_cast<std::size_t>(psi.size()); ++idx) {
		std::size_t rest = idx, target = 0, scale = 1;
		for (int i = 0; i < N; ++i) {
			int site = static_cast<int>(rest % S);
			rest /= S;
			int j = site / g.Ly, k = site % g.Ly;
			int jj = ((j + n) % g.Lx + g.Lx) % g.Lx;
			target += static_cast<std::size_t>(g.site(jj, k)) * scale;
			scale *= S;
		}
		out(static_cast<Eigen::Index>(target)) = psi(static_cast<Eigen::Index>(idx));
	}
	return out;
}

/// Smallest n >= 1 for which the x translation by n is a symmetry.
inline int magnetic_translation_step(const lattice_geometry& g) {
	rational a = g.background_flux * static_cast<std::int64_t>(g.Ly);
	return static_cast<int>(a.q);
}

/// ||P T P - T P|| (spectral norm restricted to the subspace): zero when the
/// translation maps the subspace onto itself.
inline double translation_leakage(const laughlin_subspace& sub, const lattice_geometry& g, int n) {
	cmatrix P = sub.basis();
	cmatrix TP(P.rows(), P.cols());
	for (Eigen::Index c = 0; c < P.cols(); ++c) TP.col(c) = magnetic_translation_x(P.col(c), sub.particles, n, g);
	cmatrix leak = TP - P * (P.adjoint() * TP);
	Eigen::JacobiSVD<cmatrix> svd(leak);
	return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

/// <sum_s n_s (n_s - 1)> / (N (N - 1)) for a single-species Fock vector; the
/// probability-like weight of multiply occupied sites.
inline double double_occupancy(const cvector& fock, const fock_basis& basis) {
	int N = basis.particles();
	if (N < 2) return 0.0;
	double acc = 0;
	for (std::size_t i = 0; i < basis.size(); ++i) {
		double d = 0;
		for (auto o : basis.occupation(i)) d += double(o) * (o - 1);
		acc += std::norm(fock(static_cast<Eigen::Index>(i))) * d;
	}
	return acc / (double(N) * (N - 1));
}

/// True when the links are the Landau-gauge links the subspace was built for
/// (phases compared on the circle to 1e-9).
inline bool gauge_matches(const laughlin_subspace& sub, const link_field& l, const lattice_geometry& g) {
	if (!l.conforms(g) || g.Lx != sub.tag.Lx || g.Ly != sub.tag.Ly) return false;
	if (l.theta_y || l.theta_x2) return false;
	auto ref = uniform_links(sub.tag.alpha, g);
	auto close = [](double a, double b) {
		return circular_distance(wrap_phase(a) / two_pi, wrap_phase(b) / two_pi) < 1e-9;
	};
	for (int j = 0; j < g.Lx; ++j) {
		if (!close(l.twist_y[j], ref.twist_y[j])) return false;
		for (int k = 0; k < g.Ly; ++k)
			if (g.has_x_link(j) && !close(l.x(j, k), ref.x(j, k))) return false;
	}
	return true;
}

} // namespace gaugelatt
