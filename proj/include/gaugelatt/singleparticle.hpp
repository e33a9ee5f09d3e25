#pragma once

// Bilayer single-particle Hamiltonian in the gauge-transformed frame
//
//   H_s = -J sum (a+_{j+1,k} a_{j,k} e^{i theta_{j,k}} + b+_{j,k+1} b_{j,k} + h.c.)
//         + omega sum (a+_{j,k} b_{j,k} + h.c.)
//
// its c/d rotation, and the single-species Peierls target model.

#include <cmath>
#include <vector>

#include "lattice.hpp"
#include "linalg.hpp"

namespace gaugelatt {

struct model_params {
	double J = 1.0;
	double omega = 0.0;
	double J2 = 0.0;
	double U = 0.0;

	void validate() const {
		require(J > 0 && std::isfinite(J), errc::invalid_argument, "hopping J must be positive");
		require(omega >= 0 && std::isfinite(omega), errc::invalid_argument, "Raman rate omega must be non-negative");
		require(J2 >= 0 && std::isfinite(J2), errc::invalid_argument, "second-neighbour hopping J2 must be non-negative");
		require(std::isfinite(U), errc::invalid_argument, "interaction U must be finite");
	}
};

enum class species : int { a = 0, b = 1 };

/// Sparse Hermitian operator over (species, j, k) modes. Modes are species-major:
/// mode = species * Lx*Ly + j*Ly + k. Single-species operators have one species.
struct operator_matrix {
	int Lx = 0;
	int Ly = 0;
	int species_count = 2;
	sparse_cmatrix H;

	int sites() const { return Lx * Ly; }
	int dim() const { return species_count * sites(); }
	int mode(species s, int j, int k) const { return static_cast<int>(s) * sites() + j * Ly + k; }
	int mode(int s, int site) const { return s * sites() + site; }

	cmatrix dense() const { return cmatrix(H); }
};

using bilayer_operator_matrix = operator_matrix;

namespace detail {

/// Collects hopping terms t c+_to c_from together with their conjugates.
struct hop_builder {
	std::vector<triplet> entries;

	void hop(int to, int from, cplx t) {
		entries.emplace_back(to, from, t);
		entries.emplace_back(from, to, std::conj(t));
	}
	void onsite(int m, double e) { entries.emplace_back(m, m, cplx(e, 0)); }

	sparse_cmatrix finish(int dim) {
		sparse_cmatrix h(dim, dim);
		h.setFromTriplets(entries.begin(), entries.end());
		h.makeCompressed();
		return h;
	}
};

inline cplx peierls(double amplitude, double phase) { return std::polar(amplitude, phase); }

/// Adds x hops (first and second neighbour) for one species layer.
inline void add_x_hops(hop_builder& b, const lattice_geometry& g, const link_field& l, int offset, double t1,
                       double t2) {
	for (int j = 0; j < g.Lx; ++j)
		for (int k = 0; k < g.Ly; ++k) {
			int from = offset + g.site(j, k);
			if (g.has_x_link(j)) b.hop(offset + g.site((j + 1) % g.Lx, k), from, peierls(-t1, l.x(j, k)));
			if (t2 != 0 && g.Lx > 2 && g.has_x_link(j) && g.has_x_link((j + 1) % g.Lx))
				b.hop(offset + g.site((j + 2) % g.Lx, k), from, peierls(-t2, l.x2(j, k)));
		}
}

inline void add_y_hops(hop_builder& b, const lattice_geometry& g, const link_field& l, int offset, double t1,
                       double t2) {
	for (int j = 0; j < g.Lx; ++j)
		for (int k = 0; k < g.Ly; ++k) {
			int from = offset + g.site(j, k);
			if (g.has_y_link(k)) b.hop(offset + g.site(j, (k + 1) % g.Ly), from, peierls(-t1, l.y(j, k)));
			if (t2 != 0 && g.Ly > 2 && g.has_y_link(k) && g.has_y_link((k + 1) % g.Ly))
				b.hop(offset + g.site(j, (k + 2) % g.Ly), from, peierls(-t2, l.y2(j, k)));
		}
}

} // namespace detail

/// a hops along x with the Peierls links, b hops along y (torus twist only),
/// omega couples a and b on every site. J2 adds second-neighbour hops along the
/// same axes with the summed link phases.
inline operator_matrix build_bilayer_hamiltonian(const lattice_geometry& g, const link_field& l,
                                                 const model_params& p) {
	g.validate();
	p.validate();
	require_conforming(l, g);
	operator_matrix m{g.Lx, g.Ly, 2, {}};
	detail::hop_builder b;
	int n = g.sites();
	detail::add_x_hops(b, g, l, 0, p.J, p.J2);
	detail::add_y_hops(b, g, l, n, p.J, p.J2);
	if (p.omega != 0)
		for (int s = 0; s < n; ++s) b.hop(s, n + s, cplx(p.omega, 0));
	m.H = b.finish(2 * n);
	return m;
}

/// Single-species Peierls model -J0 sum (c+_{j+1,k} c_{j,k} e^{i theta} + c+_{j,k+1} c_{j,k} + h.c.),
/// with optional second-neighbour hopping J0_2 along both axes.
inline operator_matrix build_target_hamiltonian(const lattice_geometry& g, const link_field& l, double J0,
                                                double J0_2 = 0.0) {
	g.validate();
	require_conforming(l, g);
	require(J0 > 0 && std::isfinite(J0), errc::invalid_argument, "target hopping J0 must be positive");
	operator_matrix m{g.Lx, g.Ly, 1, {}};
	detail::hop_builder b;
	detail::add_x_hops(b, g, l, 0, J0, J0_2);
	detail::add_y_hops(b, g, l, 0, J0, J0_2);
	m.H = b.finish(g.sites());
	return m;
}

/// H_s = H0 + H1 in the basis (c_0..c_{n-1}, d_0..d_{n-1}) with
/// c = (a - b)/sqrt2, d = (a + b)/sqrt2. H0 keeps the cc and dd blocks, H1 the
/// cd and dc blocks, and `rotation` is the unitary U with H0 + H1 = U+ H_s U.
struct cd_decomposition {
	sparse_cmatrix H0;
	sparse_cmatrix H1;
	sparse_cmatrix rotation;
	int sites = 0;

	cmatrix c_block() const { return cmatrix(H0).topLeftCorner(sites, sites); }
	cmatrix d_block() const { return cmatrix(H0).bottomRightCorner(sites, sites); }
};

inline sparse_cmatrix cd_rotation(int sites) {
	const double r = 1.0 / std::sqrt(2.0);
	std::vector<triplet> t;
	t.reserve(4 * static_cast<std::size_t>(sites));
	for (int s = 0; s < sites; ++s) {
		// column s: c_s+ |0> = (|a_s> - |b_s>)/sqrt2 ; column n+s: d_s+ |0>.
		t.emplace_back(s, s, r);
		t.emplace_back(sites + s, s, -r);
		t.emplace_back(s, sites + s, r);
		t.emplace_back(sites + s, sites + s, r);
	}
	sparse_cmatrix u(2 * sites, 2 * sites);
	u.setFromTriplets(t.begin(), t.end());
	return u;
}

inline cd_decomposition cd_decompose(const operator_matrix& hs) {
	require(hs.species_count == 2 && hs.H.rows() == hs.dim() && hs.H.cols() == hs.dim(), errc::dimension_mismatch,
	        "c/d decomposition needs a bilayer operator");
	int n = hs.sites();
	cd_decomposition out;
	out.sites = n;
	out.rotation = cd_rotation(n);
	sparse_cmatrix full = sparse_cmatrix(out.rotation.adjoint()) * hs.H * out.rotation;
	std::vector<triplet> diag, off;
	for (int r = 0; r < full.outerSize(); ++r)
		for (sparse_cmatrix::InnerIterator it(full, r); it; ++it) {
			bool same = (it.row() < n) == (it.col() < n);
			(same ? diag : off).emplace_back(it.row(), it.col(), it.value());
		}
	out.H0.resize(2 * n, 2 * n);
	out.H1.resize(2 * n, 2 * n);
	out.H0.setFromTriplets(diag.begin(), diag.end());
	out.H1.setFromTriplets(off.begin(), off.end());
	return out;
}

/// Sorted eigenvalues of an operator by dense diagonalization.
inline std::vector<double> spectrum(const operator_matrix& m) { return hermitian_eigenvalues(m.dense()); }

} // namespace gaugelatt
