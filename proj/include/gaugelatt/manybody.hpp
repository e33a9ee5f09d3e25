#pragma once

// Second-quantized bosonic Hamiltonians on a Fock basis: the bilayer model with
// the on-site interaction U sum [(a+)^2 a^2 + (b+)^2 b^2 + a+a b+b], and the
// single-species target model used as an effective-model oracle.

#include <cmath>
#include <vector>

#include "fock.hpp"
#include "krylov.hpp"
#include "singleparticle.hpp"

namespace gaugelatt {

struct many_body_state {
	cvector amplitudes;
	double energy = 0;
	double residual = 0;
};

/// sum_{p,q} h_pq c+_p c_q + diag(occupation) over the basis. The one-body
/// matrix must be over basis.modes() modes.
template <class Diagonal>
sparse_cmatrix assemble_manybody(const sparse_cmatrix& one_body, const fock_basis& basis, Diagonal&& diagonal) {
	require(one_body.rows() == basis.modes() && one_body.cols() == basis.modes(), errc::dimension_mismatch,
	        "one-body operator and Fock basis have different mode counts");
	// Column view of h: for each source mode q, the (p, h_pq) pairs.
	std::vector<std::vector<std::pair<int, cplx>>> from(static_cast<std::size_t>(basis.modes()));
	for (int r = 0; r < one_body.outerSize(); ++r)
		for (sparse_cmatrix::InnerIterator it(one_body, r); it; ++it)
			from[static_cast<std::size_t>(it.col())].emplace_back(static_cast<int>(it.row()), it.value());

	std::vector<triplet> entries;
	std::vector<std::uint8_t> work(static_cast<std::size_t>(basis.modes()));
	for (std::size_t i = 0; i < basis.size(); ++i) {
		auto occ = basis.occupation(i);
		double d = diagonal(occ);
		std::copy(occ.begin(), occ.end(), work.begin());
		for (int q = 0; q < basis.modes(); ++q) {
			int nq = occ[q];
			if (nq == 0) continue;
			for (auto [p, h] : from[static_cast<std::size_t>(q)]) {
				if (p == q) {
					d += h.real() * nq;
					continue;
				}
				if (occ[p] >= basis.max_occupancy()) continue;
				int np = occ[p];
				--work[q];
				++work[p];
				auto target = basis.index_of(work);
				++work[q];
				--work[p];
				if (target == fock_basis::npos) fail(errc::dimension_mismatch, "hop leaves the Fock basis");
				entries.emplace_back(static_cast<int>(target), static_cast<int>(i), h * std::sqrt(double(nq) * (np + 1)));
			}
		}
		if (d != 0) entries.emplace_back(static_cast<int>(i), static_cast<int>(i), cplx(d, 0));
	}
	auto n = static_cast<Eigen::Index>(basis.size());
	sparse_cmatrix H(n, n);
	H.setFromTriplets(entries.begin(), entries.end());
	H.makeCompressed();
	return H;
}

/// Bilayer hopping + Raman terms plus U [n_a(n_a-1) + n_b(n_b-1) + n_a n_b] per site.
inline sparse_cmatrix build_manybody_hamiltonian(const lattice_geometry& g, const link_field& l, const model_params& p,
                                                 const fock_basis& basis) {
	require(basis.modes() == 2 * g.sites(), errc::dimension_mismatch, "Fock basis must have 2*Lx*Ly modes");
	auto single = build_bilayer_hamiltonian(g, l, p);
	int n = g.sites();
	double U = p.U;
	return assemble_manybody(single.H, basis, [n, U](std::span<const std::uint8_t> occ) {
		if (U == 0) return 0.0;
		double e = 0;
		for (int s = 0; s < n; ++s) {
			double na = occ[s], nb = occ[n + s];
			e += na * (na - 1) + nb * (nb - 1) + na * nb;
		}
		return U * e;
	});
}

/// Single-species Peierls model with U n(n-1) on site. On a hardcore basis
/// (max occupancy 1) the interaction term vanishes identically.
inline sparse_cmatrix build_target_manybody(const lattice_geometry& g, const link_field& l, double J0, double J0_2,
                                            double U, const fock_basis& basis) {
	require(basis.modes() == g.sites(), errc::dimension_mismatch, "Fock basis must have Lx*Ly modes");
	auto single = build_target_hamiltonian(g, l, J0, J0_2);
	return assemble_manybody(single.H, basis, [U](std::span<const std::uint8_t> occ) {
		double e = 0;
		for (auto o : occ) e += double(o) * (o - 1);
		return U * e;
	});
}

/// Lowest `count` eigenstates by block Lanczos (residual <= tolerance * ||H||).
inline std::vector<many_body_state> lowest_eigenstates(const sparse_cmatrix& H, int count, krylov_options opt = {}) {
	require(H.rows() == H.cols(), errc::dimension_mismatch, "Hamiltonian must be square");
	require(count >= 1 && count <= H.rows(), errc::invalid_argument, "invalid eigenstate count");
	auto r = lowest_eigenpairs(H, count, opt);
	std::vector<many_body_state> out;
	for (int i = 0; i < count; ++i) {
		cvector v = r.vectors.col(i);
		v.normalize();
		out.push_back({std::move(v), r.values(i), r.residuals[static_cast<std::size_t>(i)]});
	}
	return out;
}

/// <c+_p c_q> in a normalized state.
inline cplx one_body_expectation(const many_body_state& s, const fock_basis& basis, int p, int q) {
	require(s.amplitudes.size() == static_cast<Eigen::Index>(basis.size()), errc::dimension_mismatch,
	        "state does not match Fock basis");
	cplx acc = 0;
	std::vector<std::uint8_t> work(static_cast<std::size_t>(basis.modes()));
	for (std::size_t i = 0; i < basis.size(); ++i) {
		auto occ = basis.occupation(i);
		if (occ[q] == 0) continue;
		cplx amp = s.amplitudes(static_cast<Eigen::Index>(i));
		if (amp == cplx(0)) continue;
		if (p == q) {
			acc += std::norm(amp) * double(occ[q]);
			continue;
		}
		std::copy(occ.begin(), occ.end(), work.begin());
		--work[q];
		++work[p];
		auto t = basis.index_of(work);
		if (t == fock_basis::npos) continue;
		acc += std::conj(s.amplitudes(static_cast<Eigen::Index>(t))) * amp * std::sqrt(double(occ[q]) * (occ[p] + 1));
	}
	return acc;
}

/// Occupation of the dark modes c = (a - b)/sqrt2 summed over sites.
inline double c_mode_number(const many_body_state& s, const fock_basis& basis, int sites) {
	require(basis.modes() == 2 * sites, errc::dimension_mismatch, "c-mode number needs a bilayer basis");
	// sum_s <c+c> = sum_s (n_a + n_b - a+b - b+a)/2 = N/2 - sum_s Re<a+_s b_s>
	double cross = 0;
	for (int site = 0; site < sites; ++site) cross += one_body_expectation(s, basis, site, sites + site).real();
	return 0.5 * basis.particles() - cross;
}

/// Expectation of the total boson number operator (diagonal in the basis).
inline double number_expectation(const cvector& v, const fock_basis& basis) {
	double acc = 0;
	for (std::size_t i = 0; i < basis.size(); ++i) {
		int n = 0;
		for (auto o : basis.occupation(i)) n += o;
		acc += std::norm(v(static_cast<Eigen::Index>(i))) * n;
	}
	return acc;
}

} // namespace gaugelatt
