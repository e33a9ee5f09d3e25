#pragma once

// Reduced density matrix of the motional degree of freedom.
//
// Identical bosons carry no tensor factor for the internal state, so the state
// is expanded in the first-quantized symmetric basis |r_1 s_1, ..., r_N s_N>
// and the internal labels (s_1..s_N) are traced out:
//
//   rho(r, r') = sum_s psi(r, s) conj(psi(r', s)).
//
// rho is kept in factored form, one vector psi(., s) over (Lx*Ly)^N positions per
// label string s, so its rank is at most species^N and every diagnostic
// reduces to Gram matrices of the factors.

#include <algorithm>
#include <cmath>
#include <vector>

#include "fock.hpp"
#include "linalg.hpp"
#include "manybody.hpp"

namespace gaugelatt {

namespace detail {

inline std::size_t ipow(std::size_t base, int e) {
	std::size_t r = 1;
	for (int i = 0; i < e; ++i) r *= base;
	return r;
}

inline double factorial(int n) {
	double f = 1;
	for (int i = 2; i <= n; ++i) f *= i;
	return f;
}

/// Calls f(modes, amplitude) for every ordering of the occupied modes of
/// Fock state i, with the amplitude of the normalized symmetric function.
template <class F>
void for_each_ordering(const fock_basis& basis, std::size_t i, cplx fock_amplitude, F&& f) {
	auto occ = basis.occupation(i);
	std::vector<int> modes;
	double norm = 1;
	for (int m = 0; m < basis.modes(); ++m) {
		for (int c = 0; c < occ[m]; ++c) modes.push_back(m);
		norm *= factorial(occ[m]);
	}
	cplx amp = fock_amplitude * std::sqrt(norm / factorial(basis.particles()));
	do {
		f(modes, amp);
	} while (std::next_permutation(modes.begin(), modes.end()));
}

inline constexpr std::size_t max_first_quantized = std::size_t(1) << 26;

} // namespace detail

/// Symmetric first-quantized wavefunction over sites^N of a single-species
/// Fock vector; positions are indexed r_1 * S^{N-1} + ... + r_N.
inline cvector first_quantized(const cvector& fock, const fock_basis& basis) {
	std::size_t S = static_cast<std::size_t>(basis.modes());
	std::size_t dim = detail::ipow(S, basis.particles());
	require(dim <= detail::max_first_quantized, errc::capacity, "first-quantized space too large");
	require(fock.size() == static_cast<Eigen::Index>(basis.size()), errc::dimension_mismatch, "vector does not match basis");
	cvector psi = cvector::Zero(static_cast<Eigen::Index>(dim));
	for (std::size_t i = 0; i < basis.size(); ++i) {
		cplx a = fock(static_cast<Eigen::Index>(i));
		if (a == cplx(0)) continue;
		detail::for_each_ordering(basis, i, a, [&](const std::vector<int>& modes, cplx amp) {
			std::size_t idx = 0;
			for (int m : modes) idx = idx * S + static_cast<std::size_t>(m);
			psi(static_cast<Eigen::Index>(idx)) = amp;
		});
	}
	return psi;
}

/// Inverse of first_quantized for a symmetric function; the antisymmetric or
/// non-symmetric part of psi is projected out.
inline cvector fock_amplitudes(const cvector& psi, const fock_basis& basis) {
	std::size_t S = static_cast<std::size_t>(basis.modes());
	require(psi.size() == static_cast<Eigen::Index>(detail::ipow(S, basis.particles())), errc::dimension_mismatch,
	        "first-quantized vector does not match basis");
	cvector out = cvector::Zero(static_cast<Eigen::Index>(basis.size()));
	for (std::size_t i = 0; i < basis.size(); ++i) {
		cplx acc = 0;
		double count = 0;
		cplx unit_amp = 0;
		detail::for_each_ordering(basis, i, cplx(1), [&](const std::vector<int>& modes, cplx amp) {
			std::size_t idx = 0;
			for (int m : modes) idx = idx * S + static_cast<std::size_t>(m);
			acc += psi(static_cast<Eigen::Index>(idx));
			count += 1;
			unit_amp = amp;
		});
		// <n|psi> = sum over orderings of conj(unit amplitude) psi(ordering)
		out(static_cast<Eigen::Index>(i)) = std::conj(unit_amp) * acc;
		(void)count;
	}
	return out;
}

class motional_density_matrix {
public:
	motional_density_matrix() = default;
	motional_density_matrix(int particles, int sites, std::vector<cvector> factors)
	    : particles_(particles), sites_(sites), factors_(std::move(factors)) {}

	int particles() const { return particles_; }
	int sites() const { return sites_; }
	const std::vector<cvector>& factors() const { return factors_; }

	double trace() const {
		double t = 0;
		for (const auto& f : factors_) t += f.squaredNorm();
		return t;
	}

	/// Gram matrix G_{st} = <psi_s|psi_t>; rho and G share their nonzero spectrum.
	cmatrix gram() const {
		auto n = static_cast<Eigen::Index>(factors_.size());
		cmatrix g(n, n);
		for (Eigen::Index s = 0; s < n; ++s)
			for (Eigen::Index t = 0; t < n; ++t) g(s, t) = factors_[s].dot(factors_[t]);
		return g;
	}

	double purity() const { return gram().cwiseAbs2().sum(); }

	/// Nonzero part of the spectrum of rho, ascending.
	std::vector<double> eigenvalues() const {
		cmatrix g = gram();
		return hermitian_eigenvalues(0.5 * (g + g.adjoint()));
	}

	/// Tr(P rho P) for P projecting on the orthonormal columns of `basis`.
	double projected_weight(const cmatrix& basis) const {
		double w = 0;
		for (const auto& f : factors_) w += (basis.adjoint() * f).squaredNorm();
		return w;
	}

	/// <v| rho |v>
	double expectation(const cvector& v) const {
		double w = 0;
		for (const auto& f : factors_) w += std::norm(v.dot(f));
		return w;
	}

	/// Equal-weight mixture (rho_1 + ... + rho_n)/n.
	static motional_density_matrix average(const std::vector<motional_density_matrix>& parts) {
		require(!parts.empty(), errc::invalid_argument, "empty mixture");
		std::vector<cvector> f;
		double scale = 1.0 / std::sqrt(static_cast<double>(parts.size()));
		for (const auto& p : parts) {
			require(p.particles_ == parts[0].particles_ && p.sites_ == parts[0].sites_, errc::dimension_mismatch,
			        "mixing density matrices of different spaces");
			for (const auto& v : p.factors_) f.push_back(v * scale);
		}
		return {parts[0].particles_, parts[0].sites_, std::move(f)};
	}

private:
	int particles_ = 0;
	int sites_ = 0;
	std::vector<cvector> factors_;
};

/// Traces the internal label out of a state over `species` x `sites` modes
/// (species-major mode numbering).
inline motional_density_matrix motional_density(const many_body_state& state, const fock_basis& basis, int sites,
                                                int species = 2) {
	require(basis.modes() == species * sites, errc::dimension_mismatch, "basis modes must equal species*sites");
	require(state.amplitudes.size() == static_cast<Eigen::Index>(basis.size()), errc::dimension_mismatch,
	        "state does not match basis");
	int N = basis.particles();
	std::size_t S = static_cast<std::size_t>(sites);
	std::size_t positions = detail::ipow(S, N);
	std::size_t labels = detail::ipow(static_cast<std::size_t>(species), N);
	require(positions * labels <= detail::max_first_quantized, errc::capacity, "first-quantized space too large");
	std::vector<cvector> factors(labels, cvector::Zero(static_cast<Eigen::Index>(positions)));
	for (std::size_t i = 0; i < basis.size(); ++i) {
		cplx a = state.amplitudes(static_cast<Eigen::Index>(i));
		if (a == cplx(0)) continue;
		detail::for_each_ordering(basis, i, a, [&](const std::vector<int>& modes, cplx amp) {
			std::size_t pos = 0, lab = 0;
			for (int m : modes) {
				pos = pos * S + static_cast<std::size_t>(m % sites);
				lab = lab * static_cast<std::size_t>(species) + static_cast<std::size_t>(m / sites);
			}
			factors[lab](static_cast<Eigen::Index>(pos)) = amp;
		});
	}
	return {N, sites, std::move(factors)};
}

inline double purity(const motional_density_matrix& rho) { return rho.purity(); }

/// Columns of an orthonormal basis for the span of `vectors` (Lowdin-free QR).
inline cmatrix orthonormal_columns(const std::vector<cvector>& vectors) {
	require(!vectors.empty(), errc::invalid_argument, "no vectors to orthonormalize");
	cmatrix m(vectors[0].size(), static_cast<Eigen::Index>(vectors.size()));
	for (std::size_t i = 0; i < vectors.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vectors[i];
	Eigen::HouseholderQR<cmatrix> qr(m);
	return qr.householderQ() * cmatrix::Identity(m.rows(), m.cols());
}

} // namespace gaugelatt
