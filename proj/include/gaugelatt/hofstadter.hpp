#pragma once

// Magnetic Bloch spectra of the bilayer model in the uniform field
// theta_{j,k} = 2 pi alpha k, alpha = p/q. The magnetic cell is 1 x q sites
// (m = k mod q). With psi(j+1,k) = e^{i kx} psi(j,k) and psi(j,k+q) = e^{iK} psi(j,k)
// the 2q x 2q block has
//   a-sector: -2J cos(kx - 2 pi alpha m) (+ -2J2 cos(2kx - 4 pi alpha m)) on the diagonal,
//   b-sector: the Harper ring m <-> m+1 with hopping -J and the cell phase K on the seam bond,
//   omega between a_m and b_m.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <thread>
#include <vector>

#include "lattice.hpp"
#include "lattice_io.hpp"
#include "linalg.hpp"
#include "singleparticle.hpp"

namespace gaugelatt {

enum class spectrum_provenance { bloch_blocks, finite_lattice };

struct spectrum_result {
	rational alpha;
	std::vector<double> eigenvalues; // ascending
	spectrum_provenance provenance = spectrum_provenance::bloch_blocks;
	// max over k of the q-th lowest and min over k of the (q+1)-th block eigenvalue
	double lower_band_max = 0;
	double upper_band_min = 0;

	double band_gap() const { return upper_band_min - lower_band_max; }
};

namespace detail {

inline void validate_flux(std::int64_t p, std::int64_t q) {
	require(q >= 1, errc::invalid_argument, "flux denominator q must be >= 1");
	require(coprime(p, q), errc::invalid_argument,
	        "flux p/q must be written with coprime p and q (got " + std::to_string(p) + "/" + std::to_string(q) + ")");
}

} // namespace detail

/// 2q x 2q magnetic Bloch block; a_m at index m, b_m at index q + m.
inline cmatrix bloch_block(rational alpha, const model_params& prm, double kx, double K) {
	int q = static_cast<int>(alpha.q);
	double a = alpha.value();
	cmatrix h = cmatrix::Zero(2 * q, 2 * q);
	for (int m = 0; m < q; ++m) {
		double diag = -2.0 * prm.J * std::cos(kx - two_pi * a * m);
		if (prm.J2 != 0) diag += -2.0 * prm.J2 * std::cos(2.0 * kx - 2.0 * two_pi * a * m);
		h(m, m) += diag;
		h(m, q + m) += prm.omega;
		h(q + m, m) += prm.omega;
	}
	// b hops: (H psi)(k) gets t psi(k+d) for d = +-1 (and +-2 with J2); a shift
	// past the cell edge picks up e^{iK} per cell crossed.
	auto ring = [&](int d, double t) {
		for (int m = 0; m < q; ++m) {
			int target = m + d;
			int cells = (target >= 0) ? target / q : -((q - 1 - target) / q);
			int mm = target - cells * q;
			h(q + m, q + mm) += std::polar(t, K * cells);
		}
	};
	ring(+1, -prm.J);
	ring(-1, -prm.J);
	if (prm.J2 != 0) {
		ring(+2, -prm.J2);
		ring(-2, -prm.J2);
	}
	return h;
}

/// Pools block spectra over the k grid; kx_grid and K_grid are the crystal
/// momentum along x and the Bloch phase across one magnetic cell.
inline spectrum_result bloch_block_spectrum(std::int64_t p, std::int64_t q, const model_params& prm,
                                            const std::vector<double>& kx_grid, const std::vector<double>& K_grid) {
	detail::validate_flux(p, q);
	prm.validate();
	require(!kx_grid.empty() && !K_grid.empty(), errc::invalid_argument, "empty k grid");
	spectrum_result out;
	out.alpha = rational(p, q);
	out.provenance = spectrum_provenance::bloch_blocks;
	out.lower_band_max = -std::numeric_limits<double>::infinity();
	out.upper_band_min = std::numeric_limits<double>::infinity();
	out.eigenvalues.reserve(kx_grid.size() * K_grid.size() * 2 * static_cast<std::size_t>(q));
	for (double kx : kx_grid)
		for (double K : K_grid) {
			auto ev = hermitian_eigenvalues(bloch_block(out.alpha, prm, kx, K));
			out.lower_band_max = std::max(out.lower_band_max, ev[q - 1]);
			out.upper_band_min = std::min(out.upper_band_min, ev[q]);
			out.eigenvalues.insert(out.eigenvalues.end(), ev.begin(), ev.end());
		}
	std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
	return out;
}

inline spectrum_result bloch_block_spectrum(rational alpha, const model_params& prm, const std::vector<double>& kx_grid,
                                            const std::vector<double>& K_grid) {
	return bloch_block_spectrum(alpha.p, alpha.q, prm, kx_grid, K_grid);
}

struct k_grid {
	std::vector<double> kx;
	std::vector<double> K;
};

/// Momenta allowed on an Lx x Ly torus at flux p/q with q | Ly:
/// kx = 2 pi n / Lx and K = 2 pi n' q / Ly.
inline k_grid commensurate_k_grid(rational alpha, const lattice_geometry& g) {
	require(g.is_torus(), errc::invalid_argument, "commensurate k grid needs a torus");
	require(g.Ly % alpha.q == 0, errc::invalid_argument, "flux denominator must divide Ly");
	k_grid out;
	for (int n = 0; n < g.Lx; ++n) out.kx.push_back(two_pi * n / g.Lx);
	int cells = static_cast<int>(g.Ly / alpha.q);
	for (int n = 0; n < cells; ++n) out.K.push_back(two_pi * n / cells);
	return out;
}

/// Sampling of the reduced magnetic zone: the spectrum is periodic in kx with
/// period 2 pi / q, so kx covers [0, 2pi/q) and K covers [0, 2pi).
inline k_grid reduced_zone_grid(rational alpha, int resolution) {
	require(resolution >= 1, errc::invalid_argument, "k grid resolution must be >= 1");
	k_grid out;
	for (int n = 0; n < resolution; ++n) {
		out.kx.push_back(two_pi * n / (static_cast<double>(alpha.q) * resolution));
		out.K.push_back(two_pi * n / resolution);
	}
	return out;
}

/// Dense spectrum of the finite bilayer lattice in the uniform field.
inline spectrum_result finite_lattice_spectrum(rational alpha, const model_params& prm, const lattice_geometry& g) {
	auto links = uniform_links(alpha, g);
	spectrum_result out;
	out.alpha = alpha;
	out.provenance = spectrum_provenance::finite_lattice;
	out.eigenvalues = spectrum(build_bilayer_hamiltonian(g, links, prm));
	std::size_t half = out.eigenvalues.size() / 2;
	out.lower_band_max = out.eigenvalues[half - 1];
	out.upper_band_min = out.eigenvalues[half];
	return out;
}

/// Every p/q in [0, 1] with 1 <= q < q_max and gcd(p, q) = 1, ascending.
inline std::vector<rational> farey_fluxes(int q_max) {
	require(q_max >= 2, errc::invalid_argument, "q_max must be >= 2");
	std::vector<rational> out;
	for (int q = 1; q < q_max; ++q)
		for (int p = 0; p <= q; ++p)
			if (coprime(p, q)) out.emplace_back(p, q);
	std::sort(out.begin(), out.end());
	return out;
}

/// Hofstadter scan over farey_fluxes(q_max), `resolution` x `resolution`
/// reduced-zone points per flux, spread over `threads` workers. Results are in
/// ascending alpha regardless of scheduling.
inline std::vector<spectrum_result> butterfly_scan(int q_max, const model_params& prm, int resolution = 16,
                                                   int threads = 1) {
	prm.validate();
	auto fluxes = farey_fluxes(q_max);
	std::vector<spectrum_result> out(fluxes.size());
	std::atomic<std::size_t> next{0};
	auto worker = [&] {
		for (std::size_t i = next++; i < fluxes.size(); i = next++) {
			auto kg = reduced_zone_grid(fluxes[i], resolution);
			out[i] = bloch_block_spectrum(fluxes[i], prm, kg.kx, kg.K);
		}
	};
	int n = std::max(1, threads);
	if (n == 1) {
		worker();
	} else {
		std::vector<std::jthread> pool;
		for (int t = 0; t < n; ++t) pool.emplace_back(worker);
	}
	return out;
}

/// CSV rows "p,q,alpha,eigenvalue" sorted by (alpha, eigenvalue).
inline void write_spectrum_csv(std::ostream& os, const std::vector<spectrum_result>& spectra) {
	os << "p,q,alpha,eigenvalue\n";
	for (const auto& s : spectra)
		for (double e : s.eigenvalues)
			os << s.alpha.p << ',' << s.alpha.q << ',' << fmt12(s.alpha.value()) << ',' << fmt12(e) << '\n';
}

/// Plot description for a butterfly rendering of a spectrum CSV.
inline void write_plot_description(std::ostream& os, const std::string& csv_name, const model_params& prm, int q_max) {
	os << "# scatter plot of a Hofstadter spectrum\n";
	os << "data = " << csv_name << "\n";
	os << "kind = scatter\n";
	os << "x = eigenvalue\n";
	os << "x_label = energy / J\n";
	os << "y = alpha\n";
	os << "y_label = alpha (flux quanta per plaquette)\n";
	os << "title = omega=" << fmt12(prm.omega / prm.J) << "J, J2=" << fmt12(prm.J2 / prm.J) << "J, q<" << q_max << "\n";
	os << "marker_size = 0.2\n";
}

} // namespace gaugelatt
