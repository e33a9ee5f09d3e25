#pragma once

// Focused-beam synthesis of a per-site Raman field. Beam xi has the common
// mode A(r - r_xi) and complex weight x_xi; the Raman rate it drives at site
// lambda is T_{lambda xi} x_xi with
//
//   T_{lambda xi} = integral A(r - r_xi) W_a(r - r_lambda) W_b(r - r_lambda) dx dy.
//
// All profiles are Gaussian, so T is closed form. Lengths are in units of r0.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <vector>

#include <Eigen/SparseLU>
#include <Eigen/SVD>
#include <json.hpp>

#include "lattice.hpp"
#include "lattice_io.hpp"
#include "linalg.hpp"

namespace gaugelatt {

/// Harmonic-oscillator width of a sin^2 well of depth V0 (in E_r):
/// sigma = (r0/pi) (E_r/V0)^{1/4}.
inline double wannier_width(double V0, double r0 = 1.0) {
	require(std::isfinite(V0) && V0 > 0, errc::invalid_argument, "lattice depth must be positive");
	require(r0 > 0, errc::invalid_argument, "lattice spacing must be positive");
	return r0 / std::numbers::pi * std::pow(V0, -0.25);
}

/// Gaussian Wannier functions W(r) = exp(-r^2 / 2 sigma^2) / (sqrt(pi) sigma) in 2D.
struct wannier_model {
	double sigma_a = 0.2;
	double sigma_b = 0.15;

	static wannier_model from_depths(double V_a, double V_b, double r0 = 1.0) {
		return {wannier_width(V_a, r0), wannier_width(V_b, r0)};
	}

	void validate(double r0 = 1.0) const {
		require(sigma_a > 0 && sigma_b > 0, errc::invalid_argument, "Wannier widths must be positive");
		require(sigma_a < r0 && sigma_b < r0, errc::invalid_argument, "Wannier widths must be below the lattice spacing");
	}

	double W(double sigma, double r2) const { return std::exp(-r2 / (2 * sigma * sigma)) / (std::sqrt(std::numbers::pi) * sigma); }
	double product(double r2) const { return W(sigma_a, r2) * W(sigma_b, r2); }
};

/// Unit-norm Gaussian beam mode A(r) = sqrt(2/pi)/w exp(-r^2/w^2); w is the
/// 1/e^2 intensity radius. This is the single place where the mode shape
/// enters the overlap matrix.
struct mode_function {
	double waist = 0.5;

	void validate() const { require(waist > 0 && std::isfinite(waist), errc::invalid_argument, "beam waist must be positive"); }
	double operator()(double r2) const { return std::sqrt(2.0 / std::numbers::pi) / waist * std::exp(-r2 / (waist * waist)); }

	/// Closed-form T entry at squared centre separation d2.
	double overlap(const wannier_model& wm, double d2) const {
		double beta = 1.0 / (waist * waist);
		double gamma = 1.0 / (2 * wm.sigma_a * wm.sigma_a) + 1.0 / (2 * wm.sigma_b * wm.sigma_b);
		double pre = std::sqrt(2.0 / std::numbers::pi) / waist / (std::numbers::pi * wm.sigma_a * wm.sigma_b);
		return pre * std::numbers::pi / (beta + gamma) * std::exp(-beta * gamma / (beta + gamma) * d2);
	}
};

using sparse_rmatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct overlap_matrix {
	int Lx = 0, Ly = 0;
	sparse_rmatrix T;           // rows: target sites lambda, columns: beams xi
	double cutoff_radius = 0;   // entries farther apart than this are dropped
	double drop_threshold = 1e-14;
};

/// T for beams centred on every site. Entries below `drop_threshold` or beyond
/// `cutoff_radius` (if positive) are not stored.
inline overlap_matrix build_overlap_matrix(const lattice_geometry& g, const wannier_model& wm, const mode_function& mf,
                                           double cutoff_radius = 0, double drop_threshold = 1e-14) {
	g.validate();
	wm.validate(g.spacing);
	mf.validate();
	overlap_matrix out;
	out.Lx = g.Lx;
	out.Ly = g.Ly;
	out.drop_threshold = drop_threshold;
	// radius at which the entry falls to the threshold
	double t0 = mf.overlap(wm, 0);
	double beta = 1.0 / (mf.waist * mf.waist);
	double gamma = 1.0 / (2 * wm.sigma_a * wm.sigma_a) + 1.0 / (2 * wm.sigma_b * wm.sigma_b);
	double natural = drop_threshold <= 0 ? std::numeric_limits<double>::infinity()
	                 : t0 > drop_threshold
	                     ? std::sqrt(std::log(t0 / drop_threshold) * (beta + gamma) / (beta * gamma))
	                     : 0.0;
	out.cutoff_radius = cutoff_radius > 0 ? std::min(cutoff_radius, natural) : natural;
	double extent = std::max(g.Lx, g.Ly);
	int reach = static_cast<int>(std::ceil(std::min(out.cutoff_radius / g.spacing, extent)));
	int n = g.sites();
	std::vector<Eigen::Triplet<double>> entries;
	for (int j = 0; j < g.Lx; ++j)
		for (int k = 0; k < g.Ly; ++k)
			for (int jj = std::max(0, j - reach); jj <= std::min(g.Lx - 1, j + reach); ++jj)
				for (int kk = std::max(0, k - reach); kk <= std::min(g.Ly - 1, k + reach); ++kk) {
					double dx = (j - jj) * g.spacing, dy = (k - kk) * g.spacing;
					double d2 = dx * dx + dy * dy;
					if (d2 > out.cutoff_radius * out.cutoff_radius) continue;
					double v = mf.overlap(wm, d2);
					if (v < drop_threshold) continue;
					entries.emplace_back(g.site(j, k), g.site(jj, kk), v);
				}
	out.T.resize(n, n);
	out.T.setFromTriplets(entries.begin(), entries.end());
	out.T.makeCompressed();
	return out;
}

struct beam_array {
	int Lx = 0, Ly = 0;
	cvector weights; // omega'_xi e^{i phi'_xi}, index j*Ly + k

	double amplitude(int i) const { return std::abs(weights(i)); }
	double phase(int i) const { return wrap_phase(std::arg(weights(i))); }
};

struct synthesis_diagnostics {
	double condition_number = 0;
	double relative_residual = 0;
	double amplitude_spread = 0; // (max - min)/mean of |achieved|
	double max_phase_error = 0;  // rad, achieved vs target

	nlohmann::json to_json() const {
		return {{"condition_number", condition_number},
		        {"relative_residual", relative_residual},
		        {"amplitude_spread", amplitude_spread},
		        {"max_phase_error", max_phase_error}};
	}
};

/// 2-norm condition number via a dense SVD.
inline double condition_number(const overlap_matrix& om) {
	require(om.T.rows() <= 4096, errc::capacity, "condition number limited to 4096 sites");
	Eigen::MatrixXd d(om.T);
	Eigen::BDCSVD<Eigen::MatrixXd> svd(d);
	const auto& s = svd.singularValues();
	if (s.size() == 0) return 0;
	if (s(s.size() - 1) == 0) return std::numeric_limits<double>::infinity();
	return s(0) / s(s.size() - 1);
}

inline cvector forward_check(const overlap_matrix& om, const beam_array& beams) {
	require(beams.weights.size() == om.T.cols(), errc::dimension_mismatch, "beam array does not match T");
	return om.T.cast<cplx>() * beams.weights;
}

struct synthesis_result {
	beam_array beams;
	synthesis_diagnostics diagnostics;
};

/// Solves T x = target for the beam weights. Throws ill_conditioned when
/// cond(T) > max_condition and singular when the factorization breaks down.
inline synthesis_result solve_beams(const overlap_matrix& om, const cvector& target, double max_condition = 1e12) {
	require(om.T.rows() == om.T.cols(), errc::dimension_mismatch, "T must be square");
	require(target.size() == om.T.rows(), errc::dimension_mismatch, "target does not match T");
	synthesis_result out;
	out.diagnostics.condition_number = condition_number(om);
	require(std::isfinite(out.diagnostics.condition_number), errc::singular, "T is singular");
	if (out.diagnostics.condition_number > max_condition)
		fail(errc::ill_conditioned, "T condition number " + fmt12(out.diagnostics.condition_number) + " exceeds " +
		                                fmt12(max_condition) + "; reduce the waist or the target resolution");
	Eigen::SparseMatrix<double> Tc(om.T);
	Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
	lu.compute(Tc);
	require(lu.info() == Eigen::Success, errc::singular, "LU factorization of T failed");
	Eigen::MatrixXd rhs(target.size(), 2);
	rhs.col(0) = target.real();
	rhs.col(1) = target.imag();
	Eigen::MatrixXd x = lu.solve(rhs);
	// one step of iterative refinement
	Eigen::MatrixXd r = rhs - Tc * x;
	x += lu.solve(r);
	out.beams = {om.Lx, om.Ly, cvector(target.size())};
	out.beams.weights.real() = x.col(0);
	out.beams.weights.imag() = x.col(1);

	cvector achieved = forward_check(om, out.beams);
	double tn = target.norm();
	out.diagnostics.relative_residual = tn > 0 ? (achieved - target).norm() / tn : achieved.norm();
	double amin = std::numeric_limits<double>::infinity(), amax = 0, asum = 0;
	for (Eigen::Index i = 0; i < achieved.size(); ++i) {
		double a = std::abs(achieved(i));
		amin = std::min(amin, a);
		amax = std::max(amax, a);
		asum += a;
		if (std::abs(target(i)) > 0)
			out.diagnostics.max_phase_error =
			    std::max(out.diagnostics.max_phase_error, std::abs(std::arg(achieved(i) / target(i))));
	}
	double mean = achieved.size() ? asum / achieved.size() : 0;
	out.diagnostics.amplitude_spread = mean > 0 ? (amax - amin) / mean : 0;
	return out;
}

/// Complex target omega e^{i phi} for a phase pattern.
inline cvector target_field(const phase_pattern& p, double omega = 1.0) {
	cvector t(static_cast<Eigen::Index>(p.phi.size()));
	for (std::size_t i = 0; i < p.phi.size(); ++i) t(static_cast<Eigen::Index>(i)) = std::polar(omega, p.phi.values()[i]);
	return t;
}

/// Checkerboard phi_{j,k} = (-1)^{j+k} pi (mod 2pi): alternating 0 and pi.
inline phase_pattern checkerboard_pattern(const lattice_geometry& g) {
	grid<double> phi(g.Lx, g.Ly);
	for (int j = 0; j < g.Lx; ++j)
		for (int k = 0; k < g.Ly; ++k) phi(j, k) = ((j + k) % 2) ? std::numbers::pi : 0.0;
	return phase_pattern(std::move(phi));
}

/// Per-site phases realized by a field (arg of each entry).
inline phase_pattern achieved_pattern(const cvector& field, int Lx, int Ly) {
	grid<double> phi(Lx, Ly);
	for (int i = 0; i < field.size(); ++i) phi.values()[static_cast<std::size_t>(i)] = std::arg(field(i));
	return phase_pattern(std::move(phi));
}

/// CSV rows j,k,amplitude,phase.
inline void write_beam_csv(std::ostream& os, const beam_array& b) {
	os << "j,k,amplitude,phase\n";
	for (int j = 0; j < b.Lx; ++j)
		for (int k = 0; k < b.Ly; ++k) {
			int i = j * b.Ly + k;
			os << j << ',' << k << ',' << fmt12(b.amplitude(i)) << ',' << fmt12(b.phase(i)) << '\n';
		}
}

} // namespace gaugelatt
