#pragma once

#include <algorithm>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "error.hpp"

namespace gaugelatt {

using cplx = std::complex<double>;
using cmatrix = Eigen::MatrixXcd;
using cvector = Eigen::VectorXcd;
using rvector = Eigen::VectorXd;
using sparse_cmatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using triplet = Eigen::Triplet<cplx>;

/// Max over entries of |H_ij - conj(H_ji)|.
inline double max_hermitian_defect(const sparse_cmatrix& h) {
	sparse_cmatrix d = h - sparse_cmatrix(h.adjoint());
	double m = 0;
	for (int r = 0; r < d.outerSize(); ++r)
		for (sparse_cmatrix::InnerIterator it(d, r); it; ++it) m = std::max(m, std::abs(it.value()));
	return m;
}

inline double max_abs(const sparse_cmatrix& h) {
	double m = 0;
	for (int r = 0; r < h.outerSize(); ++r)
		for (sparse_cmatrix::InnerIterator it(h, r); it; ++it) m = std::max(m, std::abs(it.value()));
	return m;
}

/// Upper bound on the spectral radius from the largest absolute row sum.
inline double gershgorin_bound(const sparse_cmatrix& h) {
	double m = 0;
	for (int r = 0; r < h.outerSize(); ++r) {
		double s = 0;
		for (sparse_cmatrix::InnerIterator it(h, r); it; ++it) s += std::abs(it.value());
		m = std::max(m, s);
	}
	return m;
}

struct dense_eigensystem {
	rvector values; // ascending
	cmatrix vectors;
};

/// Full eigendecomposition of a Hermitian matrix (lower triangle is read).
inline dense_eigensystem hermitian_eigensystem(const cmatrix& h) {
	Eigen::SelfAdjointEigenSolver<cmatrix> es(h);
	require(es.info() == Eigen::Success, errc::not_converged, "dense Hermitian eigensolver failed");
	return {es.eigenvalues(), es.eigenvectors()};
}

inline std::vector<double> hermitian_eigenvalues(const cmatrix& h) {
	Eigen::SelfAdjointEigenSolver<cmatrix> es(h, Eigen::EigenvaluesOnly);
	require(es.info() == Eigen::Success, errc::not_converged, "dense Hermitian eigensolver failed");
	return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

/// Hausdorff distance between two sorted real spectra, compared entry by entry
/// after sorting (both lists must have the same length).
inline double sorted_distance(std::vector<double> a, std::vector<double> b) {
	require(a.size() == b.size(), errc::dimension_mismatch, "spectra have different lengths");
	std::sort(a.begin(), a.end());
	std::sort(b.begin(), b.end());
	double d = 0;
	for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
	return d;
}

/// Hausdorff distance between two point sets on the real line.
inline double hausdorff_distance(std::vector<double> a, std::vector<double> b) {
	require(!a.empty() && !b.empty(), errc::invalid_argument, "empty spectrum");
	std::sort(a.begin(), a.end());
	std::sort(b.begin(), b.end());
	auto one_sided = [](const std::vector<double>& from, const std::vector<double>& to) {
		double d = 0;
		for (double x : from) {
			auto it = std::lower_bound(to.begin(), to.end(), x);
			double best = std::numeric_limits<double>::infinity();
			if (it != to.end()) best = std::min(best, *it - x);
			if (it != to.begin()) best = std::min(best, x - *std::prev(it));
			d = std::max(d, best);
		}
		return d;
	};
	return std::max(one_sided(a, b), one_sided(b, a));
}

} // namespace gaugelatt
