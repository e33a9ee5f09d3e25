#pragma once

// Lowest eigenpairs of a large Hermitian operator by block Lanczos with thick
// restarts and full (two-pass Gram-Schmidt) reorthogonalization.
//
// Expanding the basis with the residuals of the current lowest Ritz vectors
// spans the next block Krylov space, so the iteration is block Lanczos; keeping
// Ritz vectors at restart makes the projected matrix diagonal again. The block
// size is at least the number of wanted pairs, which is required to resolve
// exactly degenerate eigenspaces.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <vector>

#include "linalg.hpp"

namespace gaugelatt {

struct krylov_options {
	int block = 0;          // 0 selects max(count, 2)
	int max_basis = 0;      // 0 selects max(10 * block, 60)
	double tolerance = 1e-9; // residual bound relative to ||H||
	int max_iterations = 20000;
	std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};

struct krylov_result {
	rvector values;
	cmatrix vectors;
	std::vector<double> residuals;
	double norm_estimate = 0;
	int iterations = 0;
	int applications = 0;
};

namespace detail {

inline cmatrix random_block(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
	std::normal_distribution<double> n(0.0, 1.0);
	cmatrix b(rows, cols);
	for (Eigen::Index c = 0; c < cols; ++c)
		for (Eigen::Index r = 0; r < rows; ++r) b(r, c) = cplx(n(rng), n(rng));
	return b;
}

/// Orthonormalizes the columns of `block` against the first `used` columns of
/// `basis` and among themselves; columns that collapse are dropped.
inline cmatrix orthonormalize_against(const cmatrix& basis, Eigen::Index used, cmatrix block) {
	std::vector<cvector> kept;
	for (Eigen::Index c = 0; c < block.cols(); ++c) {
		cvector v = block.col(c);
		double start = v.norm();
		if (start == 0) continue;
		for (int pass = 0; pass < 2; ++pass) {
			if (used > 0) v -= basis.leftCols(used) * (basis.leftCols(used).adjoint() * v);
			for (const auto& k : kept) v -= k * k.dot(v);
		}
		double n = v.norm();
		if (n <= 1e-10 * start) continue;
		kept.push_back(v / n);
	}
	cmatrix out(block.rows(), static_cast<Eigen::Index>(kept.size()));
	for (std::size_t i = 0; i < kept.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = kept[i];
	return out;
}

} // namespace detail

/// `apply(in, out)` must set out = H * in for a block of column vectors.
/// The residual tolerance is relative to `norm_hint` when given, otherwise to
/// the largest Ritz value magnitude seen (a lower bound on ||H||).
template <class Apply>
krylov_result lowest_eigenpairs(Apply&& apply, Eigen::Index dim, int count, krylov_options opt = {},
                                double norm_hint = 0) {
	require(count >= 1, errc::invalid_argument, "eigenpair count must be positive");
	require(dim >= count, errc::invalid_argument, "more eigenpairs requested than the dimension");
	krylov_result res;

	int block = opt.block > 0 ? std::max(opt.block, count) : std::max(count, 2);
	Eigen::Index max_basis = opt.max_basis > 0 ? opt.max_basis : std::max(10 * block, 60);
	max_basis = std::max<Eigen::Index>(max_basis, 2 * block + count);

	if (dim <= max_basis) {
		// The whole space fits in the basis: project exactly.
		cmatrix id = cmatrix::Identity(dim, dim);
		cmatrix h(dim, dim);
		apply(id, h);
		res.applications = static_cast<int>(dim);
		cmatrix hs = 0.5 * (h + h.adjoint());
		auto es = hermitian_eigensystem(hs);
		res.values = es.values.head(count);
		res.vectors = es.vectors.leftCols(count);
		res.norm_estimate = std::max(std::abs(es.values(0)), std::abs(es.values(dim - 1)));
		for (int i = 0; i < count; ++i)
			res.residuals.push_back((h * res.vectors.col(i) - res.values(i) * res.vectors.col(i)).norm());
		return res;
	}

	std::mt19937_64 rng(opt.seed);
	cmatrix V(dim, max_basis);
	cmatrix W(dim, max_basis);
	cmatrix T = cmatrix::Zero(max_basis, max_basis);
	Eigen::Index used = 0;
	double hnorm = norm_hint;

	auto append = [&](cmatrix fresh) {
		fresh = detail::orthonormalize_against(V, used, std::move(fresh));
		if (fresh.cols() == 0) fresh = detail::orthonormalize_against(V, used, detail::random_block(dim, block, rng));
		Eigen::Index n = std::min<Eigen::Index>(fresh.cols(), max_basis - used);
		if (n <= 0) return;
		cmatrix hw(dim, n);
		apply(fresh.leftCols(n), hw);
		res.applications += static_cast<int>(n);
		V.middleCols(used, n) = fresh.leftCols(n);
		W.middleCols(used, n) = hw;
		cmatrix overlap = V.leftCols(used + n).adjoint() * hw; // (used+n) x n
		T.block(0, used, used + n, n) = overlap;
		T.block(used, 0, n, used + n) = overlap.adjoint();
		used += n;
	};

	append(detail::random_block(dim, block, rng));

	for (int it = 0;; ++it) {
		cmatrix ts = T.topLeftCorner(used, used);
		ts = 0.5 * (ts + ts.adjoint());
		auto es = hermitian_eigensystem(ts);
		if (norm_hint <= 0) hnorm = std::max({hnorm, std::abs(es.values(0)), std::abs(es.values(used - 1))});

		Eigen::Index nb = std::min<Eigen::Index>(block, used);
		cmatrix Y = es.vectors.leftCols(nb);
		cmatrix X = V.leftCols(used) * Y;
		cmatrix R = W.leftCols(used) * Y - X * es.values.head(nb).asDiagonal();

		bool converged = true;
		std::vector<double> rn(static_cast<std::size_t>(count));
		for (int i = 0; i < count; ++i) {
			rn[i] = R.col(i).norm();
			if (rn[i] > opt.tolerance * hnorm) converged = false;
		}
		res.iterations = it;
		if (converged) {
			res.values = es.values.head(count);
			res.vectors = X.leftCols(count);
			res.residuals = rn;
			res.norm_estimate = hnorm;
			return res;
		}
		if (it >= opt.max_iterations) {
			std::ostringstream msg;
			msg << "Krylov eigensolver did not converge after " << it << " iterations; residuals:";
			for (double r : rn) msg << ' ' << r;
			msg << " (tolerance " << opt.tolerance * hnorm << ")";
			fail(errc::not_converged, msg.str());
		}

		if (used + nb > max_basis) {
			Eigen::Index keep = std::min<Eigen::Index>(used, std::max<Eigen::Index>(count + block, max_basis / 2));
			cmatrix Yk = es.vectors.leftCols(keep);
			cmatrix Vk = V.leftCols(used) * Yk;
			cmatrix Wk = W.leftCols(used) * Yk;
			V.leftCols(keep) = Vk;
			W.leftCols(keep) = Wk;
			T.setZero();
			T.topLeftCorner(keep, keep) = es.values.head(keep).cast<cplx>().asDiagonal();
			used = keep;
		}
		append(R);
	}
}

/// Convenience overload for an assembled sparse Hermitian matrix.
inline krylov_result lowest_eigenpairs(const sparse_cmatrix& h, int count, krylov_options opt = {}) {
	require(h.rows() == h.cols(), errc::dimension_mismatch, "eigensolver needs a square matrix");
	auto apply = [&h](const auto& in, cmatrix& out) { out = h * in; };
	return lowest_eigenpairs(apply, h.rows(), count, opt);
}

} // namespace gaugelatt
