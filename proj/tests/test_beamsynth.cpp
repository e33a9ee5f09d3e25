#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include <gaugelatt/beamsynth.hpp>
#include <gaugelatt/lattice.hpp>

using namespace gaugelatt;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using std::numbers::pi;

namespace {

/// Width sqrt(2<x^2>) of the lowest-band Wannier function of V0 sin^2(pi x / r0),
/// from a plane-wave Bloch expansion (lengths in r0, energies in E_r).
double numerical_wannier_width(double V0) {
	const int M = 12, Nq = 64;
	const int dim = 2 * M + 1;
	// units of 1/k with k = pi/r0: H = -d^2 + V0 sin^2 x, period pi
	std::vector<Eigen::VectorXd> c(Nq);
	std::vector<double> qs(Nq);
	for (int iq = 0; iq < Nq; ++iq) {
		double q = -1.0 + 2.0 * (iq + 0.5) / Nq;
		qs[iq] = q;
		Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
		for (int m = -M; m <= M; ++m) {
			int i = m + M;
			H(i, i) = (q + 2 * m) * (q + 2 * m) + V0 / 2;
			if (i + 1 < dim) H(i, i + 1) = H(i + 1, i) = -V0 / 4;
		}
		Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
		Eigen::VectorXd v = es.eigenvectors().col(0);
		if (v.sum() < 0) v = -v; // Bloch function real and positive at the well centre
		c[iq] = v;
	}
	double L = 6 * pi, h = 0.002;
	double norm = 0, x2 = 0;
	for (double x = -L; x <= L; x += h) {
		std::complex<double> w = 0;
		for (int iq = 0; iq < Nq; ++iq)
			for (int m = -M; m <= M; ++m) w += c[iq](m + M) * std::polar(1.0, (qs[iq] + 2 * m) * x);
		double p = std::norm(w);
		norm += p;
		x2 += p * x * x;
	}
	double xr = std::sqrt(x2 / norm) / pi; // back to units of r0
	return std::sqrt(2.0) * xr;
}

wannier_model default_model() { return wannier_model::from_depths(5, 25); }

/// T entry by a Cartesian trapezoid sum of A(r - d) W_a(r) W_b(r).
double quadrature_overlap(const wannier_model& wm, const mode_function& mf, double dx, double dy) {
	double h = 0.005, R = 1.5;
	double s = 0;
	for (double x = -R; x <= R; x += h)
		for (double y = -R; y <= R; y += h) {
			double r2 = x * x + y * y;
			double a2 = (x - dx) * (x - dx) + (y - dy) * (y - dy);
			s += mf(a2) * wm.product(r2);
		}
	return s * h * h;
}

cvector random_target(Eigen::Index n, std::mt19937_64& rng) {
	std::normal_distribution<double> nd;
	cvector t(n);
	for (auto& v : t) v = {nd(rng), nd(rng)};
	return t;
}

double circ(double a, double b) { return circular_distance(a, b); }

} // namespace

TEST_CASE("Wannier width") {
	CHECK_THAT(wannier_width(1, 1.0), WithinAbs(1 / pi, 1e-16));
	CHECK_THAT(wannier_width(16) / wannier_width(1), WithinAbs(0.5, 1e-15));
	CHECK(wannier_width(1e12) < 1e-3);
	CHECK_THAT(wannier_width(4, 2.0), WithinAbs(2 * wannier_width(4, 1.0), 1e-16));
	CHECK_THROWS_AS(wannier_width(0), error);
	CHECK_THROWS_AS(wannier_width(-2), error);
	SECTION("harmonic width against the numerical band Wannier function") {
		// The harmonic estimate is 43% narrow at V0 = E_r; from 5 E_r up it is within 20%.
		for (double V0 : {5.0, 10.0, 25.0}) {
			double num = numerical_wannier_width(V0);
			CHECK(std::abs(wannier_width(V0) / num - 1) < 0.2);
		}
		double prev = 1;
		for (double V0 : {5.0, 10.0, 25.0}) {
			double err = std::abs(wannier_width(V0) / numerical_wannier_width(V0) - 1);
			CHECK(err < prev);
			prev = err;
		}
	}
	CHECK_THROWS_AS(wannier_model({1.2, 0.1}).validate(), error);
}

TEST_CASE("overlap matrix entries") {
	auto wm = default_model();
	SECTION("single site matches quadrature") {
		for (double w : {0.3, 0.5, 0.8}) {
			mode_function mf{w};
			auto om = build_overlap_matrix(lattice_geometry::open(1, 1), wm, mf);
			REQUIRE(om.T.rows() == 1);
			CHECK_THAT(om.T.coeff(0, 0), WithinRel(quadrature_overlap(wm, mf, 0, 0), 1e-12));
		}
	}
	SECTION("displaced centres match quadrature") {
		mode_function mf{0.5};
		for (auto [dx, dy] : {std::pair{1.0, 0.0}, {1.0, 1.0}, {2.0, 1.0}})
			CHECK_THAT(mf.overlap(wm, dx * dx + dy * dy), WithinRel(quadrature_overlap(wm, mf, dx, dy), 1e-12));
	}
	SECTION("mode function has unit norm") {
		mode_function mf{0.37};
		double h = 0.004, s = 0;
		for (double x = -3; x <= 3; x += h)
			for (double y = -3; y <= 3; y += h) s += std::pow(mf(x * x + y * y), 2);
		CHECK_THAT(s * h * h, WithinAbs(1.0, 1e-12));
	}
	SECTION("narrow beam samples the Wannier product") {
		double sigma = std::min(wm.sigma_a, wm.sigma_b);
		mode_function mf{sigma / 20};
		double area = std::sqrt(2 * pi) * mf.waist; // integral of A
		for (double d : {0.0, 0.5 * sigma, sigma, 2 * sigma})
			CHECK_THAT(mf.overlap(wm, d * d) / area, WithinRel(wm.product(d * d), 0.01));
	}
	SECTION("translation symmetry and locality") {
		auto g = lattice_geometry::open(7, 6);
		auto om = build_overlap_matrix(g, wm, mode_function{0.5});
		Eigen::MatrixXd T(om.T);
		for (int j = 0; j + 1 < 7; ++j)
			for (int k = 0; k + 1 < 6; ++k)
				for (int jj = 0; jj + 1 < 7; ++jj)
					for (int kk = 0; kk + 1 < 6; ++kk)
						CHECK(T(g.site(j + 1, k + 1), g.site(jj + 1, kk + 1)) == T(g.site(j, k), g.site(jj, kk)));
		CHECK((T - T.transpose()).cwiseAbs().maxCoeff() == 0.0);
		CHECK(T.minCoeff() >= 0.0);
		for (int i = 0; i < om.T.outerSize(); ++i)
			for (sparse_rmatrix::InnerIterator it(om.T, i); it; ++it) CHECK(it.value() >= 1e-14);
	}
}

TEST_CASE("beam solve") {
	auto wm = default_model();
	std::mt19937_64 rng(17);
	SECTION("decoupled limit") {
		auto g = lattice_geometry::open(5, 5);
		auto om = build_overlap_matrix(g, {0.1, 0.08}, mode_function{0.01});
		CHECK(om.T.nonZeros() == 25);
		cvector t = random_target(25, rng);
		auto res = solve_beams(om, t);
		for (int i = 0; i < 25; ++i) CHECK(std::abs(res.beams.weights(i) - t(i) / om.T.coeff(i, i)) < 1e-14 * std::abs(t(i) / om.T.coeff(i, i)));
	}
	SECTION("uniform target gives a uniform interior solution") {
		auto g = lattice_geometry::open(16, 16);
		auto om = build_overlap_matrix(g, wm, mode_function{0.3});
		auto res = solve_beams(om, cvector::Ones(256));
		cplx centre = res.beams.weights(g.site(8, 8));
		for (int j = 5; j < 11; ++j)
			for (int k = 5; k < 11; ++k) CHECK(std::abs(res.beams.weights(g.site(j, k)) - centre) < 1e-6 * std::abs(centre));
	}
	SECTION("checkerboard round trip at w = 0.5") {
		auto g = lattice_geometry::open(16, 16);
		auto om = build_overlap_matrix(g, wm, mode_function{0.5});
		auto p = checkerboard_pattern(g);
		cvector t = target_field(p);
		auto res = solve_beams(om, t);
		CHECK(res.diagnostics.relative_residual <= 1e-10);
		CHECK(res.diagnostics.max_phase_error < 1e-8);
		auto back = achieved_pattern(forward_check(om, res.beams), 16, 16);
		for (std::size_t i = 0; i < p.phi.size(); ++i) CHECK(circ(back.phi.values()[i] / two_pi, p.phi.values()[i] / two_pi) * two_pi < 1e-8);
		CHECK(res.diagnostics.condition_number > 1);
		for (int i = 0; i < 256; ++i) CHECK(res.beams.amplitude(i) >= 0);
	}
	SECTION("zero beams give zero field") {
		auto om = build_overlap_matrix(lattice_geometry::open(4, 4), wm, mode_function{0.5});
		beam_array b{4, 4, cvector::Zero(16)};
		CHECK(forward_check(om, b).norm() == 0.0);
		CHECK_THROWS_AS(forward_check(om, beam_array{3, 3, cvector::Zero(9)}), error);
	}
	SECTION("random beams against brute-force field integrals on a 4x4 patch") {
		auto g = lattice_geometry::open(4, 4);
		mode_function mf{0.5};
		auto om = build_overlap_matrix(g, wm, mf);
		beam_array b{4, 4, random_target(16, rng)};
		cvector achieved = forward_check(om, b);
		double h = 0.01, R = 1.2;
		for (int j = 0; j < 4; ++j)
			for (int k = 0; k < 4; ++k) {
				cplx s = 0;
				for (double x = -R; x <= R; x += h)
					for (double y = -R; y <= R; y += h) {
						cplx field = 0;
						for (int jj = 0; jj < 4; ++jj)
							for (int kk = 0; kk < 4; ++kk) {
								double ax = x + j - jj, ay = y + k - kk;
								field += b.weights(g.site(jj, kk)) * mf(ax * ax + ay * ay);
							}
						s += field * wm.product(x * x + y * y);
					}
				s *= h * h;
				CHECK(std::abs(achieved(g.site(j, k)) - s) < 1e-10 * std::abs(s));
			}
	}
	SECTION("condition number guard") {
		auto om = build_overlap_matrix(lattice_geometry::open(6, 6), wm, mode_function{0.8});
		try {
			solve_beams(om, cvector::Ones(36), 1.5);
			FAIL("expected ill_conditioned");
		} catch (const error& e) {
			CHECK(e.code() == errc::ill_conditioned);
		}
		CHECK_THROWS_AS(solve_beams(om, cvector::Ones(35)), error);
	}
}

TEST_CASE("beam synthesis properties") {
	auto wm = default_model();
	std::mt19937_64 rng(99);
	SECTION("round trip up to 16x16") {
		for (int L : {4, 9, 16})
			for (double w : {0.3, 0.5, 0.8}) {
				auto om = build_overlap_matrix(lattice_geometry::open(L, L), wm, mode_function{w});
				cvector t = random_target(L * L, rng);
				auto res = solve_beams(om, t);
				CHECK((forward_check(om, res.beams) - t).norm() / t.norm() <= 1e-10);
			}
	}
	SECTION("condition number grows with the waist") {
		double prev = 0;
		for (double w = 0.2; w <= 1.01; w += 0.1) {
			double c = condition_number(build_overlap_matrix(lattice_geometry::open(8, 8), wm, mode_function{w}));
			CHECK(c >= prev);
			prev = c;
		}
	}
	SECTION("entries beyond 3 r0 do not matter") {
		auto g = lattice_geometry::open(16, 16);
		for (double w : {0.3, 0.5}) {
			auto full = build_overlap_matrix(g, wm, mode_function{w}, 0, 0);
			auto cut = build_overlap_matrix(g, wm, mode_function{w}, 3.0);
			cvector t = random_target(256, rng);
			cvector a = solve_beams(full, t).beams.weights, b = solve_beams(cut, t).beams.weights;
			CHECK((a - b).norm() / a.norm() < 1e-6);
		}
	}
	SECTION("synthesized uniform pattern carries flux alpha") {
		rational alpha{1, 16};
		auto g = lattice_geometry::open(16, 16);
		auto om = build_overlap_matrix(g, wm, mode_function{0.5});
		auto res = solve_beams(om, target_field(uniform_phase_pattern(alpha, g)));
		auto realized = achieved_pattern(forward_check(om, res.beams), 16, 16);
		auto b = field_strength(plaquette_flux(links_from_phases(realized, g), g));
		for (int j = 0; j + 1 < 16; ++j)
			for (int k = 0; k + 1 < 16; ++k) CHECK(circ(b(j, k), alpha.value()) < 1e-9);
	}
}
