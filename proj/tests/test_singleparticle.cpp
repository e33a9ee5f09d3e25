#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gaugelatt/hofstadter.hpp>
#include <gaugelatt/singleparticle.hpp>

using namespace gaugelatt;
using Catch::Matchers::WithinAbs;

namespace {

bool contains(const std::vector<double>& ev, double x, double tol) {
	return std::any_of(ev.begin(), ev.end(), [&](double e) { return std::abs(e - x) < tol; });
}

grid<double> random_offsets(int lx, int ly, std::uint64_t seed) {
	std::mt19937_64 rng(seed);
	std::uniform_real_distribution<double> u(-10, 10);
	grid<double> g(lx, ly);
	for (auto& v : g.values()) v = u(rng);
	return g;
}

int totient(int n) {
	int c = 0;
	for (int p = 1; p <= n; ++p) c += std::gcd(p, n) == 1;
	return c;
}

} // namespace

TEST_CASE("single site keeps only the Raman coupling") {
	auto g = lattice_geometry::open(1, 1);
	auto ev = spectrum(build_bilayer_hamiltonian(g, uniform_links({0, 1}, g), {1.0, 2.5}));
	REQUIRE(ev.size() == 2);
	CHECK_THAT(ev[0], WithinAbs(-2.5, 1e-14));
	CHECK_THAT(ev[1], WithinAbs(2.5, 1e-14));
}

TEST_CASE("zero field torus contains -2J +- omega") {
	auto g = lattice_geometry::torus(4, 4);
	auto ev = spectrum(build_bilayer_hamiltonian(g, uniform_links({0, 1}, g), {1.0, 3.0}));
	CHECK(contains(ev, -2.0 - 3.0, 1e-10));
	CHECK(contains(ev, -2.0 + 3.0, 1e-10));
}

TEST_CASE("mode layout and Hermiticity") {
	std::mt19937_64 rng(5);
	auto g = lattice_geometry::torus(6, 6, {1, 6});
	auto l = uniform_links({1, 6}, g);
	std::uniform_real_distribution<double> u(0, two_pi);
	for (auto& v : l.theta_x.values()) v = u(rng);
	for (double J2 : {0.0, 0.1}) {
		auto h = build_bilayer_hamiltonian(g, l, {1.0, 4.0, J2});
		CHECK(h.dim() == 72);
		CHECK(h.mode(species::b, 2, 3) == 36 + 15);
		CHECK(max_hermitian_defect(h.H) < 1e-14);
	}
	CHECK(max_hermitian_defect(build_target_hamiltonian(g, l, 0.5, 0.05).H) < 1e-14);
}

TEST_CASE("second-neighbour hops carry the summed link phases") {
	auto g = lattice_geometry::torus(8, 8, {1, 16});
	auto l = uniform_links({1, 16}, g);
	auto h = build_bilayer_hamiltonian(g, l, {1.0, 0.0, 0.1}).dense();
	int j = 3, k = 5;
	cplx expect = std::polar(-0.1, l.x(j, k) + l.x(j + 1, k));
	CHECK(std::abs(h(g.site(j + 2, k), g.site(j, k)) - expect) < 1e-15);
	// b layer across the y seam: (j, 7) -> (j, 1) picks up the twist once
	int n = g.sites();
	cplx seam = std::polar(-0.1, l.y(j, 6) + l.y(j, 7));
	CHECK(std::abs(h(n + g.site(j, 1), n + g.site(j, 7)) - std::polar(-0.1, l.y(j, 7) + l.y(j, 0))) < 1e-15);
	CHECK(std::abs(h(n + g.site(j, 0), n + g.site(j, 6)) - seam) < 1e-15);
}

TEST_CASE("target model on a flux-free torus has the cosine band") {
	auto g = lattice_geometry::torus(6, 4);
	double J0 = 0.5;
	auto ev = spectrum(build_target_hamiltonian(g, uniform_links({0, 1}, g), J0));
	std::vector<double> analytic;
	for (int a = 0; a < 6; ++a)
		for (int b = 0; b < 4; ++b) analytic.push_back(-2 * J0 * (std::cos(two_pi * a / 6) + std::cos(two_pi * b / 4)));
	CHECK(sorted_distance(ev, analytic) < 1e-12);
}

TEST_CASE("target model at half flux is symmetric with edges 2 sqrt2 J0") {
	auto g = lattice_geometry::torus(4, 4, {1, 2});
	double J0 = 0.5;
	auto ev = spectrum(build_target_hamiltonian(g, uniform_links({1, 2}, g), J0));
	CHECK_THAT(ev.front(), WithinAbs(-2 * std::sqrt(2.0) * J0, 1e-12));
	CHECK_THAT(ev.back(), WithinAbs(2 * std::sqrt(2.0) * J0, 1e-12));
	std::vector<double> neg(ev.rbegin(), ev.rend());
	for (auto& v : neg) v = -v;
	CHECK(sorted_distance(ev, neg) < 1e-12);
}

TEST_CASE("gauge covariance: unitary site-phase conjugation") {
	auto g = lattice_geometry::torus(8, 8, {1, 16});
	auto l = uniform_links({1, 16}, g);
	auto delta = random_offsets(8, 8, 17);
	auto lt = gauge_transform(l, g, delta);
	SECTION("target model: H' = D H D+") {
		cmatrix h = build_target_hamiltonian(g, l, 0.5, 0.05).dense();
		cmatrix ht = build_target_hamiltonian(g, lt, 0.5, 0.05).dense();
		cvector d(64);
		for (int s = 0; s < 64; ++s) d(s) = std::polar(1.0, delta.values()[static_cast<std::size_t>(s)]);
		cmatrix D = d.asDiagonal();
		CHECK((D * h * D.adjoint() - ht).cwiseAbs().maxCoeff() < 1e-12);
	}
	SECTION("bilayer spectra agree") {
		for (double J2 : {0.0, 0.1}) {
			model_params p{1.0, 10.0, J2};
			CHECK(sorted_distance(spectrum(build_bilayer_hamiltonian(g, l, p)),
			                      spectrum(build_bilayer_hamiltonian(g, lt, p))) < 1e-10);
		}
	}
}

TEST_CASE("c/d decomposition") {
	auto g = lattice_geometry::torus(8, 8, {1, 16});
	auto l = uniform_links({1, 16}, g);
	model_params p{1.0, 10.0};
	auto hs = build_bilayer_hamiltonian(g, l, p);
	auto cd = cd_decompose(hs);
	int n = g.sites();
	cmatrix U(cd.rotation);
	CHECK((U.adjoint() * U - cmatrix::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() < 1e-15);
	cmatrix lhs = U.adjoint() * hs.dense() * U;
	CHECK((lhs - cmatrix(cd.H0) - cmatrix(cd.H1)).cwiseAbs().maxCoeff() < 1e-13);
	cmatrix h1(cd.H1);
	CHECK(h1.topLeftCorner(n, n).cwiseAbs().maxCoeff() == 0.0);
	CHECK(h1.bottomRightCorner(n, n).cwiseAbs().maxCoeff() == 0.0);
	cmatrix h0(cd.H0);
	CHECK(h0.topRightCorner(n, n).cwiseAbs().maxCoeff() == 0.0);

	auto c_ev = hermitian_eigenvalues(cd.c_block());
	auto target = spectrum(build_target_hamiltonian(g, l, 0.5));
	for (auto& v : target) v -= p.omega;
	CHECK(sorted_distance(c_ev, target) < 1e-10);
}

TEST_CASE("lower band approaches the shifted target spectrum as omega grows") {
	auto g = lattice_geometry::torus(8, 8, {1, 16});
	auto l = uniform_links({1, 16}, g);
	double prev = 1e9;
	for (double w : {10.0, 20.0, 40.0}) {
		auto hs = build_bilayer_hamiltonian(g, l, {1.0, w});
		auto full = spectrum(hs);
		std::vector<double> lower(full.begin(), full.begin() + g.sites());
		auto c_ev = hermitian_eigenvalues(cd_decompose(hs).c_block());
		double d = hausdorff_distance(lower, c_ev);
		CHECK(d < 4.0 / w); // O(J^2/omega) with J = 1
		CHECK(d < prev);
		prev = d;
	}
}

TEST_CASE("dense eigensolver residual contract") {
	auto g = lattice_geometry::torus(8, 8, {1, 16});
	auto h = build_bilayer_hamiltonian(g, uniform_links({1, 16}, g), {1.0, 10.0, 0.1}).dense();
	auto es = hermitian_eigensystem(h);
	double norm = std::max(std::abs(es.values(0)), std::abs(es.values(es.values.size() - 1)));
	for (Eigen::Index i = 0; i < es.values.size(); ++i)
		CHECK((h * es.vectors.col(i) - es.values(i) * es.vectors.col(i)).norm() <= 1e-10 * norm);
}

TEST_CASE("magnetic Bloch blocks") {
	SECTION("zero flux, k = 0") {
		auto r = bloch_block_spectrum(0, 1, {1.0, 3.0}, {0.0}, {0.0});
		REQUIRE(r.eigenvalues.size() == 2);
		CHECK_THAT(r.eigenvalues[0], WithinAbs(-5.0, 1e-14));
		CHECK_THAT(r.eigenvalues[1], WithinAbs(1.0, 1e-14));
	}
	SECTION("invalid flux") {
		CHECK_THROWS_AS(bloch_block_spectrum(2, 4, {}, {0.0}, {0.0}), error);
		CHECK_THROWS_AS(bloch_block_spectrum(1, 0, {}, {0.0}, {0.0}), error);
	}
	SECTION("blocks are Hermitian") {
		auto h = bloch_block({3, 7}, {1.0, 2.0, 0.1}, 0.3, 1.1);
		CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
	}
	SECTION("half flux without Raman coupling matches dense finite lattices") {
		// decoupled layers: both sectors span [-2J, 2J], inside +-2 sqrt2 J
		std::vector<double> kx, K;
		for (int n = 0; n < 8; ++n) {
			kx.push_back(two_pi * n / 8);
			K.push_back(two_pi * n / 4);
		}
		auto r = bloch_block_spectrum(1, 2, {1.0, 0.0}, kx, {0.0, two_pi / 4, two_pi / 2, 3 * two_pi / 4});
		auto g = lattice_geometry::torus(8, 8, {1, 2});
		auto dense = spectrum(build_bilayer_hamiltonian(g, uniform_links({1, 2}, g), {1.0, 0.0}));
		CHECK(hausdorff_distance(r.eigenvalues, dense) < 1e-10);
		CHECK(r.eigenvalues.front() >= -2 * std::sqrt(2.0) - 1e-12);
		CHECK(r.eigenvalues.back() <= 2 * std::sqrt(2.0) + 1e-12);
		CHECK_THAT(r.eigenvalues.front(), WithinAbs(-2.0, 1e-12));
		CHECK_THAT(r.eigenvalues.back(), WithinAbs(2.0, 1e-12));
	}
	SECTION("commensurate grids reproduce finite-lattice spectra") {
		struct c { int lx, ly; rational a; double J2; };
		for (auto [lx, ly, a, J2] : {c{4, 8, {1, 4}, 0.0}, c{8, 8, {1, 8}, 0.0}, c{4, 16, {1, 16}, 0.0},
		                             c{6, 6, {1, 3}, 0.1}, c{8, 8, {3, 8}, 0.1}}) {
			auto g = lattice_geometry::torus(lx, ly, a);
			model_params p{1.0, 2.0, J2};
			auto kg = commensurate_k_grid(a, g);
			auto bloch = bloch_block_spectrum(a, p, kg.kx, kg.K);
			auto fin = finite_lattice_spectrum(a, p, g);
			CHECK(bloch.eigenvalues.size() == fin.eigenvalues.size());
			CHECK(sorted_distance(bloch.eigenvalues, fin.eigenvalues) < 1e-10);
		}
	}
	SECTION("reduced zone covers the full zone") {
		rational a{1, 3};
		model_params p{1.0, 1.5};
		auto red = reduced_zone_grid(a, 4);
		auto r1 = bloch_block_spectrum(a, p, red.kx, red.K);
		std::vector<double> full_kx;
		for (int n = 0; n < 12; ++n) full_kx.push_back(two_pi * n / 12);
		auto r2 = bloch_block_spectrum(a, p, full_kx, red.K);
		// every full-zone value already appears in the reduced-zone sample
		CHECK(hausdorff_distance(r1.eigenvalues, r2.eigenvalues) < 1e-12);
	}
	SECTION("zero Raman coupling at alpha = 1/3 is symmetric under E -> -E") {
		auto kg = reduced_zone_grid({1, 3}, 8);
		auto r = bloch_block_spectrum(1, 3, {1.0, 0.0}, kg.kx, kg.K);
		std::vector<double> neg(r.eigenvalues.rbegin(), r.eigenvalues.rend());
		for (auto& v : neg) v = -v;
		CHECK(hausdorff_distance(r.eigenvalues, neg) < 1e-12);
	}
}

TEST_CASE("Farey flux set") {
	auto f3 = farey_fluxes(3);
	REQUIRE(f3.size() == 3);
	CHECK(f3[0] == rational(0, 1));
	CHECK(f3[1] == rational(1, 2));
	CHECK(f3[2] == rational(1, 1));
	for (int qmax : {5, 10, 20}) {
		int expect = 2;
		for (int q = 2; q < qmax; ++q) expect += totient(q);
		CHECK(farey_fluxes(qmax).size() == static_cast<std::size_t>(expect));
	}
	CHECK_THROWS_AS(farey_fluxes(1), error);
}

TEST_CASE("butterfly bands") {
	SECTION("omega = 10J keeps both bands inside [8J, 12J] in magnitude") {
		for (const auto& s : butterfly_scan(12, {1.0, 10.0}, 6))
			for (double e : s.eigenvalues) {
				double a = std::abs(e);
				CHECK(a >= 8.0 - 1e-9);
				CHECK(a <= 12.0 + 1e-9);
			}
	}
	SECTION("omega = 3J separates the bands at every flux") {
		for (const auto& s : butterfly_scan(12, {1.0, 3.0}, 6)) CHECK(s.band_gap() > 0);
	}
	SECTION("threaded and serial scans agree exactly") {
		auto a = butterfly_scan(8, {1.0, 2.0}, 4, 1);
		auto b = butterfly_scan(8, {1.0, 2.0}, 4, 3);
		REQUIRE(a.size() == b.size());
		for (std::size_t i = 0; i < a.size(); ++i) {
			CHECK(a[i].alpha == b[i].alpha);
			CHECK(a[i].eigenvalues == b[i].eigenvalues);
		}
	}
}
