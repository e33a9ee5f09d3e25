#pragma once

// Interacting ground states on the magnetic torus and their diagnostics.

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "laughlin.hpp"
#include "manybody.hpp"
#include "motional.hpp"

namespace gaugelatt {

struct ground_config {
	int Lx = 8;
	int Ly = 8;
	int particles = 2;
	rational alpha{1, 16};
	model_params params{1.0, 10.0, 0.0, 10.0};
	int max_occupancy = -1; // -1: no cap
	int states = 3;         // lowest states computed; the first two form the ground pair
	bool laughlin = true;
	bool oracle = true;
	krylov_options solver{};

	void validate() const {
		lattice_geometry::torus(Lx, Ly, alpha);
		params.validate();
		require(particles >= 1, errc::invalid_argument, "need at least one particle");
		require(states >= 1, errc::invalid_argument, "need at least one state");
	}
};

struct ground_report {
	int dim = 0;
	std::vector<double> energies;
	std::vector<double> residuals;
	std::vector<double> purities;
	std::vector<double> c_numbers;
	double c_number = 0; // averaged over the ground pair
	std::optional<rational> filling;
	std::vector<double> laughlin_overlaps; // per state, Tr(P_L rho_mu P_L)
	std::optional<double> laughlin_overlap_pair;
	std::vector<double> oracle_overlaps; // per state, onto the hardcore target-model ground pair
	std::optional<double> oracle_overlap_pair;
	double splitting = 0; // E1 - E0
	std::optional<double> gap; // E2 - E1
	bool gauge_matched = true;
	std::vector<std::string> diagnostics;
	double seconds = 0;

	nlohmann::json to_json() const {
		nlohmann::json j;
		j["dim"] = dim;
		j["energies"] = energies;
		j["residuals"] = residuals;
		j["purities"] = purities;
		j["c_numbers"] = c_numbers;
		j["c_number"] = c_number;
		j["filling_factor"] = filling ? nlohmann::json(filling->str()) : nlohmann::json(nullptr);
		j["laughlin_overlaps"] = laughlin_overlaps;
		j["laughlin_overlap"] = laughlin_overlap_pair ? nlohmann::json(*laughlin_overlap_pair) : nlohmann::json(nullptr);
		j["oracle_overlaps"] = oracle_overlaps;
		j["oracle_overlap"] = oracle_overlap_pair ? nlohmann::json(*oracle_overlap_pair) : nlohmann::json(nullptr);
		j["splitting"] = splitting;
		j["gap"] = gap ? nlohmann::json(*gap) : nlohmann::json(nullptr);
		j["gauge_matched"] = gauge_matched;
		j["diagnostics"] = diagnostics;
		return j;
	}
};

/// Everything a ground run produces, including the vectors for export.
struct ground_run {
	ground_report report;
	std::vector<many_body_state> states;
	std::vector<motional_density_matrix> rhos;
	std::optional<laughlin_subspace> laughlin;
};

/// Ground pair of the hardcore single-species target model (hopping J/2 on the
/// same links), as orthonormal first-quantized vectors.
inline cmatrix hardcore_oracle_subspace(const lattice_geometry& g, const link_field& l, const model_params& p, int N,
                                        krylov_options opt = {}) {
	fock_basis basis(g.sites(), N, 1);
	auto H = build_target_manybody(g, l, 0.5 * p.J, 0.5 * p.J2, 0.0, basis);
	int count = std::min<int>(2, static_cast<int>(basis.size()));
	std::vector<many_body_state> st;
	if (basis.size() <= 600) {
		auto es = hermitian_eigensystem(cmatrix(H));
		for (int i = 0; i < count; ++i) st.push_back({es.vectors.col(i), es.values(i), 0});
	} else {
		st = lowest_eigenstates(H, count, opt);
	}
	std::vector<cvector> fq;
	for (const auto& s : st) fq.push_back(first_quantized(s.amplitudes, basis));
	return orthonormal_columns(fq);
}

inline ground_run run_ground(const ground_config& cfg) {
	auto t0 = std::chrono::steady_clock::now();
	cfg.validate();
	ground_run run;
	auto& rep = run.report;
	auto g = lattice_geometry::torus(cfg.Lx, cfg.Ly, cfg.alpha);
	auto links = uniform_links(cfg.alpha, g);
	int S = g.sites();
	fock_basis basis(2 * S, cfg.particles, cfg.max_occupancy);
	rep.dim = static_cast<int>(basis.size());
	auto H = build_manybody_hamiltonian(g, links, cfg.params, basis);
	int count = std::min<int>(cfg.states, rep.dim);
	if (rep.dim <= 400) {
		auto es = hermitian_eigensystem(cmatrix(H));
		for (int i = 0; i < count; ++i) {
			cvector v = es.vectors.col(i);
			double res = (H * v - es.values(i) * v).norm();
			run.states.push_back({v, es.values(i), res});
		}
	} else {
		run.states = lowest_eigenstates(H, count, cfg.solver);
	}
	for (const auto& s : run.states) {
		rep.energies.push_back(s.energy);
		rep.residuals.push_back(s.residual);
		rep.c_numbers.push_back(c_mode_number(s, basis, S));
		run.rhos.push_back(motional_density(s, basis, S));
		rep.purities.push_back(run.rhos.back().purity());
	}
	int pair = std::min(2, count);
	for (int i = 0; i < pair; ++i) rep.c_number += rep.c_numbers[i] / pair;
	if (count >= 2) rep.splitting = rep.energies[1] - rep.energies[0];
	if (count >= 3) rep.gap = rep.energies[2] - rep.energies[1];
	if (g.flux_quanta() != 0) rep.filling = rational(cfg.particles, g.flux_quanta());

	std::vector<motional_density_matrix> ground(run.rhos.begin(), run.rhos.begin() + pair);
	auto mixed = motional_density_matrix::average(ground);

	if (cfg.laughlin && rep.filling && *rep.filling == rational(1, 2)) {
		run.laughlin = laughlin_lattice_states(cfg.particles, cfg.alpha, g);
		rep.gauge_matched = gauge_matches(*run.laughlin, links, g);
		for (const auto& r : run.rhos) rep.laughlin_overlaps.push_back(laughlin_overlap(r, *run.laughlin));
		rep.laughlin_overlap_pair = laughlin_overlap(mixed, *run.laughlin);
		if (!rep.gauge_matched)
			rep.diagnostics.push_back("link field is not the Landau gauge the Laughlin states were built in");
		if (*rep.laughlin_overlap_pair < 0.5)
			rep.diagnostics.push_back("Laughlin overlap collapsed below 0.5: check that the lattice gauge matches " +
			                          run.laughlin->tag.to_json().dump());
	} else if (cfg.laughlin) {
		rep.diagnostics.push_back("Laughlin overlap skipped: filling is not 1/2");
	}

	if (cfg.oracle) {
		auto P = hardcore_oracle_subspace(g, links, cfg.params, cfg.particles, cfg.solver);
		for (int i = 0; i < pair; ++i) rep.oracle_overlaps.push_back(run.rhos[i].projected_weight(P));
		rep.oracle_overlap_pair = mixed.projected_weight(P);
	}
	rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
	return run;
}

} // namespace gaugelatt
