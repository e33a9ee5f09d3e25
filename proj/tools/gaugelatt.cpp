// gaugelatt command-line driver.
//
//   gaugelatt butterfly --q-max 50 --omega 10 --out spectrum.csv
//   gaugelatt ground --alpha 1/16 --u 10 --omega 10 --json report.json
//   gaugelatt synth --pattern uniform --alpha 1/16 --waist 0.5 --csv beams.csv
//   gaugelatt design --vplus -7 --vminus 1 --va 5 --eta 1.0472
//   gaugelatt flux --pattern phases.json --out flux.csv
//
// Failures print {"error": {"code": ..., "message": ...}} on stderr and exit
// nonzero (2 for usage errors, 1 otherwise).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <gaugelatt/gaugelatt.hpp>

using namespace gaugelatt;

namespace {

struct common_opts {
	int threads = 1;
};

struct butterfly_opts {
	int q_max = 50;
	double omega = 10, J = 1, J2 = 0;
	int resolution = 8;
	std::string out = "butterfly.csv";
	std::string plot;
};

struct ground_opts {
	int Lx = 8, Ly = 8, N = 2;
	std::string alpha = "1/16";
	double U = 10, omega = 10, J = 1, J2 = 0;
	int states = 3;
	int max_occupancy = -1;
	bool no_oracle = false;
	std::string json;
	std::string export_states;
};

struct synth_opts {
	std::string pattern = "uniform";
	std::string alpha = "1/16";
	int Lx = 16, Ly = 16;
	double waist = 0.5, V_a = 5, V_b = 25;
	double max_condition = 1e12;
	std::string csv = "beams.csv";
	std::string diagnostics;
};

struct design_opts {
	double V_plus = -7, V_minus = 1, V_a = 5;
	double eta = std::numbers::pi / 4;
};

struct flux_opts {
	std::string pattern;
	std::string alpha = "1/16";
	int Lx = 8, Ly = 8;
	std::string out = "-";
};

std::string fmt6(double v) {
	char buf[40];
	std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);
	return buf;
}

/// Opens `path` for writing; "-" means stdout.
class output {
public:
	explicit output(const std::string& path) : use_stdout_(path == "-") {
		if (!use_stdout_) {
			file_.open(path, std::ios::binary);
			require(static_cast<bool>(file_), errc::io, "cannot open '" + path + "' for writing");
		}
	}
	std::ostream& stream() { return use_stdout_ ? std::cout : file_; }
	void close() {
		stream().flush();
		require(static_cast<bool>(stream()), errc::io, "write failed");
	}

private:
	bool use_stdout_;
	std::ofstream file_;
};

void emit_error(const std::string& code, const std::string& message) {
	nlohmann::json j{{"error", {{"code", code}, {"message", message}}}};
	std::cerr << j.dump() << std::endl;
}

int cmd_butterfly(const butterfly_opts& o, const common_opts& c) {
	model_params prm{o.J, o.omega, o.J2, 0.0};
	prm.validate();
	require(o.resolution >= 1, errc::invalid_argument, "--resolution must be >= 1");
	auto spectra = butterfly_scan(o.q_max, prm, o.resolution, c.threads);
	output csv(o.out);
	write_spectrum_csv(csv.stream(), spectra);
	csv.close();
	std::string plot = o.plot.empty() ? (o.out == "-" ? std::string() : o.out + ".plot") : o.plot;
	if (!plot.empty()) {
		output p(plot);
		std::string name = o.out == "-" ? "stdout" : std::filesystem::path(o.out).filename().string();
		write_plot_description(p.stream(), name, prm, o.q_max);
		p.close();
	}
	if (o.out != "-") {
		double lo = std::numeric_limits<double>::infinity(), hi = -lo, gap = lo;
		for (const auto& s : spectra) {
			lo = std::min(lo, s.eigenvalues.front());
			hi = std::max(hi, s.eigenvalues.back());
			gap = std::min(gap, s.band_gap());
		}
		std::cout << "fluxes       " << spectra.size() << "\n";
		std::cout << "energy range " << fmt6(lo) << " " << fmt6(hi) << "\n";
		std::cout << "min band gap " << fmt6(gap) << "\n";
	}
	return 0;
}

int cmd_ground(const ground_opts& o) {
	ground_config cfg;
	cfg.Lx = o.Lx;
	cfg.Ly = o.Ly;
	cfg.particles = o.N;
	cfg.alpha = parse_rational(o.alpha);
	cfg.params = {o.J, o.omega, o.J2, o.U};
	cfg.states = o.states;
	cfg.max_occupancy = o.max_occupancy;
	cfg.oracle = !o.no_oracle;
	cfg.validate();
	auto run = run_ground(cfg);
	const auto& r = run.report;

	if (!o.json.empty()) {
		output js(o.json);
		js.stream() << r.to_json().dump(2) << "\n";
		js.close();
	}
	if (!o.export_states.empty()) {
		fock_basis basis(2 * cfg.Lx * cfg.Ly, cfg.particles, cfg.max_occupancy);
		std::vector<cvector> vecs;
		std::vector<double> energies;
		for (const auto& s : run.states) {
			vecs.push_back(s.amplitudes);
			energies.push_back(s.energy);
		}
		nlohmann::json extra{{"Lx", cfg.Lx}, {"Ly", cfg.Ly}, {"alpha", cfg.alpha.str()}, {"energies", energies},
		                     {"mode_order", "species-major: a sites then b sites, site = j*Ly + k"}};
		write_states_file(o.export_states, basis, vecs, extra);
	}
	if (o.json != "-") {
		auto opt = [](const std::optional<double>& v) { return v ? fmt6(*v) : std::string("n/a"); };
		std::cout << "dim            " << r.dim << "\n";
		std::cout << "filling        " << (r.filling ? r.filling->str() : std::string("n/a")) << "\n";
		std::cout << "state  energy        residual  purity    c_number  laughlin  oracle\n";
		for (std::size_t i = 0; i < r.energies.size(); ++i) {
			char res[32];
			std::snprintf(res, sizeof res, "%.1e", r.residuals[i]);
			std::cout << i << "      " << fmt6(r.energies[i]) << "  " << res << "   " << fmt6(r.purities[i]) << "  "
			          << fmt6(r.c_numbers[i]) << "  "
			          << (i < r.laughlin_overlaps.size() ? fmt6(r.laughlin_overlaps[i]) : std::string("n/a     ")) << "  "
			          << (i < r.oracle_overlaps.size() ? fmt6(r.oracle_overlaps[i]) : std::string("n/a")) << "\n";
		}
		std::cout << "c_number       " << fmt6(r.c_number) << "\n";
		std::cout << "laughlin pair  " << opt(r.laughlin_overlap_pair) << "\n";
		std::cout << "oracle pair    " << opt(r.oracle_overlap_pair) << "\n";
		std::cout << "splitting      " << fmt6(r.splitting) << "\n";
		std::cout << "gap            " << opt(r.gap) << "\n";
		for (const auto& d : r.diagnostics) std::cout << "note: " << d << "\n";
	}
	return 0;
}

int cmd_synth(const synth_opts& o) {
	lattice_geometry g;
	phase_pattern p;
	if (o.pattern == "uniform" || o.pattern == "checkerboard") {
		g = lattice_geometry::open(o.Lx, o.Ly);
		p = o.pattern == "uniform" ? uniform_phase_pattern(parse_rational(o.alpha), g) : checkerboard_pattern(g);
	} else {
		auto doc = read_pattern_file(o.pattern);
		g = doc.geometry;
		p = doc.pattern;
	}
	auto wm = wannier_model::from_depths(o.V_a, o.V_b, g.spacing);
	auto om = build_overlap_matrix(g, wm, mode_function{o.waist * g.spacing});
	auto res = solve_beams(om, target_field(p), o.max_condition);

	output csv(o.csv);
	write_beam_csv(csv.stream(), res.beams);
	csv.close();
	auto diag = res.diagnostics.to_json();
	diag["sites"] = g.sites();
	diag["waist"] = o.waist;
	diag["sigma_a"] = wm.sigma_a;
	diag["sigma_b"] = wm.sigma_b;
	diag["stored_entries"] = om.T.nonZeros();
	if (!o.diagnostics.empty()) {
		output d(o.diagnostics);
		d.stream() << diag.dump(2) << "\n";
		d.close();
	}
	if (o.csv != "-" && o.diagnostics != "-") {
		std::cout << "sites              " << g.sites() << "\n";
		std::cout << "condition number   " << fmt6(res.diagnostics.condition_number) << "\n";
		char buf[40];
		std::snprintf(buf, sizeof buf, "%.3e", res.diagnostics.relative_residual);
		std::cout << "relative residual  " << buf << "\n";
		std::snprintf(buf, sizeof buf, "%.3e", res.diagnostics.max_phase_error);
		std::cout << "max phase error    " << buf << "\n";
		std::cout << "amplitude spread   " << fmt6(res.diagnostics.amplitude_spread) << "\n";
	}
	return 0;
}

int cmd_design(const design_opts& o) {
	auto row = design(stark_inputs{o.V_plus, o.V_minus}, o.eta, o.V_a);
	std::cout << "V+        V-        eta       V_a       | V_b/V_a   J_b/J_a   spacing/lambda\n";
	std::cout << fmt6(row.V_plus) << " " << fmt6(row.V_minus) << " " << fmt6(row.eta) << " " << fmt6(row.V_a) << " | "
	          << fmt6(row.V_b_over_V_a) << " " << fmt6(row.J_b_over_J_a) << " " << fmt6(row.spacing_over_lambda) << "\n";
	return 0;
}

int cmd_flux(const flux_opts& o) {
	lattice_geometry g;
	phase_pattern p;
	if (o.pattern.empty() || o.pattern == "uniform") {
		g = lattice_geometry::open(o.Lx, o.Ly);
		p = uniform_phase_pattern(parse_rational(o.alpha), g);
	} else {
		auto doc = read_pattern_file(o.pattern);
		g = doc.geometry;
		p = doc.pattern;
	}
	auto f = plaquette_flux(links_from_phases(p, g), g);
	auto b = field_strength(f);
	output out(o.out);
	auto& os = out.stream();
	os << "j,k,flux,field_strength\n";
	for (int j = 0; j < f.nx(); ++j)
		for (int k = 0; k < f.ny(); ++k)
			if (g.has_plaquette(j, k)) os << j << ',' << k << ',' << fmt12(f(j, k)) << ',' << fmt12(b(j, k)) << '\n';
	out.close();
	return 0;
}

} // namespace

int main(int argc, char** argv) {
	CLI::App app{"Synthetic gauge fields in state-dependent optical lattices"};
	app.require_subcommand(1);
	app.set_config("--config", "", "TOML/INI config file; command-line flags override its values");
	common_opts common;
	app.add_option("--threads", common.threads, "worker threads")->envname("GAUGELATT_THREADS");

	butterfly_opts bo;
	auto* b = app.add_subcommand("butterfly", "Hofstadter spectrum of the bilayer model over Farey fluxes");
	b->add_option("--q-max", bo.q_max, "fluxes p/q with q < q-max");
	b->add_option("--omega", bo.omega, "Raman rate in units of J");
	b->add_option("--j", bo.J, "nearest-neighbour hopping");
	b->add_option("--j2", bo.J2, "second-neighbour hopping");
	b->add_option("--resolution", bo.resolution, "k points per reduced-zone direction");
	b->add_option("--out", bo.out, "spectrum CSV path, - for stdout");
	b->add_option("--plot", bo.plot, "plot description path (default: <out>.plot)");

	ground_opts go;
	auto* gr = app.add_subcommand("ground", "interacting ground states on the magnetic torus");
	gr->add_option("--lx", go.Lx);
	gr->add_option("--ly", go.Ly);
	gr->add_option("--n", go.N, "particle number");
	gr->add_option("--alpha", go.alpha, "flux per plaquette as p/q");
	gr->add_option("--u", go.U, "on-site interaction");
	gr->add_option("--omega", go.omega);
	gr->add_option("--j", go.J);
	gr->add_option("--j2", go.J2);
	gr->add_option("--states", go.states, "number of lowest states");
	gr->add_option("--max-occupancy", go.max_occupancy, "per-mode occupation cap, -1 for none");
	gr->add_flag("--no-oracle", go.no_oracle, "skip the hardcore target-model comparison");
	gr->add_option("--json", go.json, "report JSON path, - for stdout");
	gr->add_option("--export-states", go.export_states, "binary state file path");

	synth_opts so;
	auto* sy = app.add_subcommand("synth", "beam weights realizing a Raman phase pattern");
	sy->add_option("--pattern", so.pattern, "uniform, checkerboard, or a pattern JSON file");
	sy->add_option("--alpha", so.alpha, "flux for the uniform pattern");
	sy->add_option("--lx", so.Lx);
	sy->add_option("--ly", so.Ly);
	sy->add_option("--waist", so.waist, "beam waist in lattice spacings");
	sy->add_option("--va", so.V_a, "depth of the a lattice in E_r");
	sy->add_option("--vb", so.V_b, "depth of the b lattice in E_r");
	sy->add_option("--max-condition", so.max_condition);
	sy->add_option("--csv", so.csv, "beam CSV path, - for stdout");
	sy->add_option("--diagnostics", so.diagnostics, "diagnostics JSON path, - for stdout");

	design_opts dop;
	auto* de = app.add_subcommand("design", "trap design table");
	de->add_option("--vplus", dop.V_plus, "light shift of the sigma+ component");
	de->add_option("--vminus", dop.V_minus, "light shift of the sigma- component");
	de->add_option("--va", dop.V_a, "depth of the a lattice in E_r");
	de->add_option("--eta", dop.eta, "beam tilt angle in rad");

	flux_opts fo;
	auto* fl = app.add_subcommand("flux", "plaquette fluxes of a phase pattern");
	fl->add_option("--pattern", fo.pattern, "pattern JSON file (default: uniform)");
	fl->add_option("--alpha", fo.alpha);
	fl->add_option("--lx", fo.Lx);
	fl->add_option("--ly", fo.Ly);
	fl->add_option("--out", fo.out, "flux CSV path, - for stdout");

	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp& e) {
		return app.exit(e);
	} catch (const CLI::CallForAllHelp& e) {
		return app.exit(e);
	} catch (const CLI::ParseError& e) {
		emit_error("usage", e.what());
		return 2;
	}

	try {
		require(common.threads >= 1, errc::invalid_argument, "--threads / GAUGELATT_THREADS must be >= 1");
		if (*b) return cmd_butterfly(bo, common);
		if (*gr) return cmd_ground(go);
		if (*sy) return cmd_synth(so);
		if (*de) return cmd_design(dop);
		if (*fl) return cmd_flux(fo);
	} catch (const gaugelatt::error& e) {
		emit_error(to_string(e.code()), e.what());
		return 1;
	} catch (const std::exception& e) {
		emit_error("internal", e.what());
		return 1;
	}
	return 0;
}
