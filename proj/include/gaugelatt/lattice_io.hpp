#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lattice.hpp"

namespace gaugelatt {

/// Fixed "%.12g" rendering used by every CSV writer.
inline std::string fmt12(double v) {
	char buf[40];
	std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
	return buf;
}

inline std::string to_string(boundary b) { return b == boundary::open ? "open" : "magnetic_torus"; }

inline boundary parse_boundary(const std::string& s) {
	if (s == "open") return boundary::open;
	if (s == "magnetic_torus" || s == "torus") return boundary::magnetic_torus;
	fail(errc::invalid_argument, "unknown boundary '" + s + "'");
}

namespace detail {

inline nlohmann::json grid_to_json(const grid<double>& g) {
	auto rows = nlohmann::json::array();
	for (int j = 0; j < g.nx(); ++j) {
		auto row = nlohmann::json::array();
		for (int k = 0; k < g.ny(); ++k) row.push_back(g(j, k));
		rows.push_back(std::move(row));
	}
	return rows;
}

inline grid<double> grid_from_json(const nlohmann::json& rows, int lx, int ly, const char* name) {
	require(rows.is_array() && rows.size() == static_cast<std::size_t>(lx), errc::dimension_mismatch,
	        std::string(name) + " must have Lx rows");
	grid<double> g(lx, ly);
	for (int j = 0; j < lx; ++j) {
		const auto& row = rows[j];
		require(row.is_array() && row.size() == static_cast<std::size_t>(ly), errc::dimension_mismatch,
		        std::string(name) + " rows must have Ly entries");
		for (int k = 0; k < ly; ++k) {
			require(row[k].is_number(), errc::invalid_argument, std::string(name) + " entries must be numbers");
			g(j, k) = row[k].get<double>();
		}
	}
	return g;
}

inline nlohmann::json geometry_header(const lattice_geometry& g) {
	nlohmann::json j;
	j["Lx"] = g.Lx;
	j["Ly"] = g.Ly;
	j["boundary"] = to_string(g.boundary);
	if (g.is_torus()) j["alpha"] = g.background_flux.str();
	return j;
}

} // namespace detail

inline lattice_geometry geometry_from_json(const nlohmann::json& j) {
	try {
		lattice_geometry g;
		g.Lx = j.at("Lx").get<int>();
		g.Ly = j.at("Ly").get<int>();
		g.boundary = parse_boundary(j.value("boundary", std::string("open")));
		if (g.is_torus()) g.background_flux = parse_rational(j.value("alpha", std::string("0")));
		g.validate();
		return g;
	} catch (const nlohmann::json::exception& e) {
		fail(errc::invalid_argument, std::string("malformed geometry JSON: ") + e.what());
	}
}

/// {"Lx", "Ly", "boundary", ["alpha" on the torus], "phi": [[phi_{0,0}, phi_{0,1}, ...], ...]}
inline nlohmann::json to_json(const phase_pattern& p, const lattice_geometry& g) {
	auto j = detail::geometry_header(g);
	j["phi"] = detail::grid_to_json(p.phi);
	return j;
}

inline nlohmann::json to_json(const link_field& l, const lattice_geometry& g) {
	auto j = detail::geometry_header(g);
	j["theta_x"] = detail::grid_to_json(l.theta_x);
	if (l.theta_x2) j["theta_x2"] = detail::grid_to_json(*l.theta_x2);
	if (g.is_torus()) j["twist_y"] = l.twist_y;
	return j;
}

struct pattern_document {
	lattice_geometry geometry;
	phase_pattern pattern;
};

inline pattern_document pattern_from_json(const nlohmann::json& j) {
	auto g = geometry_from_json(j);
	require(j.contains("phi"), errc::invalid_argument, "phase pattern JSON lacks 'phi'");
	return {g, phase_pattern(detail::grid_from_json(j["phi"], g.Lx, g.Ly, "phi"))};
}

inline pattern_document read_pattern_file(const std::string& path) {
	std::ifstream in(path);
	require(static_cast<bool>(in), errc::io, "cannot open pattern file '" + path + "'");
	nlohmann::json j;
	try {
		in >> j;
	} catch (const nlohmann::json::exception& e) {
		fail(errc::io, "cannot parse pattern file '" + path + "': " + e.what());
	}
	return pattern_from_json(j);
}

/// Rows "j,k,value" in j-major order, with a header line.
inline void write_grid_csv(std::ostream& out, const grid<double>& g, const char* value_name = "value") {
	out << "j,k," << value_name << "\n";
	for (int j = 0; j < g.nx(); ++j)
		for (int k = 0; k < g.ny(); ++k) out << j << ',' << k << ',' << fmt12(g(j, k)) << '\n';
}

inline std::string grid_csv(const grid<double>& g, const char* value_name = "value") {
	std::ostringstream s;
	write_grid_csv(s, g, value_name);
	return s.str();
}

} // namespace gaugelatt
