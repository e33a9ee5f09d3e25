#pragma once

// Binary export of many-body vectors: the 8-byte magic "GLSTATE1", a uint64
// length, that many bytes of JSON metadata (modes, particles, max_occupancy,
// dim, count, optional gauge tag), then count * dim complex doubles as
// little-endian (re, im) pairs.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "fock.hpp"
#include "linalg.hpp"

namespace gaugelatt {

struct state_file {
	nlohmann::json metadata;
	std::vector<cvector> vectors;
};

namespace detail {

inline constexpr char state_magic[8] = {'G', 'L', 'S', 'T', 'A', 'T', 'E', '1'};

template <class T>
void put_le(std::ostream& os, T v) {
	unsigned char b[sizeof(T)];
	std::memcpy(b, &v, sizeof(T));
	if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
	os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
	unsigned char b[sizeof(T)];
	is.read(reinterpret_cast<char*>(b), sizeof(T));
	require(static_cast<bool>(is), errc::io, "truncated state file");
	if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
	T v;
	std::memcpy(&v, b, sizeof(T));
	return v;
}

} // namespace detail

inline void write_states(std::ostream& os, const fock_basis& basis, const std::vector<cvector>& vectors,
                         const nlohmann::json& extra = nlohmann::json::object()) {
	for (const auto& v : vectors)
		require(v.size() == static_cast<Eigen::Index>(basis.size()), errc::dimension_mismatch,
		        "vector does not match basis");
	nlohmann::json meta = extra;
	meta["modes"] = basis.modes();
	meta["particles"] = basis.particles();
	meta["max_occupancy"] = basis.max_occupancy();
	meta["dim"] = basis.size();
	meta["count"] = vectors.size();
	meta["ordering"] = "descending lexicographic occupation vectors";
	std::string text = meta.dump();
	os.write(detail::state_magic, 8);
	detail::put_le<std::uint64_t>(os, text.size());
	os.write(text.data(), static_cast<std::streamsize>(text.size()));
	for (const auto& v : vectors)
		for (Eigen::Index i = 0; i < v.size(); ++i) {
			detail::put_le<double>(os, v(i).real());
			detail::put_le<double>(os, v(i).imag());
		}
	require(static_cast<bool>(os), errc::io, "failed writing state file");
}

inline void write_states_file(const std::string& path, const fock_basis& basis, const std::vector<cvector>& vectors,
                              const nlohmann::json& extra = nlohmann::json::object()) {
	std::ofstream os(path, std::ios::binary);
	require(static_cast<bool>(os), errc::io, "cannot open '" + path + "' for writing");
	write_states(os, basis, vectors, extra);
}

inline state_file read_states(std::istream& is) {
	char magic[8];
	is.read(magic, 8);
	require(static_cast<bool>(is) && std::memcmp(magic, detail::state_magic, 8) == 0, errc::io, "not a state file");
	auto len = detail::get_le<std::uint64_t>(is);
	require(len < (1u << 24), errc::io, "state file metadata too large");
	std::string text(len, '\0');
	is.read(text.data(), static_cast<std::streamsize>(len));
	require(static_cast<bool>(is), errc::io, "truncated state file metadata");
	state_file out;
	out.metadata = nlohmann::json::parse(text);
	auto dim = out.metadata.at("dim").get<std::size_t>();
	auto count = out.metadata.at("count").get<std::size_t>();
	for (std::size_t c = 0; c < count; ++c) {
		cvector v(static_cast<Eigen::Index>(dim));
		for (std::size_t i = 0; i < dim; ++i) {
			double re = detail::get_le<double>(is);
			double im = detail::get_le<double>(is);
			v(static_cast<Eigen::Index>(i)) = cplx(re, im);
		}
		out.vectors.push_back(std::move(v));
	}
	return out;
}

inline state_file read_states_file(const std::string& path) {
	std::ifstream is(path, std::ios::binary);
	require(static_cast<bool>(is), errc::io, "cannot open '" + path + "'");
	return read_states(is);
}

} // namespace gaugelatt
