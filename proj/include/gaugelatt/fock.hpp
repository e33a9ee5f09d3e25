#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "error.hpp"

namespace gaugelatt {

/// Occupation-number basis of N bosons in M modes, optionally with an
/// occupation cap per mode (1 gives hardcore bosons). States are ordered
/// lexicographically by descending occupation vector: (2,0), (1,1), (0,2).
class fock_basis {
public:
	static constexpr std::size_t default_cap = 20'000'000;
	static constexpr std::size_t npos = static_cast<std::size_t>(-1);

	fock_basis(int modes, int particles, int max_occupancy = -1, std::size_t cap = default_cap)
	    : modes_(modes), particles_(particles), max_occ_(max_occupancy < 0 ? particles : max_occupancy) {
		require(modes >= 1, errc::invalid_argument, "Fock basis needs at least one mode");
		require(particles >= 0, errc::invalid_argument, "particle number must be non-negative");
		require(particles <= 255, errc::invalid_argument, "particle number above 255 is not supported");
		auto n = count(modes, particles, max_occ_, cap);
		require(n <= cap, errc::capacity,
		        "Fock basis of " + std::to_string(particles) + " bosons in " + std::to_string(modes) +
		            " modes exceeds the configured cap of " + std::to_string(cap) + " states");
		occupations_.reserve(n * static_cast<std::size_t>(modes));
		std::vector<std::uint8_t> cur(static_cast<std::size_t>(modes), 0);
		enumerate(cur, 0, particles);
		size_ = occupations_.size() / static_cast<std::size_t>(modes);
		index_.reserve(size_);
		for (std::size_t i = 0; i < size_; ++i) index_.emplace(key(occupation(i)), i);
	}

	/// Number of states, saturating at cap + 1.
	static std::size_t count(int modes, int particles, int max_occ, std::size_t cap = default_cap) {
		// ways[n] = number of occupations of the modes seen so far holding n bosons
		std::vector<std::size_t> ways(static_cast<std::size_t>(particles) + 1, 0);
		ways[0] = 1;
		for (int m = 0; m < modes; ++m) {
			std::vector<std::size_t> next(ways.size(), 0);
			for (int n = 0; n <= particles; ++n)
				for (int o = 0; o <= max_occ && o <= n; ++o) {
					next[n] += ways[n - o];
					if (next[n] > cap) next[n] = cap + 1;
				}
			ways.swap(next);
		}
		return ways[particles];
	}

	int modes() const { return modes_; }
	int particles() const { return particles_; }
	int max_occupancy() const { return max_occ_; }
	std::size_t size() const { return size_; }

	std::span<const std::uint8_t> occupation(std::size_t i) const {
		return {occupations_.data() + i * static_cast<std::size_t>(modes_), static_cast<std::size_t>(modes_)};
	}

	/// Position of an occupation vector, or npos when it is not in the basis.
	std::size_t index_of(std::span<const std::uint8_t> occ) const {
		if (occ.size() != static_cast<std::size_t>(modes_)) return npos;
		auto it = index_.find(key(occ));
		return it == index_.end() ? npos : it->second;
	}

private:
	static std::string key(std::span<const std::uint8_t> occ) {
		return {reinterpret_cast<const char*>(occ.data()), occ.size()};
	}

	void enumerate(std::vector<std::uint8_t>& cur, int mode, int left) {
		if (mode == modes_ - 1) {
			if (left > max_occ_) return;
			cur[mode] = static_cast<std::uint8_t>(left);
			occupations_.insert(occupations_.end(), cur.begin(), cur.end());
			cur[mode] = 0;
			return;
		}
		for (int o = std::min(left, max_occ_); o >= 0; --o) {
			cur[mode] = static_cast<std::uint8_t>(o);
			enumerate(cur, mode + 1, left - o);
		}
		cur[mode] = 0;
	}

	int modes_;
	int particles_;
	int max_occ_;
	std::size_t size_ = 0;
	std::vector<std::uint8_t> occupations_;
	std::unordered_map<std::string, std::size_t> index_;
};

} // namespace gaugelatt
