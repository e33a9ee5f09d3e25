#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "error.hpp"

namespace gaugelatt {

/// Reduced fraction p/q with q > 0. Flux densities are carried as rationals
/// so that commensurability checks (q | Ly, alpha*Lx*Ly integer) stay exact.
struct rational {
	std::int64_t p = 0;
	std::int64_t q = 1;

	constexpr rational() = default;
	rational(std::int64_t num, std::int64_t den = 1) : p(num), q(den) {
		require(den != 0, errc::invalid_argument, "rational with zero denominator");
		if (q < 0) {
			p = -p;
			q = -q;
		}
		auto g = std::gcd(p, q);
		if (g > 1) {
			p /= g;
			q /= g;
		}
	}

	double value() const { return static_cast<double>(p) / static_cast<double>(q); }
	bool is_integer() const { return q == 1; }
	std::string str() const { return std::to_string(p) + "/" + std::to_string(q); }

	friend bool operator==(const rational&, const rational&) = default;
	friend rational operator*(const rational& a, std::int64_t n) { return rational(a.p * n, a.q); }
	friend rational operator*(std::int64_t n, const rational& a) { return a * n; }
	friend rational operator*(const rational& a, const rational& b) { return rational(a.p * b.p, a.q * b.q); }
	friend rational operator+(const rational& a, const rational& b) { return rational(a.p * b.q + b.p * a.q, a.q * b.q); }
	friend bool operator<(const rational& a, const rational& b) { return a.p * b.q < b.p * a.q; }
};

/// True when p and q were coprime as written (no reduction needed).
inline bool coprime(std::int64_t p, std::int64_t q) { return std::gcd(p, q) == 1; }

/// Parses "p/q" or an integer literal. Whitespace is not accepted.
inline rational parse_rational(std::string_view text) {
	auto bad = [&] { fail(errc::invalid_argument, "cannot parse rational '" + std::string(text) + "'"); };
	auto parse_int = [&](std::string_view s) -> std::int64_t {
		if (s.empty()) bad();
		std::size_t i = 0;
		bool neg = false;
		if (s[0] == '-' || s[0] == '+') {
			neg = s[0] == '-';
			i = 1;
		}
		if (i == s.size()) bad();
		std::int64_t v = 0;
		for (; i < s.size(); ++i) {
			if (s[i] < '0' || s[i] > '9') bad();
			v = v * 10 + (s[i] - '0');
		}
		return neg ? -v : v;
	};
	auto slash = text.find('/');
	if (slash == std::string_view::npos) return rational(parse_int(text));
	auto den = parse_int(text.substr(slash + 1));
	if (den == 0) bad();
	return rational(parse_int(text.substr(0, slash)), den);
}

} // namespace gaugelatt
