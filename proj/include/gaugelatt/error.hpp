#pragma once

#include <stdexcept>
#include <string>

namespace gaugelatt {

/// Failure categories surfaced through the CLI error JSON.
enum class errc {
	invalid_argument,
	dimension_mismatch,
	not_converged,
	ill_conditioned,
	singular,
	capacity,
	io,
};

inline const char* to_string(errc c) {
	switch (c) {
	case errc::invalid_argument: return "invalid_argument";
	case errc::dimension_mismatch: return "dimension_mismatch";
	case errc::not_converged: return "not_converged";
	case errc::ill_conditioned: return "ill_conditioned";
	case errc::singular: return "singular";
	case errc::capacity: return "capacity";
	case errc::io: return "io";
	}
	return "unknown";
}

class error : public std::runtime_error {
public:
	error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
	errc code() const noexcept { return code_; }

private:
	errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
	if (!cond) fail(code, what);
}

} // namespace gaugelatt
