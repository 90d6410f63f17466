#pragma once

#include <filesystem>
#include <iosfwd>

#include "opsplit/run.hpp"

namespace opsplit {

/// Stable trace CSV header (fields left empty where not applicable).
inline constexpr const char* kTraceCsvHeader =
    "iter,residual,iterate_norm,dist_to_zero,V,S,cum_c_evals,wall_ns";

void write_trace_csv(const RunTrace& trace, std::ostream& out);
void write_trace_csv(const RunTrace& trace, const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double (%.17g trimmed).
std::string format_double(double v);

}  // namespace opsplit
