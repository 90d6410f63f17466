#include "opsplit/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace opsplit {

std::string format_double(double v) {
    char buf[64];
    // Shortest representation that parses back to the same double.
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) break;
    }
    return buf;
}

namespace {

void append_opt(std::string& line, const std::optional<double>& v) {
    line.push_back(',');
    if (v) line += format_double(*v);
}

}  // namespace

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
    out << kTraceCsvHeader << '\n';
    for (const TraceRow& r : trace.rows) {
        std::string line = std::to_string(r.iter);
        append_opt(line, r.residual);
        line.push_back(',');
        line += format_double(r.iterate_norm);
        append_opt(line, r.dist_to_zero);
        append_opt(line, r.V);
        append_opt(line, r.S);
        line.push_back(',');
        line += std::to_string(r.cum_c_evals);
        line.push_back(',');
        line += std::to_string(r.wall_ns);
        out << line << '\n';
    }
}

void write_trace_csv(const RunTrace& trace, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw ProblemLoadError("cannot open for writing: " + path.string());
    write_trace_csv(trace, f);
}

}  // namespace opsplit
