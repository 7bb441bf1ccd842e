#include "bimmpp/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace bimmpp {

std::array<double, 2> sample_bve(const std::array<double, 3>& lam, RngStream& rng) {
    if (lam[0] <= 0.0 || lam[1] <= 0.0)
        throw InvalidParameter("sample_bve: the first two rates must be > 0");
    if (lam[2] < 0.0)
        throw InvalidParameter("sample_bve: the common-shock rate must be >= 0");
    const double z1 = rng.exponential(lam[0]);
    const double z2 = rng.exponential(lam[1]);
    const double z3 = lam[2] > 0.0 ? rng.exponential(lam[2])
                                   : std::numeric_limits<double>::infinity();
    return {std::min(z1, z3), std::min(z2, z3)};
}

BivariateTrace simulate_trace(const ModelParams& params, std::size_t n, RngStream rng) {
    validate(params);
    if (n == 0) throw InvalidParameter("simulate_trace: n must be >= 1");

    const Vector phi = stationary_phi(params.a, params.b);
    int state = rng.uniform() < phi[0] ? 1 : 2;

    BivariateTrace trace;
    trace.t.reserve(n);
    trace.k.reserve(n);

    double t = 0.0, k = 0.0;
    while (trace.size() < n) {
        const auto inc = sample_bve(state == 1 ? params.lambda : params.omega, rng);
        t += inc[0];
        k += inc[1];
        const double flip = state == 1 ? params.a : params.b;
        if (rng.uniform() < flip) {
            state = 3 - state;
        } else {
            trace.push_back(t, k);
            t = 0.0;
            k = 0.0;
        }
    }
    return trace;
}

void write_trace_csv(const BivariateTrace& trace, std::ostream& out) {
    out << "t,k\n";
    char buf[64];
    for (std::size_t i = 0; i < trace.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", trace.t[i], trace.k[i]);
        out << buf;
    }
}

void write_trace_csv(const BivariateTrace& trace, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw BadFormat("write_trace_csv: cannot open " + path);
    write_trace_csv(trace, f);
    if (!f) throw BadFormat("write_trace_csv: write failed for " + path);
}

BivariateTrace read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw BadFormat("trace CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,k") throw BadFormat("trace CSV: expected header 't,k'");

    BivariateTrace trace;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw BadFormat("trace CSV: missing comma at row " + std::to_string(row));
        std::size_t used1 = 0, used2 = 0;
        double t = 0.0, k = 0.0;
        try {
            t = std::stod(line.substr(0, comma), &used1);
            k = std::stod(line.substr(comma + 1), &used2);
        } catch (const std::exception&) {
            throw BadFormat("trace CSV: unparsable number at row " + std::to_string(row));
        }
        if (used1 != comma || used2 != line.size() - comma - 1)
            throw BadFormat("trace CSV: trailing characters at row " + std::to_string(row));
        if (!(t > 0.0) || !(k > 0.0) || !std::isfinite(t) || !std::isfinite(k))
            throw InvalidParameter("trace CSV: values must be positive and finite (row " +
                                   std::to_string(row) + ")");
        trace.push_back(t, k);
    }
    return trace;
}

BivariateTrace read_trace_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw BadFormat("read_trace_csv: cannot open " + path);
    return read_trace_csv(f);
}

} // namespace bimmpp
