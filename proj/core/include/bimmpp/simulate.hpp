#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "bimmpp/model.hpp"
#include "bimmpp/rng.hpp"

namespace bimmpp {

// Ordered inter-failure observations, column-stored: pair i is (t[i], k[i]),
// the elapsed days and kilometers between failure i-1 and failure i.
struct BivariateTrace {
    Vector t;
    Vector k;

    std::size_t size() const noexcept { return t.size(); }
    void push_back(double ti, double ki) {
        t.push_back(ti);
        k.push_back(ki);
    }
};

// One draw (x, y) with survival exp(-l1 x - l2 y - l3 max(x,y)): the
// classical three-shock construction (min(Z1,Z3), min(Z2,Z3)); a zero l3
// gives independent exponentials and no mass on x == y.
std::array<double, 2> sample_bve(const std::array<double, 3>& lam, RngStream& rng);

// Generates n failures. Hidden state starts from stationary_phi; each
// sojourn adds a BVE increment from the current state's triple to the
// pending pair, then with probability a (state 1) or b (state 2) the state
// flips without a failure, otherwise the pair is emitted and reset.
BivariateTrace simulate_trace(const ModelParams& params, std::size_t n, RngStream rng);

// CSV with header "t,k", one pair per row, 17 significant digits.
void write_trace_csv(const BivariateTrace& trace, std::ostream& out);
void write_trace_csv(const BivariateTrace& trace, const std::string& path);
BivariateTrace read_trace_csv(std::istream& in);
BivariateTrace read_trace_csv(const std::string& path);

} // namespace bimmpp
