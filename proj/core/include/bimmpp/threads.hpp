#pragma once

namespace bimmpp {

// Caps the number of worker threads used by the library's parallel loops.
// n <= 0 restores the hardware default. Results never depend on the cap;
// every parallel loop assigns one random stream per index and reduces in
// index order.
void set_max_threads(int n);
int max_threads();

} // namespace bimmpp
