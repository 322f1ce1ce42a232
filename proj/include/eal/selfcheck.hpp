#pragma once

#include <iosfwd>

namespace eal {

// Built-in invariant suite: a quick randomized sweep over the belief algebra,
// uncertainty measures, classifiers and statistics.  Prints one line per
// check; returns the number of failed checks.
int run_selfcheck(std::ostream& log);

}  // namespace eal
