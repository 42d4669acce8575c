#pragma once

#include <iosfwd>

namespace innerlab::cli {

/// Runs every acceptance criterion, writing one PASS/FAIL line per criterion
/// followed by a summary line. Returns the number of failed criteria.
int run_acceptance(std::ostream& out, int threads);

}  // namespace innerlab::cli
