#pragma once

#include <ostream>

namespace qeq::cli {

/// Runs `qeqlog <command> --workspace ws.json [flags]`. JSON goes to `out`,
/// diagnostics to `err`. Returns 0 on a positive answer, 1 on a negative one
/// and 2 on any error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qeq::cli
