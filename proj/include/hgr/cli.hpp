#pragma once

#include <iosfwd>

namespace hgr {

// Entry point behind the `hgr` binary: subcommands train, eval, compare.
// Streams are injectable so tests can run commands in-process. Returns the
// process exit status (0 on success).
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

} // namespace hgr
