#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace objcheck {

/// Runs the command line `args` (without the program name). Returns 0 when
/// nothing was reported, 1 when diagnostics were reported and 2 on usage or
/// I/O errors. `out_is_tty` decides colouring when OBJCHECK_COLOR is auto.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        bool out_is_tty = false);

}  // namespace objcheck
