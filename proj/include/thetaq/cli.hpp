#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace thetaq::cli
{

// args excludes the program name. Returns 0 on success, 1 when any verification fails
// or a computation raises, 2 on usage errors (synopsis on err).
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace thetaq::cli
