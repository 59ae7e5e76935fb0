#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ordertypes::cli {

/// Exit codes: 0 success, 1 domain error, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Database path used when --db is absent: $ORDERTYPES_DB or "otdb.bin".
std::string default_db_path();

}  // namespace ordertypes::cli
