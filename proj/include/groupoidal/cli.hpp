#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "groupoidal/weakhopf.hpp"

namespace groupoidal {

// Process exit codes of the command-line front end.
enum ExitCode : int {
  kExitPass = 0,
  kExitCheckFailure = 1,
  kExitConstruction = 2,
  kExitIo = 3,  // unreadable input, schema violation or bad usage
};

/// Two dual structures and their pairing, the document `build tl` writes.
struct StructureFile {
  WeakHopfData A, B;
  Pairing pairing;
  int l = 0, m = 0;  // 0 when not built from a tower
};
Json structure_file_to_json(const StructureFile& s);
/// Accepts the pair document or a single whd-v1 structure, in which case
/// B and the pairing are its canonical dual. Throws SchemaError.
StructureFile structure_file_from_json(const Json& j);

/// Runs one command. args excludes the program name. Reports go to out,
/// diagnostics to err; the return value is the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace groupoidal
