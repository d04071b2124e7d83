#pragma once

#include <string>

#include "simjudge/audit.hpp"

namespace simjudge::sfd {

// SFD1 solution-field dump: one ASCII header line
//   SFD1 shape=<n1,n2,...> spacing=<h1,...> dtype=f64 order=row-major
// followed by the raw little-endian binary64 payload (prod(n_i) values).
void write_field(const std::string& path, const audit::SolutionField& field);
audit::SolutionField read_field(const std::string& path);

// Series manifest: text file of `<time> <path>` lines; '#' starts a comment.
// Paths are resolved relative to the manifest's directory.
void write_series(const std::string& manifest_path, const std::string& frame_prefix,
                  const audit::SolutionSeries& series);
audit::SolutionSeries read_series(const std::string& manifest_path);

}  // namespace simjudge::sfd
