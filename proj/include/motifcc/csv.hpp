#pragma once

#include "motifcc/harness.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace motifcc {

// Shortest round-trip-ish rendering at 12 significant digits (%.12g).
std::string format_g12(double v);

// Each comment becomes a `# ...` line above the header. Rows carry 12
// significant digits. All writers emit LF line endings only.
void write_capacity_csv(std::ostream& out, const CapacityCurve& curve,
                        const std::vector<std::string>& comments);

// Columns: R,frames,frame_errors,fer,ci95,wrong_codewords,mean_iters,wall_seconds.
// The wall_seconds column is written as 0 unless include_timing, keeping the
// body byte-identical across thread counts and machines; measured values stay
// available in the records.
void write_fer_csv(std::ostream& out, const std::vector<FerRecord>& records,
                   const std::vector<std::string>& comments, bool include_timing = false);

void write_hard_decision_csv(std::ostream& out, const std::vector<HardDecisionStats>& rows,
                             const std::vector<std::string>& comments);

}  // namespace motifcc
