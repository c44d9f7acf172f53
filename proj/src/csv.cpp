#include "motifcc/csv.hpp"

#include <cstdio>
#include <ostream>

namespace motifcc {

std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

void write_comments(std::ostream& out, const std::vector<std::string>& comments) {
  for (const std::string& c : comments) out << "# " << c << "\n";
}

}  // namespace

void write_capacity_csv(std::ostream& out, const CapacityCurve& curve,
                        const std::vector<std::string>& comments) {
  write_comments(out, comments);
  if (!curve.metadata.empty()) out << "# " << curve.metadata << "\n";
  out << "R,capacity,ci\n";
  for (const auto& p : curve.points)
    out << p.R << ',' << format_g12(p.bits_per_cycle) << ',' << format_g12(p.ci) << "\n";
}

void write_fer_csv(std::ostream& out, const std::vector<FerRecord>& records,
                   const std::vector<std::string>& comments, bool include_timing) {
  write_comments(out, comments);
  for (const auto& r : records)
    out << "# sweep_seed R=" << r.R << ": " << r.sweep_seed
        << " (frame f uses stream (sweep_seed, f); mask seed is its first draw)\n";
  out << "R,frames,frame_errors,fer,ci95,wrong_codewords,mean_iters,wall_seconds\n";
  for (const auto& r : records) {
    out << r.R << ',' << r.frames << ',' << r.frame_errors << ',' << format_g12(r.fer) << ','
        << format_g12(r.ci95) << ',' << r.wrong_codewords << ',' << format_g12(r.mean_iters)
        << ',' << format_g12(include_timing ? r.wall_seconds : 0.0) << "\n";
  }
}

void write_hard_decision_csv(std::ostream& out, const std::vector<HardDecisionStats>& rows,
                             const std::vector<std::string>& comments) {
  write_comments(out, comments);
  out << "R,trials,erasures,substitutions,erasure_rate,substitution_rate,erasure_ci95,"
         "substitution_ci95\n";
  for (const auto& r : rows) {
    out << r.R << ',' << r.trials << ',' << r.erasures << ',' << r.substitutions << ','
        << format_g12(r.erasure_rate) << ',' << format_g12(r.substitution_rate) << ','
        << format_g12(r.erasure_ci95) << ',' << format_g12(r.substitution_ci95) << "\n";
  }
}

}  // namespace motifcc
