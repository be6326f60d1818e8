#pragma once

// The acceptance suite: one check per criterion, shared by the acceptance
// test binary and `twistor verify`.

#include "twistor/topology.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace twistor {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  /// Multiplies every numeric tolerance, including the tracer's corrector.
  double tolerance_scale = 1.0;
  int frames = 61;
  std::uint64_t seed = 1;
  /// Serialized P / Q to compare against a fresh computation.
  std::optional<std::string> p_path, q_path;
  /// Skip criteria 6 and 8 (the full sweep).
  bool skip_sweep = false;
};

/// The flagship sweep shared by criteria 6 and 8.
struct FlagshipTopology {
  SweepConfig cfg;
  SweepResult sweep;
  CellComplex complex;
  PinchReport pinches;
  double seconds = 0;
};

FlagshipTopology flagship_topology(int frames, double tolerance_scale = 1.0);

CheckResult check_discriminant(double tol_scale);
CheckResult check_twistor_fibers(double tol_scale);
CheckResult check_fermat_equivalence();
CheckResult check_symmetry(double tol_scale);
CheckResult check_cubic_oracle(std::uint64_t seed, double tol_scale);
CheckResult check_topology(const FlagshipTopology& t);
CheckResult check_time_reversal(double tol_scale);
CheckResult check_loops_vanish(const FlagshipTopology& t);
/// Reloads serialized P and Q and compares them exactly with a recomputation.
CheckResult check_serialization(const std::optional<std::string>& p_path, const std::optional<std::string>& q_path);

/// Runs every check; exceptions inside a check become a failed result.
std::vector<CheckResult> run_acceptance(const VerifyOptions& opt,
                                        const std::function<void(const CheckResult&)>& on_result = {});

/// Events at t paired with events at -t (birth with death, pinch and
/// saddle with themselves) at sigma-mirrored locations.
bool events_sigma_paired(const std::vector<Event>& events, double time_tol, double space_tol);

/// Max over sample points of the distance to the other slice's zero set,
/// both ways, after reflecting slice(t) in x3. Optionally reports the
/// traced curve counts of slice(t) and slice(-t).
double time_reversal_distance(const LocusSystem& sys, const TraceConfig& cfg, double t, double tol,
                              std::array<std::size_t, 2>* curve_counts = nullptr);

}  // namespace twistor
