#pragma once

// JSON instance files and the report files written by the CLI.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "odist/audit.hpp"
#include "odist/instance.hpp"
#include "odist/social_choice.hpp"
#include "odist/solvers.hpp"

namespace odist {

/// Malformed instance or report text. The message names the offending
/// field path, or the line and column for syntax errors.
class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

inline constexpr std::string_view kInstanceFormat = "odist-instance";
inline constexpr std::string_view kSolveReportFormat = "odist-report";
inline constexpr std::string_view kAuditReportFormat = "odist-audit";
inline constexpr int kFormatVersion = 1;

Instance parse_instance(std::string_view text);
/// Canonical form: fixed key order, run-length preference groups, numbers
/// printed with round-trip precision.
std::string serialize_instance(const Instance& instance);

Instance load_instance(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

/// FNV-1a 64-bit hash of the canonical serialization, as "fnv1a64:<hex>".
std::string instance_digest(const Instance& instance);

/// A single winner or a full assignment.
struct Outcome {
  std::optional<FacilityIdx> facility;
  Assignment assignment;
};

struct SolveReport {
  std::string mechanism;
  Outcome outcome;
  std::optional<SocialChoiceOutcome> social_choice;
  std::optional<SolverResult> solver;
  /// Objective the guarantee refers to and its bound (if any).
  std::string guarantee_objective;
  std::optional<double> guarantee;
  std::optional<AuditReport> audit;
  /// Why the audit was skipped, when it was.
  std::string audit_note;
};

std::string serialize_solve_report(const Instance& instance, const SolveReport& report);
std::string serialize_audit_report(const Instance& instance, const Outcome& outcome, const AuditReport& report);

/// Reads the outcome back from a solve report. Throws SchemaError if the
/// report was written for a different instance.
Outcome parse_report_outcome(std::string_view text, const Instance& instance);

}  // namespace odist
