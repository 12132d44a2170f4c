#pragma once

#include "hoconc/trace.hpp"

#include <nlohmann/json.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hoconc {

/// Identifies one clause (or the else clause) of a canonical conditional.
struct Label {
  std::uint64_t id = 0;
  auto operator<=>(const Label&) const = default;
};

std::string to_string(Label l);

struct FunctionValue {
  friend bool operator==(const FunctionValue&, const FunctionValue&) = default;
};

/// The value a canonical conditional inspects.
using Inspected = std::variant<TracedValue, FunctionValue>;

/// Outcome of a test in a user-program conditional.
struct FirstOrderC {
  int outcome = 0;
  Trace trace;
  friend bool operator==(const FirstOrderC&, const FirstOrderC&) = default;
};

/// A canonical conditional, identified by its else label, began inspecting a value.
struct TestC {
  Label label;
  Inspected inspected;
  friend bool operator==(const TestC&, const TestC&) = default;
};

/// A canonical clause test succeeded (1) or failed (0).
struct BranchC {
  Label label;
  int outcome = 0;
  Trace trace;
  friend bool operator==(const BranchC&, const BranchC&) = default;
};

using PathConstraint = std::variant<FirstOrderC, TestC, BranchC>;
using Path = std::vector<PathConstraint>;

std::string print_constraint(const PathConstraint& c);
std::string print_path(const Path& p);

nlohmann::json to_json(const PathConstraint& c);
nlohmann::json to_json(const Path& p);
PathConstraint constraint_from_json(const nlohmann::json& j);

/// Checks that canonical-conditional constraints form contiguous blocks:
/// one TestC, zero or more failed BranchC, one succeeded BranchC. Returns a
/// description of the first violation, or nullopt.
std::optional<std::string> check_block_shape(const Path& p);

/// FirstOrderC and BranchC constraints only, in order.
Path decisions(const Path& p);

}  // namespace hoconc
