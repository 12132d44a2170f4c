#pragma once

#include "hoconc/canonical.hpp"
#include "hoconc/interp.hpp"
#include "hoconc/path.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <variant>

namespace hoconc {

struct ConcClosure;
struct CanonClosure;

/// Runtime value of the concolic machine. Every number carries a trace.
using ConcValue =
    std::variant<TracedValue, std::shared_ptr<const ConcClosure>, std::shared_ptr<const CanonClosure>>;

inline bool is_function(const ConcValue& v) { return v.index() != 0; }

/// A user-program lambda closed over concolic values.
struct ConcClosure {
  const Lambda* lambda;
  Env<ConcValue> env;
};

/// A canonical function instance. `fn` points into the store the run reads.
struct CanonClosure {
  const CanonicalFn* fn;
  Env<ConcValue> env;
};

struct DynamicError {
  std::string what;
};

/// Applies a primitive. Predicates give 1/0 with literal traces; arithmetic
/// and comparisons build an operator trace; `not` builds a negation trace.
/// A procedure operand to anything but the predicates is a DynamicError.
std::variant<ConcValue, DynamicError> prim_apply(PrimOp op, std::span<const ConcValue> args);

using ConcOutcome = BasicOutcome<ConcValue>;

inline constexpr std::size_t kDefaultMaxPath = 1'000;

struct ConcolicRun {
  ConcOutcome outcome;
  Path path;
};

/// Runs `p` on the inputs in `store`, logging one FirstOrderC per evaluated
/// user-conditional test, and a TestC/BranchC block per executed canonical
/// conditional. Requires a proper store binding every declared input with
/// its sort. The returned outcome may reference `store`. A run whose path
/// reaches `max_path` constraints stops as FuelExhausted.
ConcolicRun concolic_eval(const Program& p, const Store& store, std::uint64_t fuel = kDefaultFuel,
                          std::size_t max_path = kDefaultMaxPath);

std::string print_conc_value(const ConcValue& v);

}  // namespace hoconc
