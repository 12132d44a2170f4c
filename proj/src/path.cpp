#include "hoconc/path.hpp"

namespace hoconc {

std::string to_string(Label l) { return "l" + std::to_string(l.id); }

namespace {

std::string print_inspected(const Inspected& v) {
  if (const auto* tv = std::get_if<TracedValue>(&v)) {
    return "(num " + tv->value.str() + " " + print_trace(tv->trace) + ")";
  }
  return "fn";
}

}  // namespace

std::string print_constraint(const PathConstraint& c) {
  return std::visit(Overloaded{
                        [](const FirstOrderC& f) {
                          return "(fo " + std::to_string(f.outcome) + " " + print_trace(f.trace) + ")";
                        },
                        [](const TestC& t) {
                          return "(test " + to_string(t.label) + " " + print_inspected(t.inspected) + ")";
                        },
                        [](const BranchC& b) {
                          return "(branch " + to_string(b.label) + " " + std::to_string(b.outcome) + " " +
                                 print_trace(b.trace) + ")";
                        },
                    },
                    c);
}

std::string print_path(const Path& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += " ";
    out += print_constraint(p[i]);
  }
  return out + "]";
}

nlohmann::json to_json(const PathConstraint& c) {
  return std::visit(Overloaded{
                        [](const FirstOrderC& f) {
                          return nlohmann::json{{"kind", "first-order"},
                                                {"outcome", f.outcome},
                                                {"trace", print_trace(f.trace)}};
                        },
                        [](const TestC& t) {
                          nlohmann::json j{{"kind", "test"}, {"label", t.label.id}};
                          if (const auto* tv = std::get_if<TracedValue>(&t.inspected)) {
                            j["value"] = tv->value.str();
                            j["trace"] = print_trace(tv->trace);
                          } else {
                            j["value"] = "function";
                          }
                          return j;
                        },
                        [](const BranchC& b) {
                          return nlohmann::json{{"kind", "branch"},
                                                {"label", b.label.id},
                                                {"outcome", b.outcome},
                                                {"trace", print_trace(b.trace)}};
                        },
                    },
                    c);
}

nlohmann::json to_json(const Path& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : p) arr.push_back(to_json(c));
  return arr;
}

PathConstraint constraint_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind");
  if (kind == "first-order") {
    return FirstOrderC{j.at("outcome").get<int>(), parse_trace(j.at("trace").get<std::string>())};
  }
  if (kind == "branch") {
    return BranchC{Label{j.at("label").get<std::uint64_t>()}, j.at("outcome").get<int>(),
                   parse_trace(j.at("trace").get<std::string>())};
  }
  if (kind == "test") {
    Label l{j.at("label").get<std::uint64_t>()};
    const std::string value = j.at("value");
    if (value == "function") return TestC{l, FunctionValue{}};
    return TestC{l, TracedValue{Int(value), parse_trace(j.at("trace").get<std::string>())}};
  }
  throw Error("unknown constraint kind '" + kind + "'");
}

std::optional<std::string> check_block_shape(const Path& p) {
  bool in_block = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& c = p[i];
    const std::string at = " at index " + std::to_string(i);
    if (std::holds_alternative<TestC>(c)) {
      if (in_block) return "test constraint inside an unfinished block" + at;
      in_block = true;
    } else if (const auto* b = std::get_if<BranchC>(&c)) {
      if (!in_block) return "branch constraint outside a block" + at;
      if (b->outcome == 1) in_block = false;
    } else if (in_block) {
      return "first-order constraint inside a block" + at;
    }
  }
  // A run that stops (bug or fuel) cannot interrupt a block: clause tests
  // never evaluate user code.
  if (in_block) return std::string("unterminated block at end of path");
  return std::nullopt;
}

Path decisions(const Path& p) {
  Path out;
  for (const auto& c : p) {
    if (!std::holds_alternative<TestC>(c)) out.push_back(c);
  }
  return out;
}

}  // namespace hoconc
