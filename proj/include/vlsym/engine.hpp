#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "vlsym/ast.hpp"
#include "vlsym/solver.hpp"

namespace vlsym {

// ------------------------------------------------------------------ values

struct Undefined {
  friend bool operator==(const Undefined&, const Undefined&) { return true; }
};
/// Integer depending on symbolic int inputs.
struct IntSym {
  Poly poly;
  friend bool operator==(const IntSym&, const IntSym&) = default;
};
/// A real number: a polynomial over the symbolic real inputs.
struct RealVal {
  Poly poly;
  friend bool operator==(const RealVal&, const RealVal&) = default;
};
struct ArrayRef {
  std::uint32_t id = 0;
  friend bool operator==(const ArrayRef&, const ArrayRef&) = default;
};

using Value = std::variant<Undefined, Integer, IntSym, RealVal, ArrayRef>;

struct ArrayObject {
  std::string name;
  Type element = Type::Real;
  Value extent;  // Integer, or IntSym for input arrays sized by symbolic inputs
  std::vector<Value> cells;
  bool read_only = false;
};

// ---------------------------------------------------------------- decisions

/// One nondeterministic decision taken along a path.
struct Decision {
  enum class Kind { Choose, Branch, Concretize };
  Kind kind = Kind::Choose;
  std::uint64_t index = 0;   // Choose: value taken; Branch: 0 = then, 1 = else
  std::uint64_t fanout = 0;  // Choose / Concretize: number of alternatives
  std::string name;          // Concretize: input name
  Integer value;             // Concretize: value chosen

  friend bool operator==(const Decision& a, const Decision& b);
  /// Sibling order: the order in which the search visits alternatives.
  friend bool operator<(const Decision& a, const Decision& b);
};

using ChoiceTrail = std::vector<Decision>;

/// `C i/k`, `B t`, `B e`, `Z name=v/k`
std::string to_string(const Decision& d);
std::optional<Decision> parse_decision(const std::string& line);
bool trail_less(const ChoiceTrail& a, const ChoiceTrail& b);

// --------------------------------------------------------------- violations

enum class Category { AssertionViolation, OutOfBounds, DivisionByZero, ReadUndefined, WriteToInput, EnumBudget };
enum class Certainty { Proveable, Maybe };

const char* to_string(Category c);
const char* to_string(Certainty c);
/// The categories a clean report vouches for.
inline constexpr Category kReportedCategories[] = {Category::AssertionViolation, Category::OutOfBounds,
                                                   Category::DivisionByZero, Category::ReadUndefined,
                                                   Category::WriteToInput};

struct Violation {
  Category category = Category::AssertionViolation;
  Certainty certainty = Certainty::Maybe;
  SourceSpan span;
  std::string location;   // file:line:col-col
  std::string source;     // source text at the location
  std::string function;   // function executing when it happened
  std::string message;
  ChoiceTrail trail;
  std::optional<Witness> witness;
  std::size_t depth = 0;  // trail length
};

// ------------------------------------------------------------------- config

struct SearchConfig {
  std::map<std::string, Integer> overrides;
  /// Maximum statements executed along one path.
  std::uint64_t max_depth = 1'000'000;
  std::uint64_t budget = 1'000'000;
  unsigned workers = 1;
  bool stop_at_first = false;
  std::uint64_t seed = 0x5eedULL;
  /// Concretize every symbolic int input before the first statement.
  bool eager_concretize = false;
  bool collect_terminal_trails = false;
};

/// Bad configuration or a program the engine cannot set up.
class EngineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A trail that does not fit the program under the given configuration.
class ReplayMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// -------------------------------------------------------------------- state

struct Frame {
  std::uint32_t function = 0;
  std::uint32_t ip = 0;
  std::vector<Value> slots;
};

/// One point of the search. Copying a state yields an independent state;
/// arrays are shared copy-on-write.
struct ExecState {
  std::vector<Frame> stack;
  std::vector<Value> inputs;
  std::vector<std::shared_ptr<const ArrayObject>> heap;
  PathCondition pc;
  ChoiceTrail trail;
  std::uint64_t steps = 0;

  const ArrayObject& array(ArrayRef ref) const { return *heap.at(ref.id); }
  ArrayObject& mutable_array(ArrayRef ref);
};

struct StepResult {
  enum class Kind { Continue, Violation, Terminal };
  Kind kind = Kind::Continue;
  /// Continue: in visiting order; empty when every alternative was pruned.
  std::vector<ExecState> successors;
  std::optional<Violation> violation;
  std::uint32_t pruned = 0;
  std::uint32_t dead_ends = 0;  // choose_int over an empty range
};

struct SearchStats {
  std::uint64_t states = 0;    // steps executed
  std::uint64_t terminal = 0;  // complete executions without violation
  std::uint64_t pruned = 0;
  std::uint64_t dead_ends = 0;
  std::uint64_t solver_calls = 0;
  std::uint64_t depth_limited = 0;
  std::uint64_t max_depth = 0;  // longest trail
  double seconds = 0;
  unsigned workers = 1;
  bool stopped = false;  // ended at the first violation
};

struct Report {
  std::vector<std::string> files;
  std::string command;
  SearchStats stats;
  /// Sorted by trail.
  std::vector<Violation> violations;
  std::optional<ChoiceTrail> first_terminal;
  std::vector<ChoiceTrail> terminal_trails;  // when collected

  std::size_t count(Category c) const;
  /// Exhaustive: not stopped early, no depth-limited path and no
  /// enumeration failure.
  bool complete() const;
  /// '+' absent on all executions, '-' violated, ' ' not established.
  char mark(Category c) const;
  bool clean() const;
};

struct TraceStep {
  std::string location;
  std::string source;
  std::string snapshot;
};

struct Trace {
  std::vector<TraceStep> steps;
  std::vector<std::string> output;  // print statements
  StepResult::Kind outcome = StepResult::Kind::Terminal;
  std::optional<Violation> violation;
  ExecState final_state;  // at the end of main, or at the violating statement
  ChoiceTrail trail;
  Witness inputs;  // concrete input values (concrete runs only)
};

class CompiledProgram;

/// Symbolic interpreter over a validated program.
class Engine {
 public:
  enum class Mode { Symbolic, Concrete };

  Engine(const Program& program, SearchConfig config, Mode mode = Mode::Symbolic);
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  const Program& program() const { return program_; }
  const SearchConfig& config() const { return config_; }

  ExecState init_state();
  StepResult step(const ExecState& state);

  Report explore();
  Trace replay(const ChoiceTrail& trail);
  /// Executes one path: follows `prefix`, then picks alternatives uniformly
  /// at random. In concrete mode every real input cell is a random rational.
  Trace run(const ChoiceTrail& prefix = {});

  std::string symbol_name(const SymConst& sym) const;
  SymbolNamer namer() const;
  std::string render(const Value& v, const ExecState& state) const;
  /// `name: value` pairs of the innermost frame.
  std::string snapshot(const ExecState& state) const;
  /// Local variable of the innermost frame, by name.
  std::optional<Value> lookup_local(const ExecState& state, const std::string& name) const;

  std::uint64_t solver_calls() const { return solver_calls_; }

  /// Trace sink for print statements; null while exploring.
  void set_output(std::vector<std::string>* sink) { output_ = sink; }

 private:
  friend class Interp;

  Verdict sat(const PathCondition& pc);
  Verdict implies(const PathCondition& pc, const Formula& claim);
  SourceSpan current_span(const ExecState& state) const;

  const Program& program_;
  SearchConfig config_;
  Mode mode_;
  std::shared_ptr<const CompiledProgram> code_;
  SolverOptions solver_;
  std::uint64_t solver_calls_ = 0;
  std::vector<std::string>* output_ = nullptr;
  std::mt19937_64 rng_;
};

Report explore(const Program& program, const SearchConfig& config);
Trace replay(const Program& program, const SearchConfig& config, const ChoiceTrail& trail);

}  // namespace vlsym
