#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vlsym/diagnostic.hpp"
#include "vlsym/poly.hpp"

namespace vlsym {

enum class Type { Error, Void, Bool, Int, Real, IntArray, RealArray };

const char* to_string(Type type);
bool is_array(Type type);
Type element_type(Type array_type);
Type array_of(Type element);

/// Resolution of a name, filled in by validate().
struct VarRef {
  enum class Scope { Unresolved, Local, Input };
  Scope scope = Scope::Unresolved;
  std::uint32_t index = 0;
};

enum class ExprKind { IntLit, RealLit, Var, Index, Unary, Binary, Equals, Len };
enum class UnaryOp { Neg, Not };
enum class BinaryOp { Add, Sub, Mul, Div, Lt, Le, Gt, Ge, Eq, Ne, And, Or };

const char* to_string(BinaryOp op);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  SourceSpan span;
  Integer int_value;      // IntLit
  Rational real_value;    // RealLit
  std::string text;       // literal lexeme, or the name for Var/Index
  UnaryOp unary_op = UnaryOp::Neg;
  BinaryOp binary_op = BinaryOp::Add;
  std::vector<ExprPtr> args;  // Index: [index]; Unary: [x]; Binary/Equals: [a, b]; Len: [a]

  Type type = Type::Error;
  VarRef ref;  // Var / Index
};

/// Assignment target: a variable or one array element.
struct LValue {
  std::string name;
  SourceSpan span;
  ExprPtr index;
  VarRef ref;
  Type type = Type::Error;
};

enum class StmtKind { VarDecl, Assign, Choose, If, While, Call, Return, Assert, Assume, Print, Block };

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
  StmtKind kind = StmtKind::Block;
  SourceSpan span;

  // VarDecl
  Type decl_type = Type::Error;  // Int, Real, IntArray or RealArray
  std::string name;
  ExprPtr extent;  // arrays
  std::uint32_t slot = 0;

  // Assign / Choose / Call target
  std::optional<LValue> target;
  // VarDecl initializer, Assign/Choose value, Return value, If/While/Assert/Assume condition
  ExprPtr value;

  // If / While / Block
  std::vector<StmtPtr> body;  // Block statements
  StmtPtr then_branch;        // If: Block; While: Block
  StmtPtr else_branch;        // If: Block or null

  // Call
  std::string callee;
  std::vector<ExprPtr> args;  // Call arguments, Print arguments
  std::uint32_t callee_index = 0;
};

struct InputDecl {
  std::string name;
  Type type = Type::Int;  // Int or RealArray
  ExprPtr extent;         // RealArray
  std::optional<Integer> default_value;
  SourceSpan span;
};

struct GlobalAssume {
  ExprPtr cond;
  SourceSpan span;
};

/// Inputs and global assumptions interleave; their order is significant.
struct GlobalItem {
  enum class Kind { Input, Assume };
  Kind kind = Kind::Input;
  std::size_t index = 0;
};

struct Param {
  std::string name;
  Type type = Type::Int;
  SourceSpan span;
};

struct FunctionDef {
  std::string name;
  std::vector<Param> params;
  Type return_type = Type::Void;
  StmtPtr body;  // Block
  SourceSpan span;
  std::uint32_t num_slots = 0;  // params first, then declarations
};

struct SourceFile {
  std::string name;
  std::string text;
};

/// A linked VL program: every file's globals and functions in file order.
struct Program {
  std::vector<SourceFile> files;
  std::vector<InputDecl> inputs;
  std::vector<GlobalAssume> assumes;
  std::vector<GlobalItem> globals;
  std::vector<FunctionDef> functions;
  std::string entry = "main";

  const FunctionDef* find_function(const std::string& name) const;
  std::optional<std::size_t> find_input(const std::string& name) const;
  std::string file_name(std::uint32_t file) const;
  /// Source text covered by a span's first line, trimmed to the span.
  std::string snippet(const SourceSpan& span) const;
  Diagnostic diagnostic(Severity severity, std::string message, const SourceSpan& span) const;
};

/// Duplicate or clashing global names across the linked files.
std::vector<Diagnostic> link_diagnostics(const Program& program);

/// Resolves names, assigns local slots and static types, and reports every
/// static error. An empty result means the program is well-formed.
std::vector<Diagnostic> validate(Program& program);

/// Canonical VL source for the program. Re-parsing yields a structurally
/// identical AST.
std::string pretty_print(const Program& program);
std::string pretty_print(const Expr& expr);

/// Structural equality, ignoring source spans and annotations.
bool structurally_equal(const Program& a, const Program& b);
bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const Stmt& a, const Stmt& b);

}  // namespace vlsym
