#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "kirbycat/event_site.hpp"
#include "kirbycat/kirby_algebra.hpp"
#include "kirbycat/ribbon.hpp"
#include "kirbycat/twisted_operad.hpp"

namespace kirbycat {

// Syntax and range errors in a script. Deliberately not a kirbycat::Error:
// the CLI reports it with exit code 2.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct BraidDef {
  std::string name;
  std::size_t strands = 0;
  std::vector<Generator> word;
  friend bool operator==(const BraidDef&, const BraidDef&) = default;
};

// Relabels the endpoints of an earlier braid; an explicit codomain makes it
// a braid between different objects.
struct LabelsDef {
  std::string braid;
  std::vector<ObjectLabel> domain;
  std::optional<std::vector<ObjectLabel>> codomain;
  friend bool operator==(const LabelsDef&, const LabelsDef&) = default;
};

struct MatrixDef {
  std::string name;
  LinkingMatrix matrix;
  friend bool operator==(const MatrixDef&, const MatrixDef&) = default;
};

struct ArrowDef {
  std::string name;
  std::string source;
  std::string target;
  friend bool operator==(const ArrowDef&, const ArrowDef&) = default;
};

struct CategoryDef {
  std::string name;
  std::vector<std::string> objects;
  std::vector<ArrowDef> arrows;
  friend bool operator==(const CategoryDef&, const CategoryDef&) = default;
};

struct OperadDef {
  std::string name;
  OperadMorphism morphism;
  friend bool operator==(const OperadDef&, const OperadDef&) = default;
};

struct Command {
  std::string verb;
  std::vector<std::string> args;
  std::vector<std::pair<std::string, std::string>> options;
  friend bool operator==(const Command&, const Command&) = default;
};

using Statement =
    std::variant<BraidDef, LabelsDef, MatrixDef, CategoryDef, OperadDef,
                 Command>;

struct Script {
  std::vector<Statement> statements;
  friend bool operator==(const Script&, const Script&) = default;
};

// Throws ParseError with a one-based line and column.
Script parse(std::string_view text);
// Canonical text; parse(print(s)) == s.
std::string print(const Script& s);
std::string print(const Statement& s);

enum class OutputFormat { Text, Machine };

struct RunOptions {
  std::uint64_t seed = 0;
  std::size_t depth = 4;
  OutputFormat format = OutputFormat::Text;
};

struct CommandResult {
  std::string command;
  nlohmann::json inputs;
  nlohmann::json result;
  nlohmann::json invariant_record;  // null when the command has none
  std::string text;

  nlohmann::json record() const;
};

// Executes the commands of a script in order, handing each result to `sink`
// as soon as it is ready. Domain errors propagate as kirbycat::Error;
// unknown or not yet defined names raise ResolutionError.
void run(const Script& s, const RunOptions& options,
         const std::function<void(const CommandResult&)>& sink);
std::vector<CommandResult> run(const Script& s, const RunOptions& options);

// The objects a script defines, after all relabelling statements.
struct Definitions {
  std::map<std::string, FramedBraid> braids;
  std::map<std::string, LinkingMatrix> matrices;
  std::map<std::string, FiniteFreeCategory> categories;
  std::map<std::string, OperadMorphism> operads;
};
Definitions definitions(const Script& s);

// One output line in the requested format.
std::string render(const CommandResult& r, OutputFormat format);

// Structural check of a machine-readable record; empty when valid.
std::vector<std::string> schema_violations(const nlohmann::json& record);

}  // namespace kirbycat
