#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kirbycat {

// Domain of the shadow object created by the cabling map: a variable ranging
// over the objects of the ribbon category.
inline constexpr std::string_view kShadowDomain = "Ob(R)";

// A level-0 construct over a collection: either still a variable, or
// specialized to one element of the collection. Values are immutable;
// specialize() returns a new Variable.
class Variable {
 public:
  const std::string& domain() const noexcept { return domain_; }
  bool is_bound() const noexcept { return element_.has_value(); }
  const std::optional<std::string>& element() const noexcept {
    return element_;
  }

  std::string to_string() const;

  friend bool operator==(const Variable&, const Variable&) = default;

 private:
  friend Variable make_variable(std::string_view domain_id);
  friend Variable specialize(const Variable& v, std::string_view element_id);

  std::string domain_;
  std::optional<std::string> element_;
};

// Throws InvalidArgument on an empty identifier.
Variable make_variable(std::string_view domain_id);

// Throws DoubleSpecialization when v is already bound, InvalidArgument on an
// empty element identifier.
Variable specialize(const Variable& v, std::string_view element_id);

// Graded constructs x(0), ..., x(n) with named transitions z(i): x(i) -> x(i+1).
// Only adjacent transitions are stored.
class MotivicFrame {
 public:
  MotivicFrame(std::string construct, std::vector<std::string> levels,
               std::vector<std::string> transitions);

  const std::string& construct() const noexcept { return construct_; }
  std::size_t depth() const noexcept { return levels_.size(); }
  const std::string& level(std::size_t i) const { return levels_.at(i); }
  const std::string& transition(std::size_t i) const {
    return transitions_.at(i);
  }
  const std::vector<std::string>& levels() const noexcept { return levels_; }
  const std::vector<std::string>& transitions() const noexcept {
    return transitions_;
  }

  friend bool operator==(const MotivicFrame&, const MotivicFrame&) = default;

 private:
  std::string construct_;
  std::vector<std::string> levels_;
  std::vector<std::string> transitions_;
};

namespace frames {

// n-skeleta glued by attaching (i+1)-cells, truncated at `dimension`.
MotivicFrame cw_complex(std::size_t dimension);
MotivicFrame integration();
MotivicFrame space();
// The frame whose level 0 is a variable over `collection`.
MotivicFrame variable_over(std::string_view collection);

}  // namespace frames

}  // namespace kirbycat
