#include "kirbycat/motivic.hpp"

#include <utility>

#include "kirbycat/errors.hpp"

namespace kirbycat {

std::string Variable::to_string() const {
  if (element_) return *element_;
  return "MotFr0[" + domain_ + "]";
}

Variable make_variable(std::string_view domain_id) {
  if (domain_id.empty()) {
    throw InvalidArgument("variable domain identifier must be nonempty");
  }
  Variable v;
  v.domain_ = std::string(domain_id);
  return v;
}

Variable specialize(const Variable& v, std::string_view element_id) {
  if (v.is_bound()) {
    throw DoubleSpecialization("variable over " + v.domain_ +
                               " is already specialized to " + *v.element_);
  }
  if (element_id.empty()) {
    throw InvalidArgument("specialization target must be nonempty");
  }
  Variable out = v;
  out.element_ = std::string(element_id);
  return out;
}

MotivicFrame::MotivicFrame(std::string construct,
                           std::vector<std::string> levels,
                           std::vector<std::string> transitions)
    : construct_(std::move(construct)),
      levels_(std::move(levels)),
      transitions_(std::move(transitions)) {
  if (levels_.empty()) {
    throw InvalidArgument("motivic frame needs at least one level");
  }
  if (transitions_.size() + 1 != levels_.size()) {
    throw InvalidArgument("motivic frame with " +
                          std::to_string(levels_.size()) + " levels needs " +
                          std::to_string(levels_.size() - 1) +
                          " transitions, got " +
                          std::to_string(transitions_.size()));
  }
}

namespace frames {

MotivicFrame cw_complex(std::size_t dimension) {
  std::vector<std::string> levels;
  std::vector<std::string> transitions;
  for (std::size_t i = 0; i <= dimension; ++i) {
    levels.push_back(std::to_string(i) + "-skeleton");
    if (i < dimension) {
      transitions.push_back("attach D^" + std::to_string(i + 1) +
                            " along S^" + std::to_string(i) + " -> x(" +
                            std::to_string(i) + ")");
    }
  }
  return {"CW complex", std::move(levels), std::move(transitions)};
}

MotivicFrame integration() {
  return {"integration",
          {"integrable function", "integral"},
          {"integrate"}};
}

MotivicFrame space() {
  return {"space",
          {"point", "set of points", "topological space"},
          {"collect points into a set", "put a topology on the set"}};
}

MotivicFrame variable_over(std::string_view collection) {
  std::string c(collection);
  return {c, {"MotFr0[" + c + "]", c}, {"collect points into " + c}};
}

}  // namespace frames

}  // namespace kirbycat
