#include "tadi/directions.hpp"

namespace tadi {

DirectionStrategy parse_direction_strategy(const std::string& name) {
  if (name == "full") return DirectionStrategy::Full;
  if (name == "projected") return DirectionStrategy::Projected;
  if (name == "residual") return DirectionStrategy::Residual;
  if (name == "cyclic") return DirectionStrategy::Cyclic;
  if (name == "random") return DirectionStrategy::Random;
  throw InputError("unknown direction strategy '" + name + "'");
}

std::string direction_strategy_name(DirectionStrategy s) {
  switch (s) {
    case DirectionStrategy::Full:
      return "full";
    case DirectionStrategy::Projected:
      return "projected";
    case DirectionStrategy::Residual:
      return "residual";
    case DirectionStrategy::Cyclic:
      return "cyclic";
    case DirectionStrategy::Random:
      return "random";
  }
  return "unknown";
}

}  // namespace tadi
