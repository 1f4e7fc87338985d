#pragma once

#include <string_view>

#include "allocsim/errors.hpp"

namespace allocsim {

enum class Mechanism { SerialDictatorship, NaiveBoston, AdaptiveBoston };

inline constexpr std::string_view mechanism_name(Mechanism m) {
  switch (m) {
    case Mechanism::SerialDictatorship:
      return "sd";
    case Mechanism::NaiveBoston:
      return "nb";
    case Mechanism::AdaptiveBoston:
      return "ab";
  }
  return "?";
}

inline Mechanism mechanism_from_name(std::string_view name) {
  if (name == "sd") return Mechanism::SerialDictatorship;
  if (name == "nb") return Mechanism::NaiveBoston;
  if (name == "ab") return Mechanism::AdaptiveBoston;
  throw Error("unknown mechanism: " + std::string(name));
}

}  // namespace allocsim
