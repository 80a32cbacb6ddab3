#include "cmpkit/error.hpp"

namespace cmpkit {

std::string_view to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::domain: return "domain";
    case Stage::series: return "series";
    case Stage::bracket: return "bracket";
    case Stage::solve: return "solve";
    case Stage::fit: return "fit";
    case Stage::grid: return "grid";
    case Stage::parse: return "parse";
  }
  return "unknown";
}

}  // namespace cmpkit
