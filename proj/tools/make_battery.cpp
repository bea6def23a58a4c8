// Writes the shipped scenario battery and the negative control.
#include "tlab/scenario.hpp"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <string>

namespace {

std::string slug(const std::string& label) {
  std::string out;
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path("scenarios");
  fs::create_directories(root / "battery");
  fs::create_directories(root / "negative");
  fs::create_directories(root / "extra");
  const auto battery = tlab::catalog::battery();
  for (std::size_t i = 0; i < battery.size(); ++i) {
    char prefix[8];
    std::snprintf(prefix, sizeof prefix, "%02zu_", i + 1);
    tlab::save_scenario(battery[i], root / "battery" / (prefix + slug(battery[i].label) + ".json"));
  }
  auto broken = tlab::catalog::two_lines(1.0471975511965976);
  broken.label = "corrupted intersection";
  broken.intersection = tlab::SetOracle::points({tlab::Vector::Unit(2, 0) * 0.5});
  tlab::save_scenario(broken, root / "negative" / "corrupted_intersection.json");
  tlab::save_scenario(tlab::catalog::planes_3d(1.0471975511965976), root / "extra" / "planes_3d.json");
  return 0;
}
