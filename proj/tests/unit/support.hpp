#ifndef TLAB_TESTS_SUPPORT_HPP
#define TLAB_TESTS_SUPPORT_HPP

#include "tlab/estimators.hpp"
#include "tlab/geometry.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>

namespace tlab::test {

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

/// Smaller sample counts than the defaults; enough for the 2-D catalog pairs.
inline EstimatorConfig quick_config(std::size_t samples = 48) {
  EstimatorConfig c;
  c.samples = samples;
  c.translations = 8;
  return c;
}

inline nlohmann::json load_fixture(const std::string& name) {
  std::ifstream in(std::filesystem::path(TLAB_FIXTURE_DIR) / name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  return nlohmann::json::parse(in);
}

inline std::filesystem::path scenario_dir() { return TLAB_SCENARIO_DIR; }

/// Fresh empty directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::path(TLAB_SCRATCH_DIR) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

#define EXPECT_THROW_KIND(stmt, expected_kind)                                   \
  do {                                                                           \
    try {                                                                        \
      stmt;                                                                      \
      ADD_FAILURE() << "no exception from " #stmt;                               \
    } catch (const ::tlab::Error& e) {                                           \
      EXPECT_EQ(e.kind(), expected_kind) << e.what();                            \
    }                                                                            \
  } while (0)

}  // namespace tlab::test

#endif  // TLAB_TESTS_SUPPORT_HPP
