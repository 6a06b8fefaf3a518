#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "fcm/io.hpp"
#include "fcm/simulation.hpp"

namespace fcm::test {

inline std::filesystem::path data(const std::string& name) { return std::filesystem::path(FCM_TEST_DATA) / name; }

/// The eight-concept map and its initial state.
inline WeightMatrix map8() { return io::read_matrix(data("map8.csv")); }
inline StateVector map8_state() { return io::read_state(data("map8_state.json"), map8().concepts()); }

inline WeightMatrix water_tank() { return io::read_matrix(data("water_tank.csv")); }
inline StateVector water_tank_state() { return io::read_state(data("water_tank_state.json"), water_tank().concepts()); }

/// Numeric body of a CSV table whose first column holds row labels.
inline Eigen::MatrixXd labelled_table(const std::string& name) {
  std::istringstream in(io::read_text(data(name)));
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = io::split_csv_line(line);
    std::vector<double> row;
    for (std::size_t i = 1; i < cells.size(); ++i) row.push_back(std::stod(cells[i]));
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("fcm_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fcm::test
