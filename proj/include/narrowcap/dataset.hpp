#pragma once

#include <string>

#include "narrowcap/geometry.hpp"

namespace narrowcap {

/// Finite samples with real-valued targets.
struct LabeledDataset {
    PointCloud points;
    Vec targets;

    std::size_t size() const { return points.size(); }
    /// Distinct target values in ascending order.
    Vec classes() const;
};

// Point clouds as CSV (one point per row, decimal floats) and JSON
// (array of arrays). Datasets append the target as the last CSV column.

std::string cloud_to_csv(const PointCloud& cloud);
PointCloud cloud_from_csv(const std::string& text);
std::string cloud_to_json(const PointCloud& cloud);
PointCloud cloud_from_json(const std::string& text);

std::string dataset_to_csv(const LabeledDataset& data);
LabeledDataset dataset_from_csv(const std::string& text);

Vec values_from_csv(const std::string& text);
std::string values_to_csv(const Vec& values);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace narrowcap
