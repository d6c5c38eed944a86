#pragma once

#include <string>
#include <variant>
#include <vector>

#include "sll/core.hpp"
#include "sll/matrix.hpp"

namespace sll {

/// Shortest round-trip decimal representation; all CSV writers use it so
/// equal doubles always serialize to equal bytes.
std::string format_double(double value);

/// Loads a dataset CSV: feature columns prefixed `f_`, plus either a hard
/// `label` column or soft `p_0..p_{k-1}` columns (exactly one of the two).
/// Soft rows must sum to 1 within 1e-6 and are renormalized exactly.
std::variant<HardDataset, SoftDataset> load_dataset(const std::string& path);

HardDataset load_hard_dataset(const std::string& path);
SoftDataset load_soft_dataset(const std::string& path);

void write_hard_csv(const std::string& path, const HardDataset& data);
void write_soft_csv(const std::string& path, const SoftDataset& data);

/// Rows of a crowd-confidence file: binary `label` plus an integer
/// `confidence` column on the 5..10 scale.
struct ConfidenceData {
  Matrix features;
  std::vector<int> labels;
  std::vector<int> confidences;
};

ConfidenceData load_confidence_csv(const std::string& path);

/// Converts label+confidence rows into a binary soft dataset via
/// confidence_to_soft.
SoftDataset convert_confidence(const ConfidenceData& data);

}  // namespace sll
