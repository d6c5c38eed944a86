#pragma once

#include <vector>

#include "sll/core.hpp"
#include "sll/matrix.hpp"

namespace sll {

/// Total variation distance between two distributions over the same classes:
/// half the L1 distance. Lies in [0, 1]; zero iff the inputs are equal.
double tvd(const ClassDistribution& a, const ClassDistribution& b);

/// Mean total variation distance between paired predictions and targets.
double mean_tvd(const Matrix& predicted, const std::vector<ClassDistribution>& target);

/// Area under the ROC curve from scores for the positive class, computed as
/// the rank statistic: the fraction of (positive, negative) pairs ranked
/// correctly, with ties counting half.
double auc_binary(const std::vector<double>& scores, const std::vector<int>& labels);

/// Multi-class AUC: unweighted mean of one-vs-rest binary AUCs over the
/// classes that appear in `labels`. With two present classes this equals the
/// binary AUC. Throws SingleClassError when only one class is present.
double auc(const Matrix& scores, const std::vector<int>& labels);

}  // namespace sll
