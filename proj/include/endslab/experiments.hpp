#pragma once

#include "endslab/lab.hpp"

namespace endslab {

/// Experiment table behind experiment_catalog().
std::vector<ExperimentInfo> lab_experiments();

/// Dispatch without key validation (run() validates first).
ExperimentReport run_lab_experiment(const std::string& name, const ExperimentConfig& config);

/// z at radius r0 on the pole and z' at angle gamma with |z - z'| = d on a
/// flat end (d > r0 sin gamma or d = 0).
std::pair<PointM, PointM> flat_pair(int n, double r0, double gamma, double d);

}  // namespace endslab
