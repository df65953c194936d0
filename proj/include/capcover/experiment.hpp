#pragma once

#include "capcover/construction.hpp"
#include "capcover/io.hpp"
#include "capcover/metrics.hpp"

namespace capcover {

struct ExperimentRecord {
  ExperimentRow row;
  std::vector<long> f_vector;
  std::map<int, int> histogram;  // packing classes, when requested
};

struct FitRecord {
  std::string body;
  int dim = 0;
  std::string method;
  ScalingFit fit;
};

struct ExperimentOutput {
  std::vector<ExperimentRecord> records;
  std::vector<FitRecord> fits;
};

// grid: {"bodies": [spec...], "eps": [...], "methods": ["layered"|"dudley"|"bi"...],
//        "seeds": [...], "histogram": bool}. Cells run in parallel; records keep grid order.
ExperimentOutput run_experiment(const json& grid);

json experiment_to_json(const ExperimentOutput& out);
json result_to_json(const ApproximationResult& r, const std::string& body);
json packing_to_json(const Packing& p, const std::string& body);

}  // namespace capcover
