#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "histlayer/benchmark.hpp"
#include "histlayer/core_types.hpp"
#include "histlayer/gradcheck.hpp"
#include "histlayer/kernels.hpp"
#include "histlayer/pipeline.hpp"
#include "histlayer/train.hpp"

namespace histlayer {

using Json = nlohmann::ordered_json;

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

/// Writes to `<path>.tmp` and renames over `path`, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// One decimal value per line; an optional first line starting with '#' is a header.
/// Blank lines are skipped. Errors cite the 1-based line number.
SampleBatch parse_samples(std::string_view text, std::string_view source = "<input>");
SampleBatch read_samples(const std::filesystem::path& path);

std::string format_samples(const SampleBatch& batch, const Json& header = nullptr);
void write_samples(const SampleBatch& batch, const std::filesystem::path& path,
                   const Json& header = nullptr);

Json to_json(const BinSpec& bins);
BinSpec bins_from_json(const Json& j);
Json to_json(const Kernel& kernel);

/// {"bins", "values", "normalization", "kernel", "n_samples", "config"}
Json histogram_json(const HistogramVector& h, const BinSpec& bins, std::string_view kernel,
                    const Json& config);
void write_histogram(const HistogramVector& h, const BinSpec& bins, std::string_view kernel,
                     const Json& config, const std::filesystem::path& path);

struct HistogramFile {
  HistogramVector histogram;
  BinSpec bins;
  std::string kernel;
  Json config;
};

HistogramFile histogram_from_json(const Json& j);
HistogramFile read_histogram(const std::filesystem::path& path);

Json report_json(const ErrorReport& report, const Json& config);
/// Aligned-column table, one row per kernel.
std::string format_report_table(const ErrorReport& report);
/// bin_index,center,oracle,histlayer,lbf,rbf,kde; kernels absent from the report stay empty.
std::string format_per_bin_csv(const ErrorReport& report);

Json to_json(const GradCheckReport& report);
Json to_json(const EquivalenceReport& report);

Json to_json(const Generator& g);
/// step,loss,grad_norm
std::string format_trace_csv(const TrainTrace& trace);
Json train_result_json(const TrainTrace& trace, const HistogramVector& target, const BinSpec& bins,
             const Json& config);

}  // namespace histlayer
