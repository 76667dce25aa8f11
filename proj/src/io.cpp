#include "histlayer/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <type_traits>

namespace histlayer {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw ValidationError("cannot format value");
  return std::string(buf.data(), end);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw ValidationError("failed writing '" + path.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ValidationError("cannot move output into place at '" + path.string() + "': " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> doubles_from(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw ValidationError(std::string("missing array '") + key + "'");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ValidationError(std::string("non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

SampleBatch parse_samples(std::string_view text, std::string_view source) {
  std::vector<double> values;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line_no == 1) continue;
      throw ValidationError(std::string(source) + ":" + std::to_string(line_no) +
                            ": header line allowed only on line 1");
    }
    double v = 0.0;
    const char* first = line.data();
    const char* last = line.data() + line.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
      throw ValidationError(std::string(source) + ":" + std::to_string(line_no) +
                            ": malformed value '" + std::string(line) + "'");
    if (!std::isfinite(v))
      throw ValidationError(std::string(source) + ":" + std::to_string(line_no) +
                            ": non-finite value '" + std::string(line) + "'");
    values.push_back(v);
  }
  return validate_samples(std::move(values), Provenance::file);
}

SampleBatch read_samples(const std::filesystem::path& path) {
  return parse_samples(read_file(path), path.string());
}

std::string format_samples(const SampleBatch& batch, const Json& header) {
  std::string out;
  if (!header.is_null()) out += "# " + header.dump() + "\n";
  for (double v : batch.values) {
    out += format_double(v);
    out += '\n';
  }
  return out;
}

void write_samples(const SampleBatch& batch, const std::filesystem::path& path, const Json& header) {
  write_file_atomic(path, format_samples(batch, header));
}

Json to_json(const BinSpec& bins) {
  return Json{{"centers", std::vector<double>(bins.centers().begin(), bins.centers().end())},
              {"half_widths", std::vector<double>(bins.half_widths().begin(), bins.half_widths().end())}};
}

BinSpec bins_from_json(const Json& j) {
  return BinSpec(doubles_from(j, "centers"), doubles_from(j, "half_widths"));
}

Json to_json(const Kernel& kernel) {
  Json j{{"kind", to_string(kernel.kind())}};
  std::visit(
      [&j](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, HistLayerParams>) j["base"] = p.base;
        else if constexpr (std::is_same_v<P, LbfParams>) j["slopes"] = p.slopes;
        else if constexpr (std::is_same_v<P, RbfParams>) j["gammas"] = p.gammas;
        else j["bandwidth"] = p.bandwidth;
      },
      kernel.params());
  return j;
}

Json histogram_json(const HistogramVector& h, const BinSpec& bins, std::string_view kernel,
                    const Json& config) {
  return Json{{"bins", to_json(bins)},
              {"values", h.values},
              {"normalization", to_string(h.normalization)},
              {"kernel", kernel},
              {"n_samples", h.n_samples},
              {"config", config.is_null() ? Json::object() : config}};
}

void write_histogram(const HistogramVector& h, const BinSpec& bins, std::string_view kernel,
                     const Json& config, const std::filesystem::path& path) {
  write_file_atomic(path, histogram_json(h, bins, kernel, config).dump(2) + "\n");
}

HistogramFile histogram_from_json(const Json& j) {
  try {
    HistogramFile f{{}, bins_from_json(j.at("bins")), j.value("kernel", ""),
                    j.value("config", Json::object())};
    f.histogram.values = doubles_from(j, "values");
    f.histogram.normalization = parse_normalization(j.at("normalization").get<std::string>());
    f.histogram.n_samples = j.at("n_samples").get<std::size_t>();
    if (f.histogram.size() != f.bins.size())
      throw ValidationError("histogram has " + std::to_string(f.histogram.size()) +
                            " values for " + std::to_string(f.bins.size()) + " bins");
    return f;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed histogram JSON: ") + e.what());
  }
}

HistogramFile read_histogram(const std::filesystem::path& path) {
  try {
    return histogram_from_json(Json::parse(read_file(path)));
  } catch (const Json::parse_error& e) {
    throw ValidationError("'" + path.string() + "': " + e.what());
  }
}

Json report_json(const ErrorReport& report, const Json& config) {
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    rows.push_back(Json{{"kernel", to_string(row.kernel.kind())},
                        {"params", to_json(row.kernel)},
                        {"absolute_error", row.absolute_error},
                        {"counts_error", row.counts_error},
                        {"per_bin", row.per_bin},
                        {"histogram", row.histogram.values}});
  }
  Json j{{"config", config.is_null() ? Json::object() : config},
         {"boundary", to_string(report.options.boundary)},
         {"normalization", to_string(report.options.normalization)},
         {"metric", to_string(report.options.metric)},
         {"n_samples", report.n_samples},
         {"bins", to_json(report.bins)},
         {"oracle", report.oracle.values},
         {"rows", rows}};
  if (report.histlayer_bound) {
    const auto& b = *report.histlayer_bound;
    j["histlayer_bound"] = Json{{"base", b.base},
                                {"oracle", "open"},
                                {"n_in_range", b.n_in_range},
                                {"limit", b.limit},
                                {"sum_abs_error", b.error},
                                {"holds", b.holds}};
  }
  return j;
}

std::string format_report_table(const ErrorReport& report) {
  std::ostringstream out;
  out << "metric=" << to_string(report.options.metric)
      << " normalization=" << to_string(report.options.normalization)
      << " boundary=" << to_string(report.options.boundary) << " N=" << report.n_samples
      << " K=" << report.bins.size() << "\n";
  out << std::left << std::setw(12) << "kernel" << std::right << std::setw(18) << "absolute_error"
      << std::setw(18) << "counts_error" << "\n";
  for (const auto& row : report.rows) {
    out << std::left << std::setw(12) << to_string(row.kernel.kind()) << std::right
        << std::setw(18) << std::setprecision(6) << row.absolute_error << std::setw(18)
        << std::setprecision(6) << row.counts_error << "\n";
  }
  if (report.histlayer_bound) {
    const auto& b = *report.histlayer_bound;
    out << "histlayer bound (open-interval oracle): error " << std::setprecision(6) << b.error
        << " <= " << b.limit << (b.holds ? "  ok" : "  VIOLATED") << "\n";
  }
  return out.str();
}

std::string format_per_bin_csv(const ErrorReport& report) {
  constexpr std::array kinds{KernelKind::histlayer, KernelKind::lbf, KernelKind::rbf, KernelKind::kde};
  std::string out = "bin_index,center,oracle,histlayer,lbf,rbf,kde\n";
  for (std::size_t k = 0; k < report.bins.size(); ++k) {
    out += std::to_string(k) + "," + format_double(report.bins.center(k)) + "," +
           format_double(report.oracle.values[k]);
    for (KernelKind kind : kinds) {
      out += ",";
      if (const ErrorRow* row = report.find(kind)) out += format_double(row->histogram.values[k]);
    }
    out += "\n";
  }
  return out;
}

Json to_json(const GradCheckReport& r) {
  const auto& w = r.worst_point;
  return Json{{"kernel", to_string(r.kernel)},
              {"n_points", r.n_points},
              {"n_nonzero", r.n_nonzero},
              {"excluded_points", r.excluded_points},
              {"epsilon", r.epsilon},
              {"exclusion_radius", r.exclusion_radius},
              {"max_rel_error", r.max_rel_error},
              {"max_raw_rel_error", r.max_raw_rel_error},
              {"worst_point", Json{{"x", w.x},
                                   {"mu", w.mu},
                                   {"omega", w.omega},
                                   {"param", w.param},
                                   {"coordinate", to_string(w.coordinate)},
                                   {"analytic", w.analytic},
                                   {"numeric", w.numeric}}}};
}

Json to_json(const EquivalenceReport& r) {
  return Json{{"n_samples", r.n_samples},
              {"max_abs_discrepancy", r.max_abs_discrepancy},
              {"contract", r.contract},
              {"bitwise_equal", r.bitwise_equal}};
}

Json to_json(const Generator& g) {
  Json j{{"kind", to_string(g.kind())}};
  const auto p = g.params();
  if (g.kind() == GeneratorKind::affine) {
    j["a"] = p[0];
    j["b"] = p[1];
  } else {
    const std::size_t h = g.hidden();
    j["hidden"] = h;
    j["W1"] = std::vector<double>(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(h));
    j["b1"] = std::vector<double>(p.begin() + static_cast<std::ptrdiff_t>(h),
                                  p.begin() + static_cast<std::ptrdiff_t>(2 * h));
    j["W2"] = std::vector<double>(p.begin() + static_cast<std::ptrdiff_t>(2 * h),
                                  p.begin() + static_cast<std::ptrdiff_t>(3 * h));
    j["b2"] = p[3 * h];
  }
  return j;
}

std::string format_trace_csv(const TrainTrace& trace) {
  std::string out = "step,loss,grad_norm\n";
  for (const auto& r : trace.records)
    out += std::to_string(r.step) + "," + format_double(r.loss) + "," + format_double(r.grad_norm) + "\n";
  return out;
}

Json train_result_json(const TrainTrace& trace, const HistogramVector& target, const BinSpec& bins,
             const Json& config) {
  const auto& first = trace.records.front();
  const auto& last = trace.records.back();
  const HistogramVector& before = trace.initial_histogram;
  const HistogramVector& after = trace.final_histogram;
  double d0 = 0.0;
  double d1 = 0.0;
  for (std::size_t k = 0; k < target.size(); ++k) {
    d0 += std::abs(before.values[k] - target.values[k]);
    d1 += std::abs(after.values[k] - target.values[k]);
  }
  return Json{{"config", config.is_null() ? Json::object() : config},
              {"bins", to_json(bins)},
              {"steps", last.step},
              {"initial_loss", first.loss},
              {"final_loss", last.loss},
              {"initial_generator", to_json(trace.initial)},
              {"final_generator", to_json(trace.final)},
              {"target", target.values},
              {"histlayer_before", before.values},
              {"histlayer_after", after.values},
              {"histlayer_distance_before", d0},
              {"histlayer_distance_after", d1}};
}

}  // namespace histlayer
