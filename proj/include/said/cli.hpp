/**
 * @file cli.hpp
 * @brief Batch front-end: argument parsing, per-image processing and
 *        PSNR / SSIM report rendering (CSV and Markdown).
 *
 * Kept in the header tree so the command-line surface is testable without
 * spawning the binary; tools/said_cli.cpp is only a thin main().
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "said/io.hpp"
#include "said/metrics.hpp"
#include "said/pipeline.hpp"

namespace said::cli {

namespace fs = std::filesystem;

enum class ReportFormat { Csv, Markdown };

struct RunConfig {
  std::vector<fs::path> inputs;
  std::vector<Method> methods{Method::Said};
  double scale = 0.0;
  fs::path output_dir = ".";
  SaidParams params;
  int lanczos_lobes = 3;
  std::optional<fs::path> reference_dir;
  ReportFormat report = ReportFormat::Csv;
  std::optional<fs::path> report_path;
  bool trace = false;
  int jobs = 1;
};

/// Parse failure or help request; `exit_code` is what main() should return.
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& msg, int exit_code) : std::runtime_error(msg), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

/// Shortest round-trip decimal, e.g. 4 -> "4", 2.5 -> "2.5".
inline std::string format_scale(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_fixed2(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline int default_jobs() {
  if (const char* env = std::getenv("SAID_JOBS")) {
    int v = 0;
    const std::string s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size() && v >= 1) return v;
  }
  return 1;
}

inline bool is_image_path(const fs::path& p) {
  try {
    io::format_from_extension(p);
    return true;
  } catch (const io::IoError&) {
    return false;
  }
}

/// Directories expand to their image files sorted by name; files pass through.
inline std::vector<fs::path> expand_inputs(const std::vector<fs::path>& raw) {
  std::vector<fs::path> out;
  for (const auto& p : raw) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p))
        if (e.is_regular_file() && is_image_path(e.path())) found.push_back(e.path());
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(p);
    }
  }
  return out;
}

inline RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig cfg;
  cfg.jobs = default_jobs();
  CLI::App app{"Structure-aware image downscaling with bicubic/Lanczos baselines and PSNR/SSIM reports",
               "said"};

  std::vector<std::string> methods{"said"};
  std::vector<std::string> inputs;
  std::string out = ".";
  std::string reference_dir;
  std::string report = "csv";
  std::string report_path;

  app.add_option("inputs", inputs, "Input images (PNG/PPM/PGM) or directories")->required();
  app.add_option("--method", methods, "said, bicubic or lanczos; repeat or comma-separate for several")
      ->delimiter(',')
      ->check(CLI::IsMember({"said", "bicubic", "lanczos"}));
  app.add_option("--scale", cfg.scale, "Downscaling factor d (> 1, non-integer allowed)")
      ->required()
      ->check([](const std::string& s) -> std::string {
        double v = 0;
        try {
          std::size_t used = 0;
          v = std::stod(s, &used);
          if (used != s.size()) return "scale must be a number";
        } catch (const std::exception&) {
          return "scale must be a number";
        }
        return v > 1.0 && std::isfinite(v) ? std::string{} : "scale must exceed 1";
      });
  app.add_option("--sigma", cfg.params.sigma, "Gaussian std-dev for unsharp masking")->capture_default_str();
  app.add_option("--gamma", cfg.params.gamma, "Sharpening strength")->capture_default_str();
  app.add_option("--alpha", cfg.params.alpha, "Texture gain on edges")->capture_default_str();
  app.add_option("--beta", cfg.params.beta, "Texture floor")->capture_default_str();
  app.add_flag("--antialias", cfg.params.antialias, "Stretch resampling kernels by the scale factor");
  app.add_flag("--texture-normalize", cfg.params.texture_normalize,
               "Scale the Laplacian texture map by its peak magnitude");
  app.add_option("--lobes", cfg.lanczos_lobes, "Lanczos lobes")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--reference-dir", reference_dir, "Directory of reference images paired by basename");
  app.add_option("--report", report, "Report format")->check(CLI::IsMember({"csv", "markdown"}));
  app.add_option("--report-file", report_path, "Also write the report to this path");
  app.add_flag("--trace", cfg.trace, "Write intermediate stages next to SAID outputs");
  app.add_option("--out", out, "Output directory")->capture_default_str();
  app.add_option("--jobs", cfg.jobs, "Images processed in parallel (default: $SAID_JOBS or 1)")
      ->check(CLI::PositiveNumber);

  std::vector<const char*> argv{"said"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help(), 0);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what() + std::string("\n") + app.help(), e.get_exit_code() == 0 ? 2 : e.get_exit_code());
  }

  try {
    cfg.params.validate();
  } catch (const ParameterError& e) {
    throw UsageError(e.what(), 2);
  }

  cfg.methods.clear();
  for (const auto& m : methods) {
    const Method parsed = parse_method(m);
    if (std::find(cfg.methods.begin(), cfg.methods.end(), parsed) == cfg.methods.end())
      cfg.methods.push_back(parsed);
  }
  cfg.inputs.assign(inputs.begin(), inputs.end());
  cfg.output_dir = out;
  if (!reference_dir.empty()) cfg.reference_dir = fs::path(reference_dir);
  if (!report_path.empty()) cfg.report_path = fs::path(report_path);
  cfg.report = report == "markdown" ? ReportFormat::Markdown : ReportFormat::Csv;
  return cfg;
}

inline RunConfig parse_args(int argc, const char* const* argv) {
  return parse_args(std::vector<std::string>(argv + 1, argv + argc));
}

struct ReportRow {
  std::string file;  // input basename
  Method method = Method::Said;
  double scale = 0.0;
  std::optional<MetricReport> metrics;
  std::string error;  // empty when the file was fully processed
};

struct MeanRow {
  Method method = Method::Said;
  double scale = 0.0;
  std::optional<MetricReport> metrics;  // unset when no file produced metrics
  std::size_t files = 0;
};

struct ReportRows {
  std::vector<ReportRow> rows;  // input order, grouped by method
  std::vector<MeanRow> means;   // one per method
  bool ok = true;

  std::vector<std::string> errors() const {
    std::vector<std::string> out;
    for (const auto& r : rows)
      if (!r.error.empty()) out.push_back(r.file + " [" + std::string(method_name(r.method)) + "]: " + r.error);
    return out;
  }
};

inline std::string output_name(const fs::path& input, Method m, double scale, const std::string& suffix = {}) {
  std::string name = input.stem().string() + "_" + std::string(method_name(m)) + "_x" + format_scale(scale);
  if (!suffix.empty()) name += "_" + suffix;
  return name + input.extension().string();
}

inline std::optional<fs::path> find_reference(const fs::path& dir, const fs::path& input) {
  const fs::path exact = dir / input.filename();
  if (fs::is_regular_file(exact)) return exact;
  std::vector<fs::path> candidates;
  if (fs::is_directory(dir))
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_regular_file() && e.path().stem() == input.stem() && is_image_path(e.path()))
        candidates.push_back(e.path());
  if (candidates.empty()) return std::nullopt;
  std::sort(candidates.begin(), candidates.end());
  return candidates.front();
}

namespace detail {

inline Image texture_preview(const Image& tex) {
  double peak = 0.0;
  for (const auto& c : tex.planes())
    for (double s : c.samples()) peak = std::max(peak, std::abs(s));
  return map_channels(tex, [peak](const Plane& c) {
    Plane out = c;
    for (auto& s : out.samples()) s = peak > 0.0 ? 0.5 + 0.5 * s / peak : 0.5;
    return out;
  });
}

inline void write_trace(const SaidTrace& t, const fs::path& input, const RunConfig& cfg) {
  auto put = [&](const Image& img, const char* stage) {
    io::save(clamp_unit(img), cfg.output_dir / output_name(input, Method::Said, cfg.scale, stage));
  };
  put(Image(t.edge_map.plane), "edge");
  put(t.blurred, "blurred");
  put(t.sharpened, "sharpened");
  put(t.bicubic, "bicubic");
  put(texture_preview(t.texture), "texture");
  put(t.blended, "blended");
}

inline Image downscale(const Image& img, Method m, const RunConfig& cfg, bool trace, const fs::path& input) {
  const auto spec = ScaleSpec::by_factor(cfg.scale, cfg.params.antialias);
  if (m != Method::Said) return baseline_downscale(img, spec, m, cfg.lanczos_lobes);
  auto res = said_downscale(img, spec, cfg.params, trace);
  if (res.trace) write_trace(*res.trace, input, cfg);
  return std::move(res.image);
}

// All methods for one input; rows come back in method order.
inline std::vector<ReportRow> process_one(const fs::path& input, const RunConfig& cfg) {
  std::vector<ReportRow> rows;
  for (Method m : cfg.methods) rows.push_back({input.filename().string(), m, cfg.scale, std::nullopt, {}});

  Image src;
  std::optional<Image> ref;
  try {
    src = io::load(input);
  } catch (const std::exception& e) {
    for (auto& r : rows) r.error = e.what();
    return rows;
  }
  std::string ref_error;
  if (cfg.reference_dir) {
    try {
      if (auto p = find_reference(*cfg.reference_dir, input))
        ref = io::load(*p);
      else
        ref_error = "no reference image in '" + cfg.reference_dir->string() + "'";
    } catch (const std::exception& e) {
      ref_error = std::string("reference: ") + e.what();
    }
  }

  for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
    auto& row = rows[i];
    try {
      const Image out = downscale(src, row.method, cfg, cfg.trace, input);
      io::save(out, cfg.output_dir / output_name(input, row.method, cfg.scale));
      if (!ref_error.empty()) {
        row.error = ref_error;
      } else if (ref) {
        if (!ref->same_shape(out)) {
          row.error = "reference is " + std::to_string(ref->width()) + "x" + std::to_string(ref->height()) + "x" +
                      std::to_string(ref->channels()) + ", output is " + std::to_string(out.width()) + "x" +
                      std::to_string(out.height()) + "x" + std::to_string(out.channels());
        } else {
          row.metrics = evaluate(out, *ref);
        }
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  }
  return rows;
}

}  // namespace detail

/// Arithmetic mean over the rows that have metrics; inf if any PSNR is inf.
inline MeanRow aggregate(Method m, double scale, const std::vector<ReportRow>& rows) {
  MeanRow mean{m, scale, std::nullopt, 0};
  double psnr_sum = 0.0, ssim_sum = 0.0;
  for (const auto& r : rows) {
    if (r.method != m || !r.metrics) continue;
    psnr_sum += r.metrics->psnr_db;
    ssim_sum += r.metrics->ssim;
    ++mean.files;
  }
  if (mean.files > 0) {
    const auto n = static_cast<double>(mean.files);
    mean.metrics = MetricReport{psnr_sum / n, ssim_sum / n};
  }
  return mean;
}

/**
 * @brief Processes every input with every configured method.
 *
 * Inputs run concurrently up to cfg.jobs; rows keep input order. A single
 * input instead hands the jobs budget to the row-parallel filters.
 */
inline ReportRows run(const RunConfig& config) {
  if (config.inputs.empty()) throw ParameterError("no inputs given");
  if (!(config.scale > 1.0)) throw ParameterError("scale must exceed 1");
  config.params.validate();

  RunConfig cfg = config;
  cfg.inputs = expand_inputs(config.inputs);
  if (cfg.inputs.empty()) throw ParameterError("no images found in the given inputs");
  fs::create_directories(cfg.output_dir);

  const std::size_t n = cfg.inputs.size();
  std::vector<std::vector<ReportRow>> per_input(n);
  const int saved_threads = num_threads();
  const auto jobs = static_cast<std::size_t>(std::max(1, cfg.jobs));
  if (n == 1 || jobs == 1) {
    set_num_threads(n == 1 ? cfg.jobs : 1);
    for (std::size_t i = 0; i < n; ++i) per_input[i] = detail::process_one(cfg.inputs[i], cfg);
  } else {
    set_num_threads(1);
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(jobs, n); ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) per_input[i] = detail::process_one(cfg.inputs[i], cfg);
      });
  }
  set_num_threads(saved_threads);

  ReportRows report;
  for (std::size_t m = 0; m < cfg.methods.size(); ++m)
    for (std::size_t i = 0; i < n; ++i) report.rows.push_back(per_input[i][m]);
  for (Method m : cfg.methods) report.means.push_back(aggregate(m, cfg.scale, report.rows));
  report.ok = std::all_of(report.rows.begin(), report.rows.end(), [](const auto& r) { return r.error.empty(); });
  return report;
}

/// Columns file,method,scale,psnr_db,ssim; one "mean" row after each method's files.
inline std::string format_csv(const ReportRows& report) {
  std::ostringstream os;
  os << "file,method,scale,psnr_db,ssim\n";
  auto cells = [](const std::optional<MetricReport>& m) {
    return m ? format_fixed2(m->psnr_db) + "," + format_fixed2(m->ssim) : std::string(",");
  };
  for (const auto& mean : report.means) {
    for (const auto& r : report.rows)
      if (r.method == mean.method)
        os << r.file << ',' << method_name(r.method) << ',' << format_scale(r.scale) << ',' << cells(r.metrics)
           << '\n';
    os << "mean," << method_name(mean.method) << ',' << format_scale(mean.scale) << ',' << cells(mean.metrics)
       << '\n';
  }
  return os.str();
}

/// One row per method, one "PSNR / SSIM" column per file plus a Mean column.
inline std::string format_markdown(const ReportRows& report) {
  std::vector<std::string> files;
  for (const auto& r : report.rows)
    if (std::find(files.begin(), files.end(), r.file) == files.end()) files.push_back(r.file);

  auto cell = [](const std::optional<MetricReport>& m) {
    return m ? format_fixed2(m->psnr_db) + " / " + format_fixed2(m->ssim) : std::string("-");
  };
  std::ostringstream os;
  const std::string scale = report.means.empty() ? "" : format_scale(report.means.front().scale);
  os << "| Method (x" << scale << ") |";
  for (const auto& f : files) os << ' ' << f << " |";
  os << " Mean |\n|---|";
  for (std::size_t i = 0; i < files.size(); ++i) os << "---|";
  os << "---|\n";
  for (const auto& mean : report.means) {
    os << "| " << method_name(mean.method) << " |";
    for (const auto& f : files) {
      for (const auto& r : report.rows)
        if (r.method == mean.method && r.file == f) os << ' ' << cell(r.metrics) << " |";
    }
    os << ' ' << cell(mean.metrics) << " |\n";
  }
  return os.str();
}

inline std::string format_report(const ReportRows& report, ReportFormat fmt) {
  return fmt == ReportFormat::Csv ? format_csv(report) : format_markdown(report);
}

}  // namespace said::cli
