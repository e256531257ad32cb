#include <fstream>
#include <iostream>

#include "said/cli.hpp"

int main(int argc, char** argv) {
  using namespace said::cli;
  RunConfig cfg;
  try {
    cfg = parse_args(argc, argv);
  } catch (const UsageError& e) {
    (e.exit_code() == 0 ? std::cout : std::cerr) << e.what() << '\n';
    return e.exit_code();
  }

  ReportRows report;
  try {
    report = run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "said: " << e.what() << '\n';
    return 2;
  }

  const std::string text = format_report(report, cfg.report);
  std::cout << text;
  if (cfg.report_path) {
    std::ofstream out(*cfg.report_path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) {
      std::cerr << "said: cannot write report to " << cfg.report_path->string() << '\n';
      return 1;
    }
  }
  for (const auto& err : report.errors()) std::cerr << "said: " << err << '\n';
  return report.ok ? 0 : 1;
}
