#include <iostream>

#include "cli.hpp"
#include "qps/error.hpp"

namespace {

constexpr const char* kUsage =
    "usage: qps <field|state|grid|verify> [options]\n"
    "  --d P --n N [--poly TEXT] [--basis polynomial|normal|selfdual|LIST]\n"
    "  --ordering lex|dlog|FILE   --s -1|0|1   --point MU,NU   --squeeze ELEM\n"
    "  --state reference|mixed|FILE   --preset fig1|fig2|fig3\n"
    "  --format json|csv   --out PATH   --dims D[,D...]   --tol-scale X   --cross-check\n";

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args.front() == "--help" || args.front() == "-h") {
    std::cout << kUsage;
    return args.empty() ? 2 : 0;
  }
  qps::cli::RunConfig cfg;
  try {
    cfg = qps::cli::parse_args(args);
  } catch (const qps::Error& e) {
    std::cerr << "error: " << e.what() << "\n" << kUsage;
    return 2;
  }
  return qps::cli::run(cfg, std::cout, std::cerr);
}
