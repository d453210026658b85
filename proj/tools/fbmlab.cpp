#include <iostream>
#include <string>
#include <vector>

#include "fbmlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args.front() == "--help" || args.front() == "-h") {
    std::cout << "usage: fbmlab <sample|persist|current|functionals|laplace|oracle> [flags]\n"
                 "  --hurst H  --grid-log2 n  --horizon T  --paths N  --seed s\n"
                 "  --boundary const:<c>|logdec:y0=..,y1=..,gamma=..|loginc:...\n"
                 "  --mode grid|integer  --k list  --horizons list  --epsilons list\n"
                 "  --lambdas list  --variant JT|JN  --scaling grid|self-similar\n"
                 "  --log-correction  --output file.csv  --config file\n"
                 "FBMLAB_THREADS caps the worker thread count.\n";
    return args.empty() ? 2 : 0;
  }
  return fbmlab::main_entry(args, std::cout, std::cerr);
}
