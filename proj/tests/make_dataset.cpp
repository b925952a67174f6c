// Writes a synthetic labeled dataset for the CLI smoke tests:
//   make_dataset DIR N [unlabeled]

#include <cstdio>
#include <cstdlib>
#include <string>

#include "test_support.hpp"

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s DIR N [unlabeled]\n", argv[0]);
    return 2;
  }
  const bool labeled = !(argc > 3 && std::string(argv[3]) == "unlabeled");
  skillbench::testing::write_synthetic_dataset(argv[1], std::atoi(argv[2]), labeled);
  return 0;
}
