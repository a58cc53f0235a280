// Command-line front end; thin wrapper around the scenario harness.
#include <cstdio>

int main(int, char**) {
  std::fprintf(stderr, "mlsc: harness not wired up yet\n");
  return 2;
}
