// Timing comparison: OpenMP kernels vs the serial reference paths.
#include <cstdio>

int main() {
  std::printf("bench_kernels: nothing to time yet\n");
  return 0;
}
