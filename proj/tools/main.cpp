#include <cstdio>

int main() {
  std::puts("sympl: placeholder");
  return 0;
}
