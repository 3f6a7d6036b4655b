#include <cstdio>

int main() {
  std::puts("hardynls: CLI not wired yet");
  return 1;
}
